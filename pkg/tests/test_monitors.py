from fractions import Fraction as F

from hypothesis import given, strategies as st

from truthseekers import (
    BetaSchedule, Constant, Periodic, SystemConfig, analyze, detect_good_iterations, fixture,
    phase_bounds, run_monitors, simulate, uniform_config,
)
from truthseekers.monitors import (
    monitor_containment, monitor_contraction, monitor_final, monitor_good_iterations,
    monitor_hope_monotone, monitor_lonely_contraction, monitor_near_seeker, monitor_phase1,
    monitor_settled, phase1_holds,
)

from conftest import eps_config, strict_configs


def lone(x0, h, alpha, rule):
    return SystemConfig(1, h, F(1, 10), alpha, F(1, 2), (rule,), BetaSchedule.from_matrix([[F(1, 2)]]), (x0,))


# -- phase bounds -------------------------------------------------------------------


def test_phase_bounds_at_clusters_scale():
    b = phase_bounds(12, F(1, 10), F(1, 2), F(1, 12))
    assert b.T1 == 3 * (14 + 69120) == 207402
    assert b.T2 - b.T1 == 36 * 4 * 12**4


def test_phase_bounds_at_the_largest_legal_weights():
    # beta capped at 1/2: 24 / (1 * 1 * 1/4) = 96
    assert phase_bounds(5, 1, 1, F(1, 2)).T1 == 3 * (5 + 2 + 96)


def test_second_phase_length_for_halves():
    b = phase_bounds(3, F(1, 4), F(1, 2), F(1, 2))
    assert b.T2 - b.T1 == 2304 and b.T1 > 0


# -- lone seeker --------------------------------------------------------------------


def test_lone_seeker_decays_at_exactly_the_bound():
    traj = simulate(lone(1, 0, F(1, 2), Constant(F(1, 2))), 8)
    assert [s.x[0] for s in traj.states] == [F(1, 2**t) for t in range(9)]
    assert monitor_lonely_contraction(traj).status == "pass"


def test_full_truth_weight_jumps_to_truth():
    assert simulate(lone(1, F(1, 3), F(1, 2), Constant(1)), 1).x(1) == (F(1, 3),)


def test_alternating_truth_weight_beats_the_bound_on_strong_steps():
    traj = simulate(lone(1, 0, F(1, 3), Periodic((F(1, 3), F(2, 3)))), 6)
    d = [s.x[0] for s in traj.states]
    assert d[1] == F(2, 3) and d[2] == F(2, 9)   # 2/9 < (2/3)^2
    assert d[2] < F(4, 9)
    assert monitor_lonely_contraction(traj).passed


def test_lonely_monitor_needs_one_seeker():
    traj = simulate(fixture("five_clusters").config, 2)
    assert monitor_lonely_contraction(traj).status == "vacuous"


# -- containment and monotone hope interval ------------------------------------------


def test_containment_on_clusters():
    v = monitor_containment(simulate(fixture("five_clusters").config, 4))
    assert v.status == "pass" and v.checked == 4 * 12


def test_lonely_seeker_below_truth_moves_towards_it():
    c = eps_config([0, 5], F(1, 10), 2, seekers=(0,))
    traj = simulate(c, 1)
    assert 0 < traj.x(1)[0] <= c.h


def test_hope_monotone_on_clusters_and_at_rest():
    traj = simulate(fixture("five_clusters").config, 6)
    assert monitor_hope_monotone(traj).status == "pass"
    snaps = analyze(traj)
    at_rest = {(s.hope.lower, s.hope.upper, s.hope.members) for s in snaps[3:]}
    assert len(at_rest) == 1


@given(strict_configs(max_n=8), st.integers(1, 12))
def test_convexity_monitors_never_fire(config, steps):
    traj = simulate(config, steps)
    assert monitor_containment(traj).findings == ()
    assert monitor_hope_monotone(traj).findings == ()


# -- good iterations ------------------------------------------------------------------


def test_member_count_drop_fires_in_clusters():
    rep = detect_good_iterations(simulate(fixture("five_clusters").config, 4))
    first = {e.condition for e in rep.events if e.t == 0 and e.r == 1}
    assert "members_decreased" in first   # 12 members -> 5
    assert rep.chain[0] == (0, 1)


def test_nothing_fires_at_rest_inside_the_band():
    c = eps_config([F(5, 2), F(5, 2)], F(1, 10), F(5, 2), seekers=(0, 1))
    rep = detect_good_iterations(simulate(c, 6))
    assert rep.events == () and rep.chain == ()
    assert rep.phase1_at == 0


def test_lower_end_jumps_when_the_seeker_picks_up_the_ignorant():
    # seeker reaches distance eps of the ignorant at T = 4, which then moves by 1/8
    rep = detect_good_iterations(simulate(fixture("interrupted_2agent").config, 6))
    assert any(e == e.__class__(4, 1, "lower_moved") for e in rep.events)
    assert not any(e.condition == "lower_moved" and e.t + e.r <= 4 for e in rep.events)


def test_good_iteration_ceiling_holds_on_fixtures():
    for fid in ("interrupted_2agent", "single_seeker"):
        v = monitor_good_iterations(simulate(fixture(fid).config, 40))
        assert v.status == "pass"


# -- phase one ----------------------------------------------------------------------


def test_band_condition_already_met_for_single_seeker():
    traj = simulate(fixture("single_seeker").config, 3)
    assert phase1_holds(analyze(traj)[0], traj)
    assert monitor_phase1(traj).status == "vacuous"
    assert monitor_phase1(traj, extend_by_monotonicity=True).status == "pass"


def test_far_ignorants_stay_outside_the_hope_interval():
    c = eps_config([0, 5, 10], F(1, 10), 5, seekers=(1,))
    traj = simulate(c, 5)
    snaps = analyze(traj)
    assert all(s.hope.members == {1} for s in snaps)
    assert phase1_holds(snaps[0], traj)


def test_phase1_checked_directly_once_horizon_reaches_t1():
    # alpha = beta = 1/2, eps = 1: T1 = 3 (1 + 2 + 192) = 585
    c = SystemConfig(1, F(1, 2), 1, F(1, 2), F(1, 2), (Constant(F(1, 2)),),
                     BetaSchedule.from_matrix([[F(1, 2)]]), (F(0),))
    b = phase_bounds(1, 1, F(1, 2), F(1, 2))
    traj = simulate(c, b.T1 + 1)
    v = monitor_phase1(traj, b)
    assert v.status == "pass" and v.checked == 2


# -- contraction claims ---------------------------------------------------------------


def test_epsilon_interval_contraction_on_single_seeker():
    traj = simulate(fixture("single_seeker").config, 30)
    snaps = analyze(traj)
    e = traj.config.epsilon
    assert all(s.hope.ell1 + s.hope.ell2 <= e for s in snaps)
    v = monitor_contraction(traj, 0, snaps)["epsilon_interval"]
    assert v.status == "pass" and v.checked == 29
    # factor 1 - alpha beta / 2 = 17/18
    total = [s.hope.ell1 + s.hope.ell2 for s in snaps]
    assert all(total[t + 2] <= total[t] * F(17, 18) for t in range(29))


def test_all_claims_hold_with_equality_at_consensus_on_truth():
    c = eps_config([3, 3], F(1, 10), 3, seekers=(0, 1))
    verdicts = monitor_contraction(simulate(c, 6), 0)
    assert all(v.passed for v in verdicts.values())
    assert verdicts["one_step"].checked > 0


def test_near_seeker_contraction_on_small_instance():
    # two seekers overshoot below the lower hope end; found by a seeded search and frozen
    c = SystemConfig(3, F(1, 4), F(1, 8), F(3, 4), F(1, 3),
                     (Constant(F(3, 4)), Constant(F(3, 4)), Constant(0)),
                     BetaSchedule.uniform(3), (F(0), F(13, 32), F(9, 64)))
    traj = simulate(c, 6)
    v = monitor_near_seeker(traj, 0)
    assert v.status == "pass" and v.checked >= 1


def test_near_seeker_vacuous_without_seekers_nearby():
    traj = simulate(fixture("five_clusters").config, 4)
    assert monitor_near_seeker(traj, 0).status == "vacuous"


def test_late_claims_are_vacuous_before_t2():
    traj = simulate(fixture("interrupted_2agent").config, 20)
    assert monitor_settled(traj).status == "vacuous"
    assert monitor_final(traj).status == "vacuous"


def test_run_monitors_covers_every_claim():
    names = set(run_monitors(simulate(fixture("single_seeker").config, 5)))
    assert names == {"lonely", "containment", "hope_monotone", "good_iterations", "phase1",
                     "epsilon_interval", "one_step", "two_step", "one_shrinks", "greater_epsilon",
                     "near_seeker", "settled", "final"}


def test_findings_carry_step_and_lookahead():
    # checking the T2 claims from t = 0 on a run that is nowhere near settled
    c = uniform_config([F(1, 64), F(1, 2)], F(1, 4), F(1, 4), seekers=[1])
    v = monitor_settled(simulate(c, 3), 0)
    assert v.status == "fail" and v.first_violation == 0
    assert v.findings[0].lookahead == 0
