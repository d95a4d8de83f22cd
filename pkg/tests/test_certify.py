from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from truthseekers import certify_convergence, fixture, simulate, stability_report
from truthseekers.certify import default_tail_window, gamma_windows

from conftest import strict_configs


def test_windows_are_maximal_runs_below_gamma():
    d = [5, 1, 0, 3, 0, 0]
    assert gamma_windows(d, 2) == ((1, 2), (4, 5))
    assert gamma_windows(d, 1) == ((2, 2), (4, 5))   # strict comparison
    assert gamma_windows([], 1) == ()


def test_default_tail_window():
    assert default_tail_window(F(2, 3), F(1, 6)) == 36
    assert default_tail_window(F(1, 2), F(1, 2)) == 16


def test_single_seeker_converges_without_interruption():
    c = fixture("single_seeker").config
    cert = certify_convergence(simulate(c, 60), c.epsilon / 100)
    # (1/3)(1/3)(8/9)^(t-1) < 1/100 first at t = 22
    assert cert.windows == ((22, 60),)
    assert cert.interruption_count == 0
    assert cert.converged is True
    assert cert.first_distraction is None


def test_short_tail_is_not_convergence():
    c = fixture("single_seeker").config
    cert = certify_convergence(simulate(c, 40), c.epsilon / 100)
    assert cert.windows == ((22, 40),) and cert.converged is False


def test_interrupted_seeker_at_coarse_gamma():
    # distance eps/2^t: below eps/10 at t = 4, pulled out at t = 5 by the ignorant
    c = fixture("interrupted_2agent").config
    cert = certify_convergence(simulate(c, 80), c.epsilon / 10)
    assert cert.windows == ((4, 4), (8, 80))
    assert cert.interruption_count == 1
    assert cert.first_distraction == 5
    assert cert.converged is True


def test_interruption_count_is_not_monotone_in_gamma():
    c = fixture("interrupted_2agent").config
    traj = simulate(c, 80)
    fine = certify_convergence(traj, c.epsilon / 100)
    coarse = certify_convergence(traj, c.epsilon / 10)
    assert fine.interruption_count == 0 < coarse.interruption_count


def test_counterexample_never_converges():
    c = fixture("beta_decay").config
    cert = certify_convergence(simulate(c, 200), F(2, 5) * c.epsilon)
    # starts eps/5 from the truth, then is pushed out and stays out
    assert cert.windows == ((0, 0),) and cert.converged is False
    assert cert.first_distraction == 1
    assert min(cert.distances[1:]) >= F(2, 5) * c.epsilon


def test_no_seekers_is_vacuous():
    cert = certify_convergence(simulate(fixture("five_clusters").config, 4), F(1, 100))
    assert cert.converged is None and cert.seekers == ()
    assert cert.stability.fixed_point_at == 3


def test_gamma_must_be_positive():
    with pytest.raises(ValueError):
        certify_convergence(simulate(fixture("single_seeker").config, 1), 0)


def test_envelope_not_reached_on_short_runs():
    c = fixture("interrupted_2agent").config
    cert = certify_convergence(simulate(c, 10), F(1, 100))
    assert cert.envelope.reached is False and cert.envelope.T2 > 10


def test_stability_report_of_asymmetric_pair():
    rep = stability_report(simulate(fixture("asymmetric_pair").config, 6))
    assert rep.fixed_point_at is None
    assert rep.spread == tuple(F(1, 2) / 6**t for t in range(7))


@given(strict_configs(max_n=5), st.integers(1, 15), st.fractions(F(1, 64), 1, max_denominator=64))
def test_windows_partition_the_close_steps(config, steps, gamma):
    cert = certify_convergence(simulate(config, steps), gamma)
    if not cert.seekers:
        return
    close = {t for t, d in enumerate(cert.distances) if d < gamma}
    covered = set()
    prev_end = -2
    for a, b in cert.windows:
        assert a <= b and a > prev_end + 1
        covered |= set(range(a, b + 1))
        prev_end = b
    assert covered == close
    assert cert.interruption_count == max(len(cert.windows) - 1, 0)


def test_zero_radius_has_unbounded_phases():
    from truthseekers import uniform_config

    c = uniform_config([F(1, 4), F(3, 4)], F(1, 2), 0, seekers=[0])
    cert = certify_convergence(simulate(c, 10), F(1, 100))
    assert cert.envelope is None
    assert cert.monitor_verdicts["phase1"].status == "vacuous"
    assert cert.monitor_verdicts["settled"].status == "vacuous"
