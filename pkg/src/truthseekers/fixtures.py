"""Worked examples with exact expected trajectories.

Each fixture pins concrete rationals for a symbolic epsilon, h and beta and
carries an oracle: either exact opinion vectors (``None`` entries where
nothing is asserted) or bound checks over a whole run. A fixture may also
carry a reference closed form as ``printed``; when it disagrees with direct
iteration the report lists every mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F
from typing import Callable, Optional

from .model import BetaSchedule, SystemConfig, Trajectory, simulate, RELAXED
from .schedules import Constant

__all__ = ["FIXTURE_IDS", "Fixture", "FixtureReport", "check_fixture", "fixture"]


@dataclass(frozen=True)
class Fixture:
    id: str
    config: SystemConfig
    oracle: Callable[[int], Optional[tuple]]
    horizon: int                       # default length of a check
    valid_until: Optional[int] = None  # last t the oracle speaks for (None: every t)
    printed: Optional[Callable[[int], Optional[tuple]]] = None
    bounds: Optional[Callable[[Trajectory], list]] = None
    columns: Optional[tuple] = None    # agent groups for the reproduced table
    table_until: Optional[int] = None  # last row of that table
    notes: tuple = ()

    @property
    def epsilon(self) -> F:
        return self.config.epsilon


def _cfg(x0, h, eps, alpha, beta, truth_weights, weights, mode="strict"):
    return SystemConfig(len(x0), h, eps, alpha, beta,
                        tuple(Constant(a) for a in truth_weights), weights, tuple(x0), mode)


def _five_clusters() -> Fixture:
    eps = F(1, 10)
    start = [0, 0, 1, 2, 3, 4, 4, 5, 6, 7, 8, 8]
    rows = [
        [0, 1, 2, 3, 4, 5, 6, 7, 8],
        [F(1, 3), F(3, 4), 2, F(13, 4), 4, F(19, 4), 6, F(29, 4), F(23, 3)],
        [F(17, 36), F(17, 36), 2, F(15, 4), 4, F(17, 4), 6, F(271, 36), F(271, 36)],
        [F(17, 36), F(17, 36), 2, 4, 4, 4, 6, F(271, 36), F(271, 36)],
    ]
    columns = ((0, 1), (2,), (3,), (4,), (5, 6), (7,), (8,), (9,), (10, 11))

    def oracle(t):
        row = rows[min(t, 3)]
        x = [None] * 12
        for value, group in zip(row, columns):
            for i in group:
                x[i] = F(value) * eps
        return tuple(x)

    n = 12
    config = _cfg([v * eps for v in start], F(1, 2), eps, F(1, 2), F(1, 12), [0] * n,
                  BetaSchedule.uniform(n))
    return Fixture("five_clusters", config, oracle, 4, columns=columns, table_until=3,
                   notes=("no truth seekers; fixed point from t = 3 on with five clusters",))


def _asymmetric_pair() -> Fixture:
    eps = F(1, 2)

    def oracle(t):
        return ((F(2, 5) - F(2, 5 * 6**t)) * eps, (F(2, 5) + F(3, 5 * 6**t)) * eps)

    weights = BetaSchedule.from_matrix([[F(2, 3), F(1, 3)], [F(1, 2), F(1, 2)]])
    config = _cfg([0, eps], F(1, 2), eps, F(1, 2), F(1, 3), [0, 0], weights)
    return Fixture("asymmetric_pair", config, oracle, 20,
                   notes=("gap eps/6^t never vanishes; common limit 2/5 eps",))


def _single_seeker(n: int = 6, alpha: F = F(2, 3)) -> Fixture:
    eps = F(1, 2)
    q = 1 - alpha / n
    c = F(1, 2) - F(1, n)

    def ignorant(t):
        return (F(1, 2) + c * q ** (t - 1)) * eps

    def oracle(t):
        if t == 0:
            return (F(0),) + (eps,) * (n - 1)
        return ((F(1, 2) + (1 - alpha) * c * q ** (t - 1)) * eps,) + (ignorant(t),) * (n - 1)

    def printed(t):
        if t == 0:
            return None
        return ((F(1, 2) - alpha * c * q ** (t - 1)) * eps,) + (ignorant(t),) * (n - 1)

    config = _cfg([0] + [eps] * (n - 1), eps / 2, eps, alpha, F(1, n),
                  [alpha] + [0] * (n - 1), BetaSchedule.uniform(n))
    return Fixture(
        "single_seeker", config, oracle, 30, printed=printed,
        notes=(
            "printed seeker formula [1/2 - alpha(1/2 - 1/n)(1 - alpha/n)^(t-1)] eps disagrees with iteration;"
            " x_1(1) = 11/18 eps, the printed form gives 5/18 eps",
            "derived seeker formula [1/2 + (1 - alpha)(1/2 - 1/n)(1 - alpha/n)^(t-1)] eps matches",
        ),
    )


def _interrupted(alpha=F(1, 2), eps=F(1, 4), eps_small=F(1, 64)) -> Fixture:
    T = 0
    while (1 - alpha) ** T * eps > eps_small:
        T += 1

    def oracle(t):
        if t <= T:
            return (eps + (1 - alpha) ** t * eps, eps_small)
        if t == T + 1:
            x1 = alpha * eps + (1 - alpha) / 2 * (eps + (1 - alpha) ** T * eps + eps_small)
            return (x1, None)
        return None

    def bounds(traj):
        if traj.horizon <= T:
            return []
        x1 = traj.x(T + 1)[0]
        cap = (1 + alpha) / 2 * eps + eps_small
        return [] if x1 <= cap else [f"x_1(T+1) = {x1} > {cap}"]

    weights = BetaSchedule.from_matrix([[F(1, 2)] * 2] * 2)
    config = _cfg([2 * eps, eps_small], eps, eps, alpha, F(1, 2), [alpha, 0], weights)
    return Fixture("interrupted_2agent", config, oracle, 60, valid_until=T + 1, bounds=bounds,
                   notes=(f"T = {T}: seeker approaches h geometrically, picks up the ignorant at t = {T}",))


def _reordering() -> Fixture:
    eps = F(1, 4)
    weights = BetaSchedule.from_matrix([
        [F(1, 100), F(1, 100), F(98, 100)],
        [F(98, 100), F(1, 100), F(1, 100)],
        [F(4, 10), F(4, 10), F(2, 10)],
    ])
    config = _cfg([eps, F(3, 2) * eps, 2 * eps], F(1, 2), eps, F(1, 2), F(1, 100), [0, 0, 0], weights)

    def oracle(t):
        if t == 0:
            return config.x0
        if t == 1:
            return (F(397, 200) * eps, F(203, 200) * eps, F(7, 5) * eps)
        return None

    return Fixture("reordering", config, oracle, 1, valid_until=1)


def _beta_decay() -> Fixture:
    eps = F(1, 5)
    weights = BetaSchedule.named("halving_pull", 2)
    config = _cfg([1 - eps / 5, 1 - eps], 1, eps, F(1, 5), F(1, 4), [F(1, 5), 0], weights, RELAXED)

    def far_enough(traj, bound):
        return [f"|x_1({t}) - h| = {abs(s.x[0] - 1)} < {bound}"
                for t, s in enumerate(traj.states) if t >= 1 and abs(s.x[0] - 1) < bound]

    def oracle(t):
        return config.x0 if t == 0 else None

    return Fixture(
        "beta_decay", config, oracle, 200,
        bounds=lambda traj: far_enough(traj, F(2, 5) * eps),
        printed=None,
        notes=(
            "printed claim |x_1(t) - h| >= eps/2 for t >= 1 fails already at t = 1 (12/25 eps);"
            " the run keeps the weaker bound 2/5 eps",
        ),
    )


def _symmetry_note() -> Fixture:
    eps = F(1, 2)

    def oracle(t):
        g = F(1, 2) * F(1, 3) ** t
        return ((F(1, 2) - g) * eps, (F(1, 2) + g) * eps)

    weights = BetaSchedule.from_matrix([[F(2, 3), F(1, 3)], [F(1, 3), F(2, 3)]])
    config = _cfg([0, eps], F(1, 2), eps, F(1, 2), F(1, 3), [0, 0], weights)
    return Fixture(
        "symmetry_note", config, oracle, 20,
        notes=("symmetric but non-uniform weights: gap eps/3^t, no finite-time stable state",),
    )


_BUILDERS = {
    "interrupted_2agent": _interrupted,
    "five_clusters": _five_clusters,
    "asymmetric_pair": _asymmetric_pair,
    "single_seeker": _single_seeker,
    "reordering": _reordering,
    "beta_decay": _beta_decay,
    "symmetry_note": _symmetry_note,
}
FIXTURE_IDS = tuple(_BUILDERS)


def fixture(fixture_id: str) -> Fixture:
    try:
        return _BUILDERS[fixture_id]()
    except KeyError:
        raise KeyError(f"unknown fixture {fixture_id!r}; known: {', '.join(FIXTURE_IDS)}") from None


@dataclass(frozen=True)
class FixtureReport:
    id: str
    horizon: int
    trajectory: Trajectory
    diffs: tuple            # (t, agent, expected, got)
    bound_failures: tuple
    printed_mismatches: tuple

    @property
    def ok(self) -> bool:
        return not self.diffs and not self.bound_failures


def _compare(traj, oracle, last):
    out = []
    for t, s in enumerate(traj.states):
        if last is not None and t > last:
            break
        want = oracle(t)
        if want is None:
            continue
        out.extend((t, i, w, g) for i, (w, g) in enumerate(zip(want, s.x)) if w is not None and w != g)
    return tuple(out)


def check_fixture(fixture_id: str, horizon: Optional[int] = None) -> FixtureReport:
    """Simulate a fixture and diff every step against its oracle, exactly."""
    fx = fixture(fixture_id)
    horizon = fx.horizon if horizon is None else horizon
    traj = simulate(fx.config, horizon)
    diffs = _compare(traj, fx.oracle, fx.valid_until)
    printed = _compare(traj, fx.printed, fx.valid_until) if fx.printed else ()
    bounds = tuple(fx.bounds(traj)) if fx.bounds else ()
    return FixtureReport(fx.id, horizon, traj, diffs, bounds, printed)
