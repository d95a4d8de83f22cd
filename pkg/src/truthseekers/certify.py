"""Convergence certificate for the truth seekers of a simulated run."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .model import Trajectory, agent_kinds
from .monitors import phase_bounds, run_monitors
from .structure import analyze

__all__ = [
    "ConvergenceCertificate",
    "Envelope",
    "StabilityReport",
    "certify_convergence",
    "default_tail_window",
    "gamma_windows",
    "stability_report",
]


@dataclass(frozen=True)
class StabilityReport:
    fixed_point_at: Optional[int]
    spread: tuple      # max_i x_i - min_i x_i per step
    increments: tuple  # max_i |x_i(t+1) - x_i(t)| per step


def stability_report(traj: Trajectory) -> StabilityReport:
    xs = [s.x for s in traj.states]
    inc = tuple(max(abs(a - b) for a, b in zip(p, q)) for p, q in zip(xs, xs[1:]))
    fixed = next((t for t, d in enumerate(inc) if d == 0), None)
    return StabilityReport(fixed, tuple(max(x) - min(x) for x in xs), inc)


@dataclass(frozen=True)
class Envelope:
    """Decay envelopes from T2 on; ``reached`` is False when the run is shorter than T2."""

    T2: int
    reached: bool
    S: Optional[int] = None          # last step of the first envelope (None: never left)
    post_ok: Optional[bool] = None   # second envelope holds from S + 3 on


@dataclass(frozen=True)
class ConvergenceCertificate:
    gamma: Fraction
    horizon: int
    seekers: tuple
    distances: tuple
    windows: tuple
    interruption_count: int
    converged: Optional[bool]
    tail_window: int
    first_distraction: Optional[int]
    envelope: Optional[Envelope]
    monitor_verdicts: dict = field(default_factory=dict)
    stability: Optional[StabilityReport] = None


def default_tail_window(alpha: Fraction, beta: Fraction) -> int:
    """2 * ceil(2 / (alpha beta))."""
    q = 2 / (Fraction(alpha) * Fraction(beta))
    return 2 * -((-q.numerator) // q.denominator)


def gamma_windows(distances, gamma: Fraction) -> tuple:
    """Maximal runs [start, end] of steps with distance < gamma."""
    out = []
    begin = None
    for t, d in enumerate(distances):
        if d < gamma:
            if begin is None:
                begin = t
        elif begin is not None:
            out.append((begin, t - 1))
            begin = None
    if begin is not None:
        out.append((begin, len(distances) - 1))
    return tuple(out)


def _envelope(traj, distances, T2) -> Envelope:
    c = traj.config
    horizon = traj.horizon
    if horizon < T2:
        return Envelope(T2, False)
    small = c.epsilon * c.alpha**2 * c.beta**3 / 60
    two = 1 - c.alpha * c.beta / 2
    S = T2 - 1
    for t in range(T2, horizon + 1):
        if distances[t] > small * two ** ((t - T2) // 2):
            break
        S = t
    else:
        return Envelope(T2, True, None, None)
    post = all(
        distances[t] <= c.epsilon * two ** ((t - S - 3) // 2)
        for t in range(S + 3, horizon + 1)
    )
    return Envelope(T2, True, S, post)


def certify_convergence(
    traj: Trajectory,
    gamma: Fraction,
    tail_window: Optional[int] = None,
    start: Optional[int] = None,
    extend_phase1: bool = False,
) -> ConvergenceCertificate:
    """Windows in which every truth seeker is within gamma of h, plus all monitor verdicts.

    ``converged`` means the last window reaches the end of the run and is at
    least ``tail_window`` steps long; it is None when there are no truth
    seekers. Nothing is claimed beyond the simulated horizon.
    """
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    c = traj.config
    seekers = tuple(sorted(agent_kinds(c).seekers))
    if tail_window is None:
        tail_window = default_tail_window(c.alpha, c.beta)
    snaps = analyze(traj)
    verdicts = run_monitors(traj, start, snaps, extend_phase1)
    stability = stability_report(traj)
    if not seekers:
        return ConvergenceCertificate(gamma, traj.horizon, (), (), (), 0, None, tail_window,
                                      None, None, verdicts, stability)
    distances = tuple(max(abs(s.x[k] - c.h) for k in seekers) for s in traj.states)
    windows = gamma_windows(distances, gamma)
    converged = bool(windows) and windows[-1][1] == traj.horizon and \
        windows[-1][1] - windows[-1][0] + 1 >= tail_window
    distraction = next((t for t in range(1, len(distances)) if distances[t] > distances[t - 1]), None)
    envelope = None
    if c.epsilon > 0:
        envelope = _envelope(traj, distances, phase_bounds(c.n, c.epsilon, c.alpha, c.beta).T2)
    return ConvergenceCertificate(
        gamma, traj.horizon, seekers, distances, windows, max(len(windows) - 1, 0),
        converged, tail_window, distraction, envelope, verdicts, stability,
    )
