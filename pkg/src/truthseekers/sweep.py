"""Seeded random sweeps of strict-mode systems through every monitor.

Each instance is drawn from its own ``random.Random`` so that instance k is
the same no matter how many others are drawn. Rationals use denominators of
at most 64. Any finding is shipped with a reproducing config: the system
restarted at the offending step, with agents dropped greedily for as long as
the finding survives.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .configio import config_to_data
from .model import BetaSchedule, ConfigError, SystemConfig, agent_kinds, simulate, validate_config
from .monitors import (
    monitor_containment,
    monitor_contraction,
    monitor_good_iterations,
    monitor_hope_monotone,
    monitor_lonely_contraction,
    monitor_near_seeker,
    monitor_phase1,
    monitor_final,
    monitor_settled,
    phase1_holds,
    phase1_onset,
    phase_bounds,
)
from .schedules import Constant, Periodic
from .structure import analyze, snapshot

__all__ = [
    "SweepResult",
    "Phase1Result",
    "minimal_reproducer",
    "phase1_sweep",
    "random_config",
    "run_sweep",
    "sweep_record",
]

CONTRACTION = ("epsilon_interval", "one_step", "two_step", "one_shrinks", "greater_epsilon")
MONITOR_NAMES = ("containment", "hope_monotone", "lonely", "good_iterations", "phase1") + CONTRACTION + (
    "near_seeker", "settled", "final")
LATE = ("settled", "final")  # always checked from the true T2


def _rng(seed: int, k: int) -> random.Random:
    return random.Random(seed * 1_000_003 + k)


def random_config(rng: random.Random, max_n: int = 8, force_seeker: bool = True) -> SystemConfig:
    """A random strict-mode system with row-stochastic weights bounded by beta."""
    n = rng.randint(1, max_n)
    eps = Fraction(rng.randint(2, 16), 32)
    h = Fraction(rng.randint(0, 32), 32)
    alpha = Fraction(rng.randint(1, 8), 8)
    x0 = tuple(Fraction(rng.randint(0, 64), 64) for _ in range(n))

    seekers = {i for i in range(n) if rng.random() < 0.5}
    if force_seeker and not seekers:
        seekers.add(rng.randrange(n))

    def seeker_rule():
        a = alpha + (1 - alpha) * Fraction(rng.randint(0, 8), 8)
        if rng.random() < 0.25:
            b = alpha + (1 - alpha) * Fraction(rng.randint(0, 8), 8)
            return Periodic((a, b))
        return Constant(a)

    rules = tuple(seeker_rule() if i in seekers else Constant(0) for i in range(n))

    if n == 1:
        beta, weights = Fraction(1, 2), BetaSchedule.from_matrix([[Fraction(1, 2)]])
    elif rng.random() < 0.3:
        beta, weights = Fraction(1, n), BetaSchedule.uniform(n)
    else:
        denom = rng.choice([d for d in (16, 32, 64) if d >= 2 * n])
        base = rng.randint(1, denom // n)
        beta = Fraction(base, denom)
        rows = []
        for _ in range(n):
            units = [base] * n
            for _ in range(denom - n * base):
                units[rng.randrange(n)] += 1
            rows.append([Fraction(u, denom) for u in units])
        weights = BetaSchedule.from_matrix(rows)
    return SystemConfig(n, h, eps, alpha, beta, rules, weights, x0)


def _run(name: str, traj, start: Optional[int], snaps=None):
    if name == "containment":
        return monitor_containment(traj)
    if name == "hope_monotone":
        return monitor_hope_monotone(traj, snaps)
    if name == "lonely":
        return monitor_lonely_contraction(traj)
    if name == "good_iterations":
        return monitor_good_iterations(traj, snaps)
    if name == "phase1":
        return monitor_phase1(traj, snaps=snaps, extend_by_monotonicity=True)
    if name == "near_seeker":
        return monitor_near_seeker(traj, start, snaps)
    if name == "settled":
        return monitor_settled(traj, start, snaps)
    if name == "final":
        return monitor_final(traj, start, snaps)
    return monitor_contraction(traj, start, snaps)[name]


def _whole_run(name: str) -> bool:
    return name in ("good_iterations", "phase1", "lonely")


def _reproduces(name: str, config: SystemConfig, steps: int) -> bool:
    try:
        if not validate_config(config).ok:
            return False
        if name not in ("containment", "hope_monotone") and not agent_kinds(config).seekers:
            return False
        traj = simulate(config, steps)
    except (ConfigError, ArithmeticError):
        return False
    v = _run(name, traj, 0)
    return any(f.t == 0 for f in v.findings) if not _whole_run(name) else bool(v.findings)


def minimal_reproducer(traj, name: str, finding) -> dict:
    """Smallest sub-system, restarted at the finding's step, that still shows it."""
    if _whole_run(name):
        config, steps = traj.config, traj.horizon
    else:
        config, steps = traj.config.shifted(finding.t, traj.x(finding.t)), finding.lookahead
    persists = _reproduces(name, config, steps)
    if persists:
        k = 0
        while k < config.n and config.n > 1:
            keep = [i for i in range(config.n) if i != k]
            smaller = config.restricted(keep)
            if _reproduces(name, smaller, steps):
                config = smaller
            else:
                k += 1
    return {"config": config_to_data(config), "steps": steps, "start": 0, "persists": persists}


@dataclass(frozen=True)
class SweepResult:
    seed: int
    count: int
    max_n: int
    steps: int
    summary: dict    # monitor -> {"pass", "fail", "vacuous", "checked"}
    findings: tuple  # JSON-ready dicts

    @property
    def ok(self) -> bool:
        return not self.findings


def run_sweep(seed: int, count: int, max_n: int = 8, steps: int = 30,
              monitors=MONITOR_NAMES) -> SweepResult:
    """Monitors on ``count`` random systems of ``steps`` steps each.

    Claims that hold only after the first phase are checked from the first
    step at which the band condition is met, a stand-in for T1 that is far
    beyond any desk-sized horizon. Claims from T2 on keep the true T2 and are
    vacuous on short runs.
    """
    summary = {m: {"pass": 0, "fail": 0, "vacuous": 0, "checked": 0} for m in monitors}
    findings = []
    for k in range(count):
        config = random_config(_rng(seed, k), max_n)
        traj = simulate(config, steps)
        snaps = analyze(traj)
        onset = phase1_onset(traj, snaps)
        start = onset if onset is not None else traj.horizon + 1
        for name in monitors:
            v = _run(name, traj, None if name in LATE else start, snaps)
            s = summary[name]
            s[v.status] += 1
            s["checked"] += v.checked
            for f in v.findings:
                findings.append({
                    "instance": k,
                    "monitor": name,
                    "t": f.t,
                    "lookahead": f.lookahead,
                    "detail": f.detail,
                    "reproducer": minimal_reproducer(traj, name, f),
                })
    return SweepResult(seed, count, max_n, steps, summary, tuple(findings))


def sweep_record(result: SweepResult) -> dict:
    return {
        "seed": result.seed,
        "count": result.count,
        "max_n": result.max_n,
        "steps": result.steps,
        "late_claims_from": "first step meeting the band condition",
        "summary": result.summary,
        "findings": list(result.findings),
    }


@dataclass(frozen=True)
class Phase1Result:
    instances: int
    passed: int
    failed: int
    undecided: int   # cap hit before both T1 and the band condition
    records: tuple   # (instance, T1, steps simulated, status, note)


def phase1_sweep(seed: int, count: int, max_n: int = 6, cap: int = 10**5) -> Phase1Result:
    """Band condition at T1, checked on random systems with truth seekers.

    A run stops at min(T1, cap) or as soon as the band condition holds;
    in the latter case the monotone hope interval carries it to T1.
    """
    passed = failed = undecided = 0
    records = []
    for k in range(count):
        config = random_config(_rng(seed, k), max_n, force_seeker=True)
        bounds = phase_bounds(config.n, config.epsilon, config.alpha, config.beta)
        seekers = agent_kinds(config).seekers
        probe = simulate(config, 0)

        def reached(state):
            return phase1_holds(snapshot(state, config, seekers), probe)

        traj = simulate(config, min(bounds.T1, cap), stop_rule=reached)
        v = monitor_phase1(traj, bounds, extend_by_monotonicity=True)
        if v.status == "pass":
            passed += 1
        elif v.status == "fail":
            failed += 1
        else:
            undecided += 1
        records.append((k, bounds.T1, traj.horizon, v.status, v.note))
    return Phase1Result(count, passed, failed, undecided, tuple(records))
