"""System definition and the simultaneous bounded-confidence update.

All quantities are :class:`fractions.Fraction`; nothing in here rounds.
Agents are indexed ``0..n-1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

from .schedules import Constant, Geometric, Schedule, Table, as_fraction

__all__ = [
    "AgentKind",
    "AgentKinds",
    "BetaSchedule",
    "ConfigError",
    "DegenerateWeightsError",
    "OpinionState",
    "SystemConfig",
    "Trajectory",
    "ValidationReport",
    "agent_kinds",
    "confidence_set",
    "simulate",
    "update_step",
    "uniform_config",
    "validate_config",
]

STRICT = "strict"
RELAXED = "relaxed"


class ConfigError(ValueError):
    """A configuration is malformed or violates the selected mode."""


class DegenerateWeightsError(ArithmeticError):
    """The weights over some confidence set sum to zero."""

    def __init__(self, t: int, agent: int):
        super().__init__(f"weights over the confidence set of agent {agent} sum to 0 at t={t}")
        self.t = t
        self.agent = agent


class AgentKind(enum.Enum):
    TRUTH_SEEKER = "truth_seeker"
    IGNORANT = "ignorant"


@dataclass(frozen=True)
class BetaSchedule:
    """Influence weights beta_ij(t) as an n x n grid of schedules.

    ``kind`` records how the weights were written down (``uniform``,
    ``matrix``, ``table``, ``rules`` or ``named``) so that a config file can be
    rendered back in the same form.
    """

    kind: str
    entries: tuple
    name: Optional[str] = None
    params: tuple = ()

    @property
    def n(self) -> int:
        return len(self.entries)

    def __call__(self, i: int, j: int, t: int) -> Fraction:
        return self.entries[i][j](t)

    def matrix(self, t: int) -> tuple:
        return tuple(tuple(s(t) for s in row) for row in self.entries)

    def shift(self, t0: int) -> "BetaSchedule":
        if self.kind in ("uniform", "matrix"):
            return self
        rows = tuple(tuple(s.shift(t0) for s in row) for row in self.entries)
        return BetaSchedule("rules", rows)

    def restrict(self, keep: Sequence[int]) -> "BetaSchedule":
        rows = tuple(tuple(self.entries[i][j] for j in keep) for i in keep)
        kind = "matrix" if self.kind in ("uniform", "matrix") else "rules"
        return BetaSchedule(kind, rows)

    @classmethod
    def uniform(cls, n: int) -> "BetaSchedule":
        w = Constant(Fraction(1, n))
        return cls("uniform", tuple((w,) * n for _ in range(n)))

    @classmethod
    def from_matrix(cls, rows) -> "BetaSchedule":
        return cls("matrix", tuple(tuple(Constant(v) for v in row) for row in rows))

    @classmethod
    def from_table(cls, matrices, tail=None) -> "BetaSchedule":
        """One matrix per time step; ``tail`` (default: the last one) afterwards."""
        n = len(matrices[0])
        last = matrices[-1] if tail is None else tail
        rows = tuple(
            tuple(Table(tuple(m[i][j] for m in matrices), last[i][j]) for j in range(n))
            for i in range(n)
        )
        return cls("table", rows)

    @classmethod
    def from_rules(cls, rows) -> "BetaSchedule":
        return cls("rules", tuple(tuple(row) for row in rows))

    @classmethod
    def named(cls, name: str, n: int, **params) -> "BetaSchedule":
        try:
            builder = NAMED_BETA_RULES[name]
        except KeyError:
            raise ConfigError(f"unknown weight rule {name!r}") from None
        rows = builder(n, **params)
        return cls("named", rows, name, tuple(sorted(params.items())))


def _halving_pull(n: int, towards: int = 1):
    # beta_ij(t) = 1 - (1/2)^(t+1) for j == towards, (1/2)^(t+1) otherwise
    if n != 2:
        raise ConfigError("halving_pull is defined for two agents")
    small = Geometric(0, Fraction(1, 2), Fraction(1, 2))
    large = Geometric(1, Fraction(-1, 2), Fraction(1, 2))
    return tuple(tuple(large if j == towards else small for j in range(n)) for _ in range(n))


NAMED_BETA_RULES: dict[str, Callable] = {"halving_pull": _halving_pull}


def _frac(v) -> Fraction:
    return as_fraction(v)


@dataclass(frozen=True)
class SystemConfig:
    n: int
    h: Fraction
    epsilon: Fraction
    alpha: Fraction
    beta: Fraction
    alpha_schedule: tuple
    beta_schedule: BetaSchedule
    x0: tuple
    mode: str = STRICT

    def __post_init__(self):
        for name in ("h", "epsilon", "alpha", "beta"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        object.__setattr__(self, "x0", tuple(_frac(v) for v in self.x0))
        object.__setattr__(self, "alpha_schedule", tuple(self.alpha_schedule))
        if self.n < 1:
            raise ConfigError("n must be a positive integer")
        if len(self.x0) != self.n or len(self.alpha_schedule) != self.n:
            raise ConfigError("x0 and alpha_schedule need one entry per agent")
        if self.beta_schedule.n != self.n or any(len(r) != self.n for r in self.beta_schedule.entries):
            raise ConfigError("beta_schedule must be n x n")
        if self.mode not in (STRICT, RELAXED):
            raise ConfigError(f"mode must be {STRICT!r} or {RELAXED!r}")

    def alpha_at(self, i: int, t: int) -> Fraction:
        return self.alpha_schedule[i](t)

    def shifted(self, t0: int, x0: Sequence[Fraction]) -> "SystemConfig":
        """The same system restarted at time t0 from opinions x0."""
        return SystemConfig(
            self.n, self.h, self.epsilon, self.alpha, self.beta,
            tuple(s.shift(t0) for s in self.alpha_schedule),
            self.beta_schedule.shift(t0), tuple(x0), self.mode,
        )

    def restricted(self, keep: Sequence[int]) -> "SystemConfig":
        """Sub-system on the agents in ``keep`` (in that order)."""
        keep = list(keep)
        return SystemConfig(
            len(keep), self.h, self.epsilon, self.alpha, self.beta,
            tuple(self.alpha_schedule[i] for i in keep),
            self.beta_schedule.restrict(keep), tuple(self.x0[i] for i in keep), self.mode,
        )


@dataclass(frozen=True)
class OpinionState:
    t: int
    x: tuple


@dataclass(frozen=True)
class Trajectory:
    config: SystemConfig
    states: tuple

    def __len__(self):
        return len(self.states)

    def __getitem__(self, t) -> OpinionState:
        return self.states[t]

    @property
    def horizon(self) -> int:
        return len(self.states) - 1

    def x(self, t: int) -> tuple:
        return self.states[t].x


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _check_range(violations, label, value, lo, hi, lo_open=False):
    if value < lo or (lo_open and value == lo):
        violations.append(f"{label} must be {'positive' if lo == 0 and lo_open else f'at least {lo}'}")
    elif value > hi:
        violations.append(f"{label} must be at most {hi}")


def _all_positive(s: Schedule) -> bool:
    if isinstance(s, Geometric) and s.offset == 0:
        return s(0) > 0 and s.ratio > 0
    return s.infimum() > 0


def validate_config(config: SystemConfig, mode: Optional[str] = None) -> ValidationReport:
    """Range checks on the parameters, schedules and starting opinions.

    Violations are returned as data; nothing is raised.
    """
    mode = config.mode if mode is None else mode
    v: list[str] = []
    _check_range(v, "h", config.h, 0, 1)
    _check_range(v, "epsilon", config.epsilon, 0, 1)
    _check_range(v, "alpha", config.alpha, 0, 1, lo_open=True)
    _check_range(v, "beta", config.beta, 0, Fraction(1, 2), lo_open=True)
    for i, x in enumerate(config.x0):
        if not 0 <= x <= 1:
            v.append(f"x0[{i}] = {x} outside [0, 1]")

    for i, s in enumerate(config.alpha_schedule):
        bad = s.first_outside(Fraction(0), Fraction(1))
        if bad is not None:
            v.append(f"alpha_{i}(t) outside [0, 1] at t = {bad}")
        elif mode == STRICT and not s.always_zero() and s.infimum() < config.alpha:
            v.append(
                f"alpha_{i}(t) is neither identically 0 nor >= alpha "
                f"(first t below alpha: {s.first_outside(config.alpha, Fraction(1))})"
            )

    beta = config.beta
    for i, row in enumerate(config.beta_schedule.entries):
        for j, s in enumerate(row):
            if mode == STRICT:
                t = s.first_outside(beta, 1 - beta) if beta > 0 else None
                if t is not None:
                    side = "<" if s(t) < beta else ">"
                    bound = "beta" if side == "<" else "1 - beta"
                    v.append(f"beta_{i}{j}(t) {side} {bound} at t >= {t} (first violation) for (i, j) = ({i}, {j})")
            elif not _all_positive(s):
                v.append(f"beta_{i}{j}(t) must stay positive for (i, j) = ({i}, {j})")
    return ValidationReport(tuple(v))


class AgentKinds(NamedTuple):
    kinds: tuple
    seekers: frozenset
    ignorants: frozenset


def agent_kinds(config: SystemConfig, mode: Optional[str] = None) -> AgentKinds:
    """Split agents into truth seekers K and ignorants, read off each rule's bounds."""
    mode = config.mode if mode is None else mode
    kinds = []
    for i, s in enumerate(config.alpha_schedule):
        if s.infimum() >= config.alpha:
            kinds.append(AgentKind.TRUTH_SEEKER)
        elif s.always_zero() or mode == RELAXED:
            kinds.append(AgentKind.IGNORANT)
        else:
            raise ConfigError(f"agent {i}: alpha_{i}(t) mixes zero and nonzero values")
    seekers = frozenset(i for i, k in enumerate(kinds) if k is AgentKind.TRUTH_SEEKER)
    return AgentKinds(tuple(kinds), seekers, frozenset(range(config.n)) - seekers)


def confidence_set(state, value: Fraction, epsilon: Fraction) -> frozenset:
    """Agents j with |value - x_j| <= epsilon. ``state`` may be an OpinionState or a vector."""
    x = state.x if isinstance(state, OpinionState) else state
    return frozenset(j for j, xj in enumerate(x) if abs(value - xj) <= epsilon)


def update_step(state: OpinionState, config: SystemConfig) -> OpinionState:
    """One simultaneous application of the truth-weighted bounded-confidence average."""
    t, x = state.t, state.x
    eps, h = config.epsilon, config.h
    new = []
    for i, xi in enumerate(x):
        num = Fraction(0)
        den = Fraction(0)
        for j, xj in enumerate(x):
            if abs(xi - xj) <= eps:
                w = config.beta_schedule(i, j, t)
                num += w * xj
                den += w
        if den == 0:
            raise DegenerateWeightsError(t, i)
        a = config.alpha_at(i, t)
        new.append(a * h + (1 - a) * (num / den))
    return OpinionState(t + 1, tuple(new))


def simulate(
    config: SystemConfig,
    horizon: int,
    stop_rule: Optional[Callable[[OpinionState], bool]] = None,
) -> Trajectory:
    """Iterate the update from ``config.x0`` for ``horizon`` steps.

    ``stop_rule`` is evaluated on each new state; the run ends at the first
    state for which it returns True.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    report = validate_config(config)
    if not report.ok:
        raise ConfigError("; ".join(report.violations))
    state = OpinionState(0, config.x0)
    states = [state]
    for _ in range(horizon):
        state = update_step(state, config)
        states.append(state)
        if stop_rule is not None and stop_rule(state):
            break
    return Trajectory(config, tuple(states))


def uniform_config(
    x0: Iterable,
    h,
    epsilon,
    alpha=Fraction(1, 2),
    beta=None,
    seekers: Iterable[int] = (),
    seeker_alpha=None,
) -> SystemConfig:
    """Convenience constructor: weights 1/n, constant truth weights."""
    x0 = tuple(_frac(v) for v in x0)
    n = len(x0)
    alpha = _frac(alpha)
    seeker_alpha = alpha if seeker_alpha is None else _frac(seeker_alpha)
    seekers = set(seekers)
    rules = tuple(Constant(seeker_alpha if i in seekers else 0) for i in range(n))
    beta = Fraction(1, max(n, 2)) if beta is None else _frac(beta)
    # a single agent cannot have weight 1 <= 1 - beta; any constant self-weight is equivalent
    weights = BetaSchedule.uniform(n) if n > 1 else BetaSchedule.from_matrix([[Fraction(1, 2)]])
    return SystemConfig(n, h, epsilon, alpha, beta, rules, weights, x0)
