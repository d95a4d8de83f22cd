"""Per-step structural snapshot: confidence graph with a virtual truth
vertex, extremal truth seekers, the hope interval and the neighbourhood sets
around its endpoints.

The truth vertex is labelled ``TRUTH = -1`` and carries the value h. Being
the smallest label, it wins every smallest-index tie. Files and reports use
one-based agents with the truth as 0, which orders the same way.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .model import OpinionState, SystemConfig, Trajectory, agent_kinds

__all__ = [
    "TRUTH",
    "ConfidenceGraph",
    "ExtremalAgents",
    "HopeState",
    "PartitionSets",
    "Snapshot",
    "analyze",
    "build_confidence_graph",
    "extremal_agents",
    "hope_state",
    "partition_sets",
    "snapshot",
]

TRUTH = -1


def value_of(x, h: Fraction, v: int) -> Fraction:
    return h if v == TRUTH else x[v]


@dataclass(frozen=True)
class ConfidenceGraph:
    t: int
    values: tuple  # (vertex, value) pairs, truth vertex first
    edges: frozenset
    components: tuple

    @property
    def vertices(self) -> tuple:
        return tuple(v for v, _ in self.values)

    def component_of(self, v: int) -> frozenset:
        for c in self.components:
            if v in c:
                return c
        raise KeyError(v)

    def adjacent(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.edges


def build_confidence_graph(state: OpinionState, h: Fraction, epsilon: Fraction) -> ConfidenceGraph:
    """Vertices are the agents plus TRUTH; i ~ j iff |x_i - x_j| <= epsilon."""
    values = ((TRUTH, h),) + tuple(enumerate(state.x))
    edges = frozenset(
        frozenset((a, b))
        for k, (a, xa) in enumerate(values)
        for b, xb in values[k + 1:]
        if abs(xa - xb) <= epsilon
    )
    # on a line, components are runs of the sorted values with gaps <= epsilon
    order = sorted(values, key=lambda p: (p[1], p[0]))
    components = []
    run = [order[0][0]]
    for (_, prev), (v, cur) in zip(order, order[1:]):
        if cur - prev <= epsilon:
            run.append(v)
        else:
            components.append(frozenset(run))
            run = [v]
    components.append(frozenset(run))
    return ConfidenceGraph(state.t, values, edges, tuple(components))


@dataclass(frozen=True)
class ExtremalAgents:
    u_tilde: int
    l_tilde: int
    u_hat: int
    l_hat: int


def extremal_agents(state: OpinionState, graph: ConfidenceGraph, seekers: Iterable[int], h: Fraction) -> ExtremalAgents:
    x = state.x
    seekers = sorted(seekers)
    u_tilde = l_tilde = TRUTH
    if seekers:
        top = max(x[k] for k in seekers)
        if top >= h:
            u_tilde = min(k for k in seekers if x[k] == top)
        bottom = min(x[k] for k in seekers)
        if bottom <= h:
            l_tilde = min(k for k in seekers if x[k] == bottom)

    def pick(comp, best):
        target = best(value_of(x, h, v) for v in comp)
        return min(v for v in comp if value_of(x, h, v) == target)

    u_hat = pick(graph.component_of(u_tilde), max)
    l_hat = pick(graph.component_of(l_tilde), min)
    return ExtremalAgents(u_tilde, l_tilde, u_hat, l_hat)


@dataclass(frozen=True)
class HopeState:
    t: int
    extremal: ExtremalAgents
    lower: Fraction  # x_{l_hat}
    upper: Fraction  # x_{u_hat}
    ell1: Fraction
    ell2: Fraction
    members: frozenset
    lost: frozenset


def hope_state(state: OpinionState, graph: ConfidenceGraph, extremal: ExtremalAgents, h: Fraction) -> HopeState:
    x = state.x
    lower = value_of(x, h, extremal.l_hat)
    upper = value_of(x, h, extremal.u_hat)
    members = frozenset(i for i, xi in enumerate(x) if lower <= xi <= upper)
    return HopeState(
        state.t, extremal, lower, upper, abs(lower - h), abs(upper - h),
        members, frozenset(range(len(x))) - members,
    )


@dataclass(frozen=True)
class PartitionSets:
    # first phase, around the lower and upper hope endpoints
    near: frozenset
    middle: frozenset
    far: frozenset
    near_upper: frozenset
    middle_upper: frozenset
    far_upper: frozenset
    # second phase, thresholds scale with the side lengths
    near1: frozenset
    near2: frozenset
    middle1: frozenset
    middle2: frozenset
    far1: frozenset
    far2: frozenset

    def side(self, k: int) -> tuple:
        """(N_k, M_k, F_k) for k in {1, 2}."""
        if k == 1:
            return self.near1, self.middle1, self.far1
        return self.near2, self.middle2, self.far2


def partition_sets(state: OpinionState, hope: HopeState, alpha: Fraction, beta: Fraction,
                   epsilon: Fraction) -> PartitionSets:
    """Classify agents by distance from the hope endpoints.

    Near sets use half-open [0, thr), middle sets closed [thr, epsilon].
    Far sets are one-sided: strictly more than epsilon above the lower
    endpoint (resp. below the upper one), and within the hope interval for
    the second-phase pair.
    """
    x = state.x
    lo, hi = hope.lower, hope.upper
    thr = epsilon * alpha * beta / 12
    thr1 = alpha * beta * hope.ell1 / 12
    thr2 = alpha * beta * hope.ell2 / 12

    def bands(anchor, threshold):
        near = frozenset(i for i, xi in enumerate(x) if abs(xi - anchor) < threshold)
        middle = frozenset(i for i, xi in enumerate(x) if threshold <= abs(xi - anchor) <= epsilon)
        return near, middle

    n0, m0 = bands(lo, thr)
    f0 = frozenset(i for i, xi in enumerate(x) if xi - lo > epsilon)
    nu, mu = bands(hi, thr)
    fu = frozenset(i for i, xi in enumerate(x) if hi - xi > epsilon)
    n1, m1 = bands(lo, thr1)
    n2, m2 = bands(hi, thr2)
    f1 = frozenset(i for i, xi in enumerate(x) if xi - lo > epsilon and xi <= hi)
    f2 = frozenset(i for i, xi in enumerate(x) if hi - xi > epsilon and xi >= lo)
    return PartitionSets(n0, m0, f0, nu, mu, fu, n1, n2, m1, m2, f1, f2)


@dataclass(frozen=True)
class Snapshot:
    graph: ConfidenceGraph
    hope: HopeState
    sets: PartitionSets


def snapshot(state: OpinionState, config: SystemConfig, seekers=None) -> Snapshot:
    if seekers is None:
        seekers = agent_kinds(config).seekers
    g = build_confidence_graph(state, config.h, config.epsilon)
    ext = extremal_agents(state, g, seekers, config.h)
    hope = hope_state(state, g, ext, config.h)
    sets = partition_sets(state, hope, config.alpha, config.beta, config.epsilon)
    return Snapshot(g, hope, sets)


def analyze(traj: Trajectory) -> list:
    """Snapshot of every state in the trajectory."""
    seekers = agent_kinds(traj.config).seekers
    return [snapshot(s, traj.config, seekers) for s in traj.states]
