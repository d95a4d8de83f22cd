"""Executable checks of the convergence argument's intermediate claims.

Each monitor scans a trajectory and returns a :class:`Verdict`. A failed
check is reported as a :class:`Finding` (step, lookahead, detail) rather than
raised, so constants can be audited on many runs at once.

Claims that are only asserted from the first-phase time T1 onward take a
``start`` argument; it defaults to T1 from :func:`phase_bounds`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .model import Trajectory, agent_kinds, confidence_set
from .structure import Snapshot, analyze

__all__ = [
    "Finding",
    "GoodIterationEvent",
    "GoodIterationReport",
    "PhaseBounds",
    "Verdict",
    "detect_good_iterations",
    "monitor_containment",
    "monitor_contraction",
    "monitor_final",
    "monitor_good_iterations",
    "monitor_hope_monotone",
    "monitor_lonely_contraction",
    "monitor_near_seeker",
    "monitor_phase1",
    "monitor_settled",
    "phase1_holds",
    "phase1_onset",
    "phase_bounds",
]

PASS, FAIL, VACUOUS = "pass", "fail", "vacuous"


@dataclass(frozen=True)
class Finding:
    monitor: str
    t: int
    lookahead: int
    detail: str


@dataclass(frozen=True)
class Verdict:
    monitor: str
    status: str
    checked: int = 0
    findings: tuple = ()
    note: str = ""

    @property
    def first_violation(self) -> Optional[int]:
        return min((f.t for f in self.findings), default=None)

    @property
    def passed(self) -> bool:
        return self.status != FAIL


def _show(v) -> str:
    """Exact text for modest rationals, a float rendering once they get long."""
    v = Fraction(v)
    if v.numerator.bit_length() + v.denominator.bit_length() > 256:
        return f"~{float(v):.12g}"
    return str(v)


def _verdict(name: str, checked: int, findings: list, note: str = "") -> Verdict:
    if findings:
        status = FAIL
    elif checked == 0:
        status = VACUOUS
    else:
        status = PASS
    return Verdict(name, status, checked, tuple(findings), note)


def _snaps(traj: Trajectory, snaps: Optional[Sequence[Snapshot]]):
    return analyze(traj) if snaps is None else snaps


# -- phase bounds ----------------------------------------------------------------


@dataclass(frozen=True)
class PhaseBounds:
    T1: int
    T2: int


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def phase_bounds(n: int, epsilon: Fraction, alpha: Fraction, beta: Fraction) -> PhaseBounds:
    """T1 = ceil(3 (n + 2 + 24/(eps alpha beta^2))), T2 = T1 + ceil(36/(alpha^2 beta^4))."""
    epsilon, alpha, beta = Fraction(epsilon), Fraction(alpha), Fraction(beta)
    if epsilon <= 0 or alpha <= 0 or beta <= 0:
        raise ValueError("phase bounds need epsilon, alpha, beta > 0")
    t1 = _ceil(3 * (n + 2 + 24 / (epsilon * alpha * beta**2)))
    return PhaseBounds(t1, t1 + _ceil(36 / (alpha**2 * beta**4)))


def _bounds_of(traj: Trajectory) -> Optional[PhaseBounds]:
    """None when epsilon = 0: the phase times are then unbounded."""
    c = traj.config
    if c.epsilon == 0:
        return None
    return phase_bounds(c.n, c.epsilon, c.alpha, c.beta)


def _band(traj: Trajectory) -> Fraction:
    c = traj.config
    return c.epsilon + c.epsilon * c.alpha * c.beta / 12


def phase1_holds(snap: Snapshot, traj: Trajectory) -> bool:
    """Hope interval inside [h - eps - eps*alpha*beta/12, h + eps + eps*alpha*beta/12]."""
    w = _band(traj)
    h = traj.config.h
    return snap.hope.lower >= h - w and snap.hope.upper <= h + w


def phase1_onset(traj: Trajectory, snaps=None) -> Optional[int]:
    """First step at which the first-phase band condition holds."""
    snaps = _snaps(traj, snaps)
    return next((t for t, s in enumerate(snaps) if phase1_holds(s, traj)), None)


# -- single-step claims -------------------------------------------------------------


def monitor_lonely_contraction(traj: Trajectory) -> Verdict:
    """A lone truth seeker: |x(t+r) - h| <= |x(t) - h| (1 - alpha)^r."""
    name = "lonely"
    c = traj.config
    if c.n != 1 or agent_kinds(c).seekers != {0}:
        return _verdict(name, 0, [], "needs a single truth seeker")
    h, q = c.h, 1 - c.alpha
    d = [abs(s.x[0] - h) for s in traj.states]
    findings, checked = [], 0
    for t in range(len(d)):
        factor = Fraction(1)
        for r in range(1, len(d) - t):
            factor *= q
            checked += 1
            if d[t + r] > d[t] * factor:
                findings.append(Finding(name, t, r, f"|x-h| = {_show(d[t + r])} > {_show(d[t] * factor)}"))
    return _verdict(name, checked, findings)


def monitor_containment(traj: Trajectory) -> Verdict:
    """New opinion lies between the extremes of the old confidence set
    (widened towards h for agents pulled by the truth at that step)."""
    name = "containment"
    c = traj.config
    findings, checked = [], 0
    for t in range(traj.horizon):
        x, nxt = traj.x(t), traj.x(t + 1)
        for i, xi in enumerate(x):
            conf = confidence_set(x, xi, c.epsilon)
            lo = min(x[j] for j in conf)
            hi = max(x[j] for j in conf)
            intervals = []
            if c.alpha_at(i, t) == 0:
                intervals.append((lo, hi))
            else:
                if xi <= c.h:
                    intervals.append((lo, max(c.h, hi)))
                if xi >= c.h:
                    intervals.append((min(c.h, lo), hi))
            for a, b in intervals:
                checked += 1
                if not a <= nxt[i] <= b:
                    findings.append(Finding(name, t, 1, f"agent {i}: {_show(nxt[i])} not in [{_show(a)}, {_show(b)}]"))
    return _verdict(name, checked, findings)


def monitor_hope_monotone(traj: Trajectory, snaps=None) -> Verdict:
    """Upper hope endpoint never rises, lower endpoint never falls."""
    name = "hope_monotone"
    snaps = _snaps(traj, snaps)
    findings = []
    for t in range(len(snaps) - 1):
        a, b = snaps[t].hope, snaps[t + 1].hope
        if b.upper > a.upper:
            findings.append(Finding(name, t, 1, f"upper rose {_show(a.upper)} -> {_show(b.upper)}"))
        if b.lower < a.lower:
            findings.append(Finding(name, t, 1, f"lower fell {_show(a.lower)} -> {_show(b.lower)}"))
    return _verdict(name, 2 * (len(snaps) - 1), findings)


# -- good iterations ----------------------------------------------------------------

CLAUSES = ("members_decreased", "lower_reached_band", "upper_reached_band", "upper_moved", "lower_moved")


@dataclass(frozen=True)
class GoodIterationEvent:
    t: int
    r: int
    condition: str


@dataclass(frozen=True)
class GoodIterationReport:
    events: tuple
    chain: tuple  # greedy disjoint windows (t, r)
    chain_before_phase1: int
    ceiling: Fraction
    phase1_at: Optional[int]


def detect_good_iterations(traj: Trajectory, snaps=None) -> GoodIterationReport:
    """Every window (t, t+r), r <= 3, and each of the five progress clauses that fires in it.

    The chain is built greedily: from t take the shortest window with any
    event, count it, continue from its end. Its length is what the ceiling
    n + 2 + 24/(eps alpha beta^2) bounds.
    """
    c = traj.config
    snaps = _snaps(traj, snaps)
    h, eps = c.h, c.epsilon
    off = eps * c.alpha * c.beta / 12
    move = eps * c.alpha * c.beta**2 / 12
    low_line, up_line = h - eps - off, h + eps + off
    fired: dict = {}
    events = []
    horizon = len(snaps) - 1
    for t in range(horizon):
        a = snaps[t].hope
        for r in range(1, 4):
            if t + r > horizon:
                break
            b = snaps[t + r].hope
            hits = []
            if len(b.members) < len(a.members):
                hits.append(CLAUSES[0])
            if a.lower < low_line <= b.lower:
                hits.append(CLAUSES[1])
            if a.upper > up_line >= b.upper:
                hits.append(CLAUSES[2])
            if abs(b.upper - a.upper) >= move:
                hits.append(CLAUSES[3])
            if abs(b.lower - a.lower) >= move:
                hits.append(CLAUSES[4])
            for cl in hits:
                events.append(GoodIterationEvent(t, r, cl))
            if hits:
                fired.setdefault(t, r)
    chain = []
    t = 0
    while t < horizon:
        if t in fired:
            chain.append((t, fired[t]))
            t += fired[t]
        else:
            t += 1
    onset = phase1_onset(traj, snaps)
    before = sum(1 for s, r in chain if onset is None or s + r <= onset)
    ceiling = c.n + 2 + 24 / (eps * c.alpha * c.beta**2) if eps > 0 else Fraction(0)
    return GoodIterationReport(tuple(events), tuple(chain), before, ceiling, onset)


def monitor_good_iterations(traj: Trajectory, snaps=None) -> Verdict:
    """Chained good iterations before the band condition never exceed the ceiling."""
    name = "good_iterations"
    if not agent_kinds(traj.config).seekers or traj.config.epsilon == 0:
        return _verdict(name, 0, [], "no truth seekers")
    rep = detect_good_iterations(traj, snaps)
    findings = []
    if rep.chain_before_phase1 > rep.ceiling:
        findings.append(Finding(name, 0, traj.horizon,
                                f"{rep.chain_before_phase1} good iterations > ceiling {rep.ceiling}"))
    return _verdict(name, 1, findings)


# -- phase claims -------------------------------------------------------------------


def monitor_phase1(traj: Trajectory, bounds: Optional[PhaseBounds] = None, snaps=None,
                   extend_by_monotonicity: bool = False) -> Verdict:
    """Hope interval inside the band at every simulated t >= T1.

    With ``extend_by_monotonicity`` a run shorter than T1 passes when the band
    condition is already met at some simulated step and the hope interval
    is monotone over the run, since it can then only shrink further.
    """
    name = "phase1"
    c = traj.config
    if not agent_kinds(c).seekers:
        return _verdict(name, 0, [], "no truth seekers")
    bounds = _bounds_of(traj) if bounds is None else bounds
    snaps = _snaps(traj, snaps)
    horizon = len(snaps) - 1
    t1 = "unbounded" if bounds is None else bounds.T1
    if bounds is not None and horizon >= bounds.T1:
        findings = [
            Finding(name, t, 0, f"hope interval [{_show(snaps[t].hope.lower)}, {_show(snaps[t].hope.upper)}]"
                    " leaves the band")
            for t in range(bounds.T1, horizon + 1)
            if not phase1_holds(snaps[t], traj)
        ]
        return _verdict(name, horizon + 1 - bounds.T1, findings)
    if extend_by_monotonicity:
        onset = phase1_onset(traj, snaps)
        mono = monitor_hope_monotone(traj, snaps)
        if onset is not None and mono.passed:
            return _verdict(name, 1, [], f"band reached at t={onset} <= T1={t1}; held by monotone hope interval")
    return _verdict(name, 0, [], f"horizon below T1={t1}")


def _start(traj, start, which="T1"):
    if start is not None:
        return start
    b = _bounds_of(traj)
    if b is None:
        return traj.horizon + 1
    return b.T1 if which == "T1" else b.T2


def monitor_contraction(traj: Trajectory, start: Optional[int] = None, snaps=None) -> dict:
    """Side-length contraction claims, one verdict each.

    ``epsilon_interval``: l1+l2 <= eps  =>  (l1+l2)(t+2) <= (l1+l2)(t) (1 - alpha beta/2), any t.
    ``one_step``: some agent at distance in [alpha beta l_k/12, eps] from the endpoint
        =>  l_k(t+1) <= l_k(t) (1 - alpha beta^2/12).
    ``two_step``: ignorant in N_k linked to an agent in F_k
        =>  l_k(t+2) <= l_k(t) (1 - alpha beta^2/12).
    ``one_shrinks``: l_k(t+3) <= l_k(t) (1 - alpha beta^2/12) for some k.
    ``greater_epsilon``: l_k > eps  =>  l_k(t+3) - eps <= (l_k(t) - eps)(1 - alpha beta^2/12)
        or l_k(t+3) <= eps.
    All but the first apply from ``start`` (default T1) on.
    """
    c = traj.config
    kinds = agent_kinds(c)
    names = ("epsilon_interval", "one_step", "two_step", "one_shrinks", "greater_epsilon")
    if not kinds.seekers:
        return {n: _verdict(n, 0, [], "no truth seekers") for n in names}
    snaps = _snaps(traj, snaps)
    start = _start(traj, start)
    horizon = len(snaps) - 1
    a, b, eps = c.alpha, c.beta, c.epsilon
    two = 1 - a * b / 2
    shrink = 1 - a * b**2 / 12
    found = {n: [] for n in names}
    count = dict.fromkeys(names, 0)

    def ell(t, k):
        hope = snaps[t].hope
        return hope.ell1 if k == 1 else hope.ell2

    for t in range(horizon):
        hope = snaps[t].hope
        x = traj.x(t)
        total = hope.ell1 + hope.ell2
        if t + 2 <= horizon and total <= eps:
            count["epsilon_interval"] += 1
            later = snaps[t + 2].hope.ell1 + snaps[t + 2].hope.ell2
            if later > total * two:
                found["epsilon_interval"].append(
                    Finding("epsilon_interval", t, 2,
                            f"l1+l2: {_show(total)} -> {_show(later)} > {_show(total * two)}"))
        if t < start:
            continue
        for k in (1, 2):
            lk = ell(t, k)
            anchor = hope.lower if k == 1 else hope.upper
            thr = a * b * lk / 12
            if any(thr <= abs(xi - anchor) <= eps for xi in x):
                count["one_step"] += 1
                if ell(t + 1, k) > lk * shrink:
                    found["one_step"].append(
                        Finding("one_step", t, 1,
                                f"l{k}: {_show(lk)} -> {_show(ell(t + 1, k))} > {_show(lk * shrink)}"))
            if t + 2 <= horizon:
                near, _, far = snaps[t].sets.side(k)
                if any(abs(x[i] - x[j]) <= eps for i in near - kinds.seekers for j in far):
                    count["two_step"] += 1
                    if ell(t + 2, k) > lk * shrink:
                        found["two_step"].append(
                            Finding("two_step", t, 2,
                                    f"l{k}: {_show(lk)} -> {_show(ell(t + 2, k))} > {_show(lk * shrink)}"))
            if t + 3 <= horizon and lk > eps:
                count["greater_epsilon"] += 1
                later = ell(t + 3, k)
                if later > eps and later - eps > (lk - eps) * shrink:
                    found["greater_epsilon"].append(
                        Finding("greater_epsilon", t, 3, f"l{k}: {_show(lk)} -> {_show(later)}"))
        if t + 3 <= horizon:
            count["one_shrinks"] += 1
            if all(ell(t + 3, k) > ell(t, k) * shrink for k in (1, 2)):
                found["one_shrinks"].append(
                    Finding("one_shrinks", t, 3,
                            f"(l1, l2): ({_show(ell(t, 1))}, {_show(ell(t, 2))})"
                            f" -> ({_show(ell(t + 3, 1))}, {_show(ell(t + 3, 2))})"))
    return {n: _verdict(n, count[n], found[n]) for n in names}


def monitor_near_seeker(traj: Trajectory, start: Optional[int] = None, snaps=None) -> Verdict:
    """A truth seeker in N_k(t+1)  =>  l_k(t+1) <= l_k(t) (1 - alpha/2), from ``start`` on."""
    name = "near_seeker"
    c = traj.config
    seekers = agent_kinds(c).seekers
    if not seekers:
        return _verdict(name, 0, [], "no truth seekers")
    snaps = _snaps(traj, snaps)
    start = _start(traj, start)
    factor = 1 - c.alpha / 2
    findings, checked = [], 0
    for t in range(start, len(snaps) - 1):
        for k in (1, 2):
            near = snaps[t + 1].sets.side(k)[0]
            if near & seekers:
                checked += 1
                now = snaps[t].hope.ell1 if k == 1 else snaps[t].hope.ell2
                nxt = snaps[t + 1].hope.ell1 if k == 1 else snaps[t + 1].hope.ell2
                if nxt > now * factor:
                    findings.append(Finding(name, t, 1, f"l{k}: {_show(now)} -> {_show(nxt)} > {_show(now * factor)}"))
    return _verdict(name, checked, findings)


def _small(c) -> Fraction:
    return c.epsilon * c.alpha**2 * c.beta**3 / 60


def monitor_settled(traj: Trajectory, start: Optional[int] = None, snaps=None) -> Verdict:
    """From T2 on: l1 + l2 <= eps + eps alpha^2 beta^3/60 and min(l1, l2) <= eps alpha^2 beta^3/60."""
    name = "settled"
    c = traj.config
    if not agent_kinds(c).seekers:
        return _verdict(name, 0, [], "no truth seekers")
    snaps = _snaps(traj, snaps)
    start = _start(traj, start, "T2")
    small = _small(c)
    findings, checked = [], 0
    for t in range(start, len(snaps)):
        hope = snaps[t].hope
        checked += 1
        if hope.ell1 + hope.ell2 > c.epsilon + small or min(hope.ell1, hope.ell2) > small:
            findings.append(Finding(name, t, 0, f"(l1, l2) = ({_show(hope.ell1)}, {_show(hope.ell2)})"))
    note = "" if checked else f"horizon below T2={start}"
    return _verdict(name, checked, findings, note)


def monitor_final(traj: Trajectory, start: Optional[int] = None, snaps=None) -> Verdict:
    """From T2 on: (l1+l2)(t+3) <= eps, or every truth seeker within
    eps alpha^2 beta^3/60 (1 - alpha beta/2)^floor((t-T2)/2) of h."""
    name = "final"
    c = traj.config
    seekers = agent_kinds(c).seekers
    if not seekers:
        return _verdict(name, 0, [], "no truth seekers")
    snaps = _snaps(traj, snaps)
    start = _start(traj, start, "T2")
    small, two = _small(c), 1 - c.alpha * c.beta / 2
    findings, checked = [], 0
    for t in range(start, len(snaps) - 3):
        checked += 1
        later = snaps[t + 3].hope
        if later.ell1 + later.ell2 <= c.epsilon:
            continue
        env = small * two ** ((t - start) // 2)
        worst = max(abs(traj.x(t)[k] - c.h) for k in seekers)
        if worst > env:
            findings.append(Finding(name, t, 3, f"max seeker distance {_show(worst)} > {_show(env)}"))
    note = "" if checked else f"horizon below T2+3={start + 3}"
    return _verdict(name, checked, findings, note)


def run_monitors(traj: Trajectory, start: Optional[int] = None, snaps=None,
                 extend_phase1: bool = False) -> dict:
    """Every monitor on one trajectory, keyed by monitor name."""
    snaps = _snaps(traj, snaps)
    out = {
        "lonely": monitor_lonely_contraction(traj),
        "containment": monitor_containment(traj),
        "hope_monotone": monitor_hope_monotone(traj, snaps),
        "good_iterations": monitor_good_iterations(traj, snaps),
        "phase1": monitor_phase1(traj, snaps=snaps, extend_by_monotonicity=extend_phase1),
    }
    out.update(monitor_contraction(traj, start, snaps))
    out["near_seeker"] = monitor_near_seeker(traj, start, snaps)
    out["settled"] = monitor_settled(traj, None, snaps)
    out["final"] = monitor_final(traj, None, snaps)
    return out
