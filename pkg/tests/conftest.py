from fractions import Fraction as F

import pytest
from hypothesis import settings, strategies as st

from truthseekers import BetaSchedule, Constant, SystemConfig

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def eps_config(units, eps, h_units, seekers=(), alpha=F(1, 2), beta=None, seeker_alpha=None):
    """Uniform-weight system with opinions given in units of eps; ``seekers`` are 0-based."""
    n = len(units)
    seeker_alpha = alpha if seeker_alpha is None else seeker_alpha
    rules = tuple(Constant(seeker_alpha if i in seekers else 0) for i in range(n))
    beta = F(1, max(n, 2)) if beta is None else beta
    weights = BetaSchedule.uniform(n) if n > 1 else BetaSchedule.from_matrix([[F(1, 2)]])
    return SystemConfig(n, F(h_units) * eps, eps, alpha, beta, rules, weights,
                        tuple(F(u) * eps for u in units))


# Twelve agents spread over [0, 17/5] eps; the lone-seeker layout keeps five of them.
TWELVE_AGENTS = dict(
    units=[0, F(27, 20), F(33, 20), 2, F(87, 40), F(47, 20), F(5, 2), F(11, 4), 3, 3, F(16, 5), F(17, 5)],
    h_units=F(21, 8),
    seekers=(3, 5, 6, 8, 9),
)
LONE_SEEKER = dict(
    units=[0, F(27, 20), F(11, 4), F(16, 5), F(17, 5)],
    h_units=F(21, 8),
    seekers=(1,),
)


@pytest.fixture
def twelve_agents():
    return eps_config(eps=F(1, 10), **TWELVE_AGENTS)


@pytest.fixture
def lone_seeker():
    return eps_config(eps=F(1, 10), **LONE_SEEKER)


def rationals(max_den=64, lo=0, hi=1):
    return st.builds(lambda k, d: F(k, d), st.integers(0, max_den), st.just(max_den)).filter(
        lambda v: lo <= v <= hi)


@st.composite
def strict_configs(draw, max_n=6):
    """Random strict-mode systems: row-stochastic weights with entries in [beta, 1 - beta]."""
    n = draw(st.integers(1, max_n))
    eps = F(draw(st.integers(0, 32)), 32)
    h = F(draw(st.integers(0, 32)), 32)
    alpha = F(draw(st.integers(1, 8)), 8)
    x0 = tuple(F(draw(st.integers(0, 64)), 64) for _ in range(n))
    seekers = draw(st.sets(st.integers(0, n - 1)))
    rules = []
    for i in range(n):
        if i in seekers:
            rules.append(Constant(alpha + (1 - alpha) * F(draw(st.integers(0, 4)), 4)))
        else:
            rules.append(Constant(0))
    if n == 1:
        beta, weights = F(1, 2), BetaSchedule.from_matrix([[F(1, 2)]])
    else:
        denom = 64
        base = draw(st.integers(1, denom // n))
        beta = F(base, denom)
        rows = []
        for _ in range(n):
            extra = draw(st.lists(st.integers(0, n - 1), min_size=denom - n * base, max_size=denom - n * base))
            units = [base] * n
            for j in extra:
                units[j] += 1
            rows.append([F(u, denom) for u in units])
        weights = BetaSchedule.from_matrix(rows)
    return SystemConfig(n, h, eps, alpha, beta, tuple(rules), weights, x0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
