"""Time-indexed weight rules for the truth weights alpha_i(t) and the
influence weights beta_ij(t).

Every rule can report exact lower/upper bounds over all t >= 0, so that
agent classification and range validation are decided from the rule itself
rather than by sampling a finite prefix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

__all__ = [
    "Schedule",
    "Constant",
    "Table",
    "Periodic",
    "Switch",
    "Geometric",
    "as_fraction",
]

Number = Union[int, str, Fraction]


def as_fraction(value: Number) -> Fraction:
    """Parse an int, a ``"p/q"`` string or a Fraction. Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"decimal literal {value!r} not allowed; write p/q")
        return Fraction(text)
    raise TypeError(f"cannot read {value!r} as an exact rational")


class Schedule:
    """Base class. Subclasses are frozen dataclasses."""

    def __call__(self, t: int) -> Fraction:
        raise NotImplementedError

    def infimum(self) -> Fraction:
        raise NotImplementedError

    def supremum(self) -> Fraction:
        raise NotImplementedError

    def first_outside(self, lo: Fraction, hi: Fraction) -> Optional[int]:
        """Smallest t with value(t) outside [lo, hi], or None."""
        raise NotImplementedError

    def shift(self, t0: int) -> "Schedule":
        """Rule for t -> value(t + t0)."""
        raise NotImplementedError

    def always_zero(self) -> bool:
        return self.infimum() == 0 and self.supremum() == 0


@dataclass(frozen=True)
class Constant(Schedule):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", as_fraction(self.value))

    def __call__(self, t: int) -> Fraction:
        return self.value

    def infimum(self) -> Fraction:
        return self.value

    def supremum(self) -> Fraction:
        return self.value

    def first_outside(self, lo, hi):
        return None if lo <= self.value <= hi else 0

    def shift(self, t0):
        return self


@dataclass(frozen=True)
class Table(Schedule):
    """Explicit values for t = 0..len-1, then ``tail`` forever (default: last entry)."""

    values: tuple
    tail: Optional[Fraction] = None

    def __post_init__(self):
        if not self.values:
            raise ValueError("table needs at least one entry")
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))
        tail = self.values[-1] if self.tail is None else as_fraction(self.tail)
        object.__setattr__(self, "tail", tail)

    def __call__(self, t: int) -> Fraction:
        return self.values[t] if t < len(self.values) else self.tail

    def infimum(self):
        return min(min(self.values), self.tail)

    def supremum(self):
        return max(max(self.values), self.tail)

    def first_outside(self, lo, hi):
        for t, v in enumerate(self.values):
            if not lo <= v <= hi:
                return t
        return None if lo <= self.tail <= hi else len(self.values)

    def shift(self, t0):
        if t0 >= len(self.values):
            return Constant(self.tail)
        return Table(self.values[t0:], self.tail)


@dataclass(frozen=True)
class Periodic(Schedule):
    """value(t) = values[t mod len]."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("periodic rule needs at least one entry")
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    def __call__(self, t: int) -> Fraction:
        return self.values[t % len(self.values)]

    def infimum(self):
        return min(self.values)

    def supremum(self):
        return max(self.values)

    def first_outside(self, lo, hi):
        for t, v in enumerate(self.values):
            if not lo <= v <= hi:
                return t
        return None

    def shift(self, t0):
        k = t0 % len(self.values)
        return Periodic(self.values[k:] + self.values[:k])


@dataclass(frozen=True)
class Switch(Schedule):
    """``on`` for start <= t < stop (stop=None: forever), ``off`` otherwise."""

    on: Fraction
    start: int
    stop: Optional[int] = None
    off: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "on", as_fraction(self.on))
        object.__setattr__(self, "off", as_fraction(self.off))
        if self.start < 0 or (self.stop is not None and self.stop < self.start):
            raise ValueError("need 0 <= start <= stop")

    def _takes_on(self) -> bool:
        return self.stop is None or self.stop > self.start

    def _takes_off(self) -> bool:
        return self.start > 0 or self.stop is not None

    def __call__(self, t: int) -> Fraction:
        if t >= self.start and (self.stop is None or t < self.stop):
            return self.on
        return self.off

    def _seen(self):
        return [v for v, seen in ((self.on, self._takes_on()), (self.off, self._takes_off())) if seen]

    def infimum(self):
        return min(self._seen())

    def supremum(self):
        return max(self._seen())

    def first_outside(self, lo, hi):
        hits = []
        if self._takes_on() and not lo <= self.on <= hi:
            hits.append(self.start)
        if self._takes_off() and not lo <= self.off <= hi:
            hits.append(0 if self.start > 0 else self.stop)
        return min(hits) if hits else None

    def shift(self, t0):
        stop = None if self.stop is None else max(self.stop - t0, 0)
        start = max(self.start - t0, 0)
        if stop is not None and stop <= start:
            return Constant(self.off)
        return Switch(self.on, start, stop, self.off)


@dataclass(frozen=True)
class Geometric(Schedule):
    """value(t) = offset + scale * ratio**t with 0 <= ratio < 1."""

    offset: Fraction
    scale: Fraction
    ratio: Fraction

    def __post_init__(self):
        for name in ("offset", "scale", "ratio"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not 0 <= self.ratio < 1:
            raise ValueError("geometric ratio must lie in [0, 1)")

    def __call__(self, t: int) -> Fraction:
        return self.offset + self.scale * self.ratio**t

    # monotone in t, so the range sits between value(0) and the limit
    def infimum(self):
        return min(self(0), self.offset)

    def supremum(self):
        return max(self(0), self.offset)

    def first_outside(self, lo, hi):
        if lo <= self.offset <= hi:
            return None if lo <= self(0) <= hi else 0
        # limit is outside, so the walk terminates
        t = 0
        while lo <= self(t) <= hi:
            t += 1
        return t

    def shift(self, t0):
        return Geometric(self.offset, self.scale * self.ratio**t0, self.ratio)
