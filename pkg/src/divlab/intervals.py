"""Exact interval-set arithmetic over the rationals.

Sets are finite unions of half-open intervals [lo, hi) with Fraction
endpoints, kept sorted, disjoint and non-touching.  The half-open convention
gives every union a unique canonical form; closed versus half-open changes
results only on finite point sets, which carry no measure, so every measure,
integral and inequality computed downstream is unaffected.

No floating point enters here: endpoints, measures and function values are
Fractions throughout.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Tuple, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


def rat(value: RationalLike) -> Fraction:
    """Coerce ints, 'num/den' strings and decimal strings to an exact Fraction.

    Floats are rejected: they would silently break the exactness contract.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction, int or string")
    return Fraction(value)


def rat_str(q: RationalLike) -> str:
    """Canonical 'num/den' rendering, e.g. '-1/96', '0/1'."""
    q = rat(q)
    return f"{q.numerator}/{q.denominator}"


def real(x) -> float:
    """Round a real to 15 significant digits for deterministic serialization."""
    return float(f"{float(x):.15g}")


def common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = lcm(d, v.denominator)
    return d


@dataclass(frozen=True)
class Interval:
    """A nonempty half-open interval [lo, hi)."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not isinstance(self.lo, Fraction):
            object.__setattr__(self, "lo", rat(self.lo))
        if not isinstance(self.hi, Fraction):
            object.__setattr__(self, "hi", rat(self.hi))
        if self.lo >= self.hi:
            raise ValueError(f"empty or inverted interval [{self.lo}, {self.hi})")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


def _merge_sorted(pairs):
    """Merge a lo-sorted list of (lo, hi) pairs; overlapping or touching pairs fuse."""
    merged = []
    for lo, hi in pairs:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return merged


@dataclass(frozen=True)
class IntervalUnion:
    """Canonical finite union of half-open intervals.

    Instances must be canonical (sorted, disjoint, non-touching); build them
    with `normalize` unless the input is already known canonical.
    """

    intervals: Tuple[Interval, ...] = ()

    def is_empty(self) -> bool:
        return not self.intervals

    def measure(self) -> Fraction:
        total = Fraction(0)
        for iv in self.intervals:
            total += iv.hi - iv.lo
        return total

    def pairs(self):
        return [(iv.lo, iv.hi) for iv in self.intervals]

    def endpoints(self):
        out = []
        for iv in self.intervals:
            out.append(iv.lo)
            out.append(iv.hi)
        return out

    def bounds(self):
        if not self.intervals:
            return None
        return (self.intervals[0].lo, self.intervals[-1].hi)

    def __contains__(self, x) -> bool:
        x = rat(x)
        los = [iv.lo for iv in self.intervals]
        i = bisect.bisect_right(los, x) - 1
        return i >= 0 and x < self.intervals[i].hi

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        a, b = self.intervals, other.intervals
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            lo = a[i].lo if a[i].lo > b[j].lo else b[j].lo
            hi = a[i].hi if a[i].hi < b[j].hi else b[j].hi
            if lo < hi:
                out.append([lo, hi])
            if a[i].hi <= b[j].hi:
                i += 1
            else:
                j += 1
        # pieces of an intersection can touch (e.g. [0,2) cut by [0,1),[1,2))
        return IntervalUnion(tuple(Interval(lo, hi) for lo, hi in _merge_sorted(out)))

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return normalize(self.pairs() + other.pairs())

    def issubset(self, other: "IntervalUnion") -> bool:
        # exact containment up to the canonical form: A subset B iff A&B == A
        return self.intersect(other) == self

    def affine(self, a: RationalLike, b: RationalLike) -> "IntervalUnion":
        """Image under x -> a*x + b, a != 0.  Orientation flips when a < 0."""
        a, b = rat(a), rat(b)
        if a == 0:
            raise ValueError("affine image requires a != 0")
        if a > 0:
            ivs = tuple(Interval(a * iv.lo + b, a * iv.hi + b) for iv in self.intervals)
        else:
            ivs = tuple(
                Interval(a * iv.hi + b, a * iv.lo + b) for iv in reversed(self.intervals)
            )
        return IntervalUnion(ivs)

    def translate(self, shift: RationalLike) -> "IntervalUnion":
        return self.affine(1, shift)

    def clip(self, lo: RationalLike, hi: RationalLike) -> "IntervalUnion":
        lo, hi = rat(lo), rat(hi)
        if lo >= hi:
            return IntervalUnion()
        return self.intersect(IntervalUnion((Interval(lo, hi),)))

    def to_json(self):
        return [[rat_str(iv.lo), rat_str(iv.hi)] for iv in self.intervals]

    @staticmethod
    def from_json(data) -> "IntervalUnion":
        return normalize((rat(lo), rat(hi)) for lo, hi in data)


EMPTY = IntervalUnion()


def normalize(pairs: Iterable[Tuple[RationalLike, RationalLike]]) -> IntervalUnion:
    """Canonicalize raw (lo, hi) pairs: sort, merge overlaps and touching, drop empties.

    Raises ValueError on an inverted pair (lo > hi); lo == hi pairs are dropped.
    """
    items = []
    for lo, hi in pairs:
        lo, hi = rat(lo), rat(hi)
        if lo > hi:
            raise ValueError(f"inverted interval ({lo}, {hi})")
        if lo < hi:
            items.append((lo, hi))
    items.sort()
    return IntervalUnion(tuple(Interval(lo, hi) for lo, hi in _merge_sorted(items)))


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function with exact rational breakpoints.

    Linear between consecutive breakpoints, constant outside the span.
    """

    xs: Tuple[Fraction, ...]
    ys: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.xs) != len(self.ys) or not self.xs:
            raise ValueError("breakpoints and values must match and be nonempty")
        for a, b in zip(self.xs, self.xs[1:]):
            if a >= b:
                raise ValueError("breakpoints must be strictly increasing")

    def __call__(self, x: RationalLike) -> Fraction:
        x = rat(x)
        if x <= self.xs[0]:
            return self.ys[0]
        if x >= self.xs[-1]:
            return self.ys[-1]
        i = bisect.bisect_right(self.xs, x) - 1
        x0, x1 = self.xs[i], self.xs[i + 1]
        y0, y1 = self.ys[i], self.ys[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def superlevel(self, level: RationalLike) -> IntervalUnion:
        """Exact {x in [xs[0], xs[-1]] : f(x) >= level} as a canonical union.

        Isolated touch points (f == level at a single x with f < level on both
        sides) are measure zero and omitted, consistent with the half-open
        set convention.
        """
        level = rat(level)
        pieces = []
        if len(self.xs) == 1:
            return EMPTY  # degenerate span carries no measure
        for i in range(len(self.xs) - 1):
            x0, x1 = self.xs[i], self.xs[i + 1]
            y0, y1 = self.ys[i], self.ys[i + 1]
            if y0 >= level and y1 >= level:
                pieces.append((x0, x1))
            elif y0 >= level > y1:
                xc = x0 + (level - y0) * (x1 - x0) / (y1 - y0)
                pieces.append((x0, xc))
            elif y1 >= level > y0:
                xc = x0 + (level - y0) * (x1 - x0) / (y1 - y0)
                pieces.append((xc, x1))
        return normalize(pieces)


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous step function: value[i] on [xs[i], xs[i+1])."""

    xs: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.xs) != len(self.values) + 1 or len(self.xs) < 2:
            raise ValueError("need n+1 boundaries for n cells")
        for a, b in zip(self.xs, self.xs[1:]):
            if a >= b:
                raise ValueError("cell boundaries must be strictly increasing")

    def __call__(self, x: RationalLike) -> Fraction:
        x = rat(x)
        if x < self.xs[0] or x >= self.xs[-1]:
            return Fraction(0)
        i = bisect.bisect_right(self.xs, x) - 1
        return self.values[i]

    def superlevel(self, level: RationalLike) -> IntervalUnion:
        level = rat(level)
        pieces = [
            (self.xs[i], self.xs[i + 1])
            for i, v in enumerate(self.values)
            if v >= level
        ]
        return normalize(pieces)
