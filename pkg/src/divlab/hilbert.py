"""Exact support and value of the trilinear Hilbert transform on indicator sets.

For x <= 0 and a second set contained in [0, inf), the integrand of

    H3(x) = int  1_{U1}(x+t) 1_{U2}(x+2t) 1_{U3}(x+3t)  dt/t

vanishes for t <= 0 (x + 2t < 0 stays left of U2), so the integral runs over
the positive support only, where it evaluates exactly to a sum of log ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .averages import form_time_set
from .intervals import Interval, IntervalUnion, RationalLike, rat
from .scenarios import BlowupSeries, FurstenbergScenario, _verdict, furstenberg_threshold


class PositivityError(ValueError):
    """Preconditions x <= 0 or second-set positivity violated."""


def h3_support(
    x: RationalLike,
    first: IntervalUnion,
    second: IntervalUnion,
    third: IntervalUnion,
) -> IntervalUnion:
    """Exact {t > 0 : x+t in first, x+2t in second, x+3t in third}.

    Requires x <= 0 and second within [0, inf); under these the full integrand
    support lies in t > 0 (t <= 0 would put x + 2t below the second set).
    """
    x = rat(x)
    if x > 0:
        raise PositivityError("base point must satisfy x <= 0")
    if not second.is_empty() and second.intervals[0].lo < 0:
        raise PositivityError("second set must lie in [0, inf)")
    t_set = form_time_set([first, second, third], [1, 2, 3], x)
    # clip to (0, inf); a piece straddling 0 keeps its positive part, and a
    # resulting lo == 0 marks a support reaching down to 0
    pieces = []
    for iv in t_set.intervals:
        if iv.hi <= 0:
            continue
        pieces.append(Interval(max(iv.lo, Fraction(0)), iv.hi))
    return IntervalUnion(tuple(pieces))


@dataclass(frozen=True)
class H3Evaluation:
    x: Fraction
    support: IntervalUnion
    value: float  # math.inf when the support touches 0
    lower_bound: Fraction
    diverges: bool


def h3_evaluate(
    x: RationalLike,
    first: IntervalUnion,
    second: IntervalUnion,
    third: IntervalUnion,
) -> H3Evaluation:
    """Exact H3 value at x: sum of ln(hi/lo) over support intervals.

    The reported lower_bound is the measure of the support inside (0, 1],
    which bounds the value from below whenever the support lies in (0, 1]
    (there 1/t >= 1).  A support touching 0 gives value +inf.
    """
    x = rat(x)
    sup = h3_support(x, first, second, third)
    diverges = (not sup.is_empty()) and sup.intervals[0].lo == 0
    if diverges:
        value = math.inf
    else:
        value = sum(math.log(iv.hi / iv.lo) for iv in sup.intervals)
    lower = sup.clip(0, 1).measure()
    return H3Evaluation(
        x=x, support=sup, value=value, lower_bound=lower, diverges=diverges
    )


def h3_witness_evaluations(scenario: FurstenbergScenario) -> Tuple[H3Evaluation, ...]:
    """H3 at every negative witness base point of the scenario."""
    from .digitsets import base_points

    first, second, third = scenario.factors
    out = []
    for x in base_points(scenario.witness_spec):
        if x < 0:
            out.append(h3_evaluate(x, first, second, third))
    return tuple(out)


def h3_ratio_series(
    p: float, kmax: int, normalization: str = "lebesgue"
) -> BlowupSeries:
    """Forced-constant series: norm lower bound over the factor norm product.

    value_k = (1/8)^(3/p) * (1/(8*12^k)) / (m(U1) m(U2) m(U3))^(1/p) with
    plain Lebesgue factor measures 1/(2*4^k), 1/(2*3^k), 1/(2*2^k) by default;
    normalization='normalized' halves the measures (ambient mass 1), shifting
    every value by the constant 8^(1/p) and leaving all step ratios, the
    threshold ln24/ln12 and the verdict unchanged.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    if kmax < 2:
        raise ValueError("need kmax >= 2 for at least one step ratio")
    if normalization not in ("lebesgue", "normalized"):
        raise ValueError("normalization must be 'lebesgue' or 'normalized'")
    half = 2 if normalization == "lebesgue" else 4
    ks = tuple(range(1, kmax + 1))
    logs = []
    for k in ks:
        log_norm_prod = -(
            math.log(half * 4**k) + math.log(half * 3**k) + math.log(half * 2**k)
        ) / p
        log_bound = -3 * math.log(8) / p - math.log(8 * 12**k)
        logs.append(log_bound - log_norm_prod)
    values = tuple(math.exp(v) for v in logs)
    ratios = tuple(v1 / v0 for v0, v1 in zip(values, values[1:]))
    closed = math.exp(math.log(24) / p - math.log(12))
    return BlowupSeries(
        kind="h3",
        p=float(p),
        weighted=False,
        mode=normalization,
        indices=ks,
        values=values,
        step_ratios=ratios,
        closed_form_ratio=closed,
        threshold=furstenberg_threshold(),
        verdict=_verdict(closed),
    )


def h3_series_columns(p: float, kmax: int, normalization: str = "lebesgue"):
    """Per-k (k, lower_norm_bound, product_of_norms, ratio) rows for CSV export."""
    if normalization not in ("lebesgue", "normalized"):
        raise ValueError("normalization must be 'lebesgue' or 'normalized'")
    half = 2 if normalization == "lebesgue" else 4
    rows = []
    for k in range(1, int(kmax) + 1):
        bound = (1 / 8) ** (3 / p) / (8 * 12**k)
        norms = (
            1 / (half * 4**k) * 1 / (half * 3**k) * 1 / (half * 2**k)
        ) ** (1 / p)
        rows.append((k, bound, norms, bound / norms))
    return rows
