"""Exact and randomized engines for multilinear averages of indicator sets.

The central object is F(x) = |{t in D : x + c_i t in U_i for all i}| for
interval-union sets U_i, integer coefficients c_i and a rational t-domain D.
Everything except the Monte Carlo estimator is exact rational arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from .digitsets import base_points
from .intervals import (
    EMPTY,
    IntervalUnion,
    PiecewiseLinear,
    RationalLike,
    StepFunction,
    common_denominator,
    normalize,
    rat,
)
from .scenarios import CubeScenario, FurstenbergScenario, furstenberg_family


class SearchExhaustedError(RuntimeError):
    """A certified search ran out of candidates (not a proof of nonexistence)."""


# ---------------------------------------------------------------------------
# exact pointwise integral
# ---------------------------------------------------------------------------


def form_time_set(
    sets: Sequence[IntervalUnion],
    coefficients: Sequence[int],
    x: RationalLike,
    t_domain=None,
) -> IntervalUnion:
    """Exact {t : x + c_i t in U_i for all i} (intersected with t_domain if given)."""
    if len(sets) != len(coefficients) or not sets:
        raise ValueError("need matching nonempty sets and coefficients")
    x = rat(x)
    out = None
    for u, c in zip(sets, coefficients):
        c = int(c)
        if c == 0:
            raise ValueError("coefficients must be nonzero")
        pre = u.affine(Fraction(1, c), Fraction(-x, c))  # (U - x)/c
        out = pre if out is None else out.intersect(pre)
        if out.is_empty():
            return out
    if t_domain is not None:
        out = out.clip(rat(t_domain[0]), rat(t_domain[1]))
    return out


def multilinear_integral(
    sets: Sequence[IntervalUnion],
    coefficients: Sequence[int],
    x: RationalLike,
    t_domain=(0, 1),
) -> Fraction:
    """Exact integral over t_domain of prod_i 1_{U_i}(x + c_i t) dt."""
    return form_time_set(sets, coefficients, x, t_domain).measure()


# ---------------------------------------------------------------------------
# exact superlevel sweep in x
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepResult:
    function: Union[PiecewiseLinear, StepFunction]
    superlevel: IntervalUnion
    superlevel_measure: Fraction


def _pair_isect(a, b):
    """Intersection of two sorted disjoint (lo, hi) pair lists (ints or Fractions)."""
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        alo, ahi = a[i]
        blo, bhi = b[j]
        lo = alo if alo > blo else blo
        hi = ahi if ahi < bhi else bhi
        if lo < hi:
            out.append((lo, hi))
        if ahi <= bhi:
            i += 1
        else:
            j += 1
    return out


def _isect_length(fam_ints, fam_scale, x_int, dom_pair):
    """Exact measure (in 1/(L*C) units) of the translated-family intersection at x."""
    cur = [dom_pair]
    for eps, kf in zip(fam_ints, fam_scale):
        n = len(eps) // 2
        if kf > 0:
            pairs = [
                ((eps[2 * t] - x_int) * kf, (eps[2 * t + 1] - x_int) * kf)
                for t in range(n)
            ]
        else:
            pairs = [
                ((eps[2 * t + 1] - x_int) * kf, (eps[2 * t] - x_int) * kf)
                for t in range(n - 1, -1, -1)
            ]
        cur = _pair_isect(cur, pairs)
        if not cur:
            return 0
    return sum(hi - lo for lo, hi in cur)


def sweep_superlevel(
    sets: Sequence[IntervalUnion],
    coefficients: Sequence[int],
    level: RationalLike,
    window,
    t_domain=(0, 1),
) -> SweepResult:
    """Exact superlevel set {x in window : F(x) >= level} of the average

        F(x) = |{t in t_domain : x + c_i t in U_i for all i}|.

    Event-driven sweep: as x moves, the preimage (U_i - x)/c_i translates at
    slope -1/c_i, so the combinatorial structure of the intersection changes
    only where two endpoints from families with different coefficients cross,
    or an endpoint crosses the t-domain boundary.  F is linear between such
    events and continuous everywhere, so evaluating F exactly at every event
    inside the window determines it exactly.  Crossings whose meeting point
    lies outside the t-domain cannot change the structure and are skipped.
    """
    sets = list(sets)
    coeffs = [int(c) for c in coefficients]
    if len(sets) != len(coeffs) or not sets:
        raise ValueError("need matching nonempty sets and coefficients")
    if any(c == 0 for c in coeffs):
        raise ValueError("coefficients must be nonzero")
    w0, w1 = rat(window[0]), rat(window[1])
    if w0 >= w1:
        raise ValueError("window must be nondegenerate")
    t0, t1 = rat(t_domain[0]), rat(t_domain[1])
    if t0 >= t1:
        raise ValueError("t-domain must be nondegenerate")
    level = rat(level)

    fam_eps = [u.endpoints() for u in sets]
    events = {w0, w1}
    for i in range(len(sets)):
        ci = coeffs[i]
        for j in range(i + 1, len(sets)):
            cj = coeffs[j]
            if ci == cj:
                continue
            d = cj - ci
            for e in fam_eps[i]:
                for f in fam_eps[j]:
                    x = (cj * e - ci * f) / d
                    if w0 <= x <= w1 and t0 <= (e - x) / ci <= t1:
                        events.add(x)
        for e in fam_eps[i]:
            for dom in (t0, t1):
                x = e - ci * dom
                if w0 <= x <= w1:
                    events.add(x)
    xs = sorted(events)

    # integer scaling: L clears every x- and endpoint-denominator, C = lcm|c_i|
    # keeps translated t-endpoints (e - x) * C/c_i integral
    L = common_denominator(
        itertools.chain(xs, (t0, t1), *fam_eps)
    )
    C = lcm(*(abs(c) for c in coeffs)) if len(coeffs) > 1 else abs(coeffs[0])
    fam_ints = [[int(e * L) for e in eps] for eps in fam_eps]
    fam_scale = [C // c for c in coeffs]
    dom_pair = (int(t0 * L) * C, int(t1 * L) * C)
    unit = L * C

    ys = [
        Fraction(_isect_length(fam_ints, fam_scale, int(x * L), dom_pair), unit)
        for x in xs
    ]
    f = PiecewiseLinear(tuple(xs), tuple(ys))
    sup = f.superlevel(level)
    return SweepResult(function=f, superlevel=sup, superlevel_measure=sup.measure())


# ---------------------------------------------------------------------------
# discrete (Riemann-sum) superlevel sweep
# ---------------------------------------------------------------------------


def wrap_translate(u: IntervalUnion, shift: RationalLike, lo=-1, hi=1) -> IntervalUnion:
    """Translate u by shift and fold into [lo, hi) (circle of circumference hi-lo)."""
    lo, hi, shift = rat(lo), rat(hi), rat(shift)
    circ = hi - lo
    pieces = []
    for iv in u.intervals:
        if iv.hi - iv.lo >= circ:
            return normalize([(lo, hi)])
        a = lo + ((iv.lo + shift - lo) % circ)
        b = a + (iv.hi - iv.lo)
        if b <= hi:
            pieces.append((a, b))
        else:
            pieces.append((a, hi))
            pieces.append((lo, b - circ))
    return normalize(pieces)


def _count_threshold(level: Fraction, n_steps: int) -> int:
    return math.ceil(level * n_steps)


def _line_piece_events(sets, coeffs, n_steps, w0, w1):
    """(event list [(coord_int, delta)], scale L) for the grid sum on the line."""
    fam_eps = [u.endpoints() for u in sets]
    L = lcm(common_denominator(itertools.chain((w0, w1), *fam_eps)), n_steps)
    step = L // n_steps
    fam_ints = [
        [(int(e * L), c * step) for e in eps] for eps, c in zip(fam_eps, coeffs)
    ]
    w_pair = (int(w0 * L), int(w1 * L))
    events = []
    for n in range(1, n_steps + 1):
        cur = [w_pair]
        for fam in fam_ints:
            pairs = [
                (fam[2 * t][0] - fam[2 * t][1] * n, fam[2 * t + 1][0] - fam[2 * t + 1][1] * n)
                for t in range(len(fam) // 2)
            ]
            cur = _pair_isect(cur, pairs)
            if not cur:
                break
        for lo, hi in cur:
            events.append((lo, 1))
            events.append((hi, -1))
    return events, L


def _circle_piece_events(sets, coeffs, n_steps, w0, w1, lo, hi):
    events = []
    win = normalize([(w0, w1)])
    for n in range(1, n_steps + 1):
        cur = win
        for u, c in zip(sets, coeffs):
            cur = cur.intersect(wrap_translate(u, Fraction(-c * n, n_steps), lo, hi))
            if cur.is_empty():
                break
        for iv in cur.intervals:
            events.append((iv.lo, 1))
            events.append((iv.hi, -1))
    return events


def _sweep_counts(events):
    """Collapse (coord, delta) events into consecutive (coord, running_count) cells."""
    events.sort(key=lambda e: e[0])
    cells = []  # (start_coord, count on [start, next_start))
    count = 0
    i = 0
    n = len(events)
    while i < n:
        coord = events[i][0]
        while i < n and events[i][0] == coord:
            count += events[i][1]
            i += 1
        cells.append((coord, count))
    return cells


def discrete_superlevel(
    sets: Sequence[IntervalUnion],
    coefficients: Sequence[int],
    n_steps: int,
    level: RationalLike,
    window,
    topology: str = "line",
    circle_lo: RationalLike = -1,
    circle_hi: RationalLike = 1,
) -> SweepResult:
    """Exact superlevel set of the grid average

        G(x) = (1/N) * #{1 <= n <= N : x + c_i n/N in U_i for all i}

    over the window.  Topology 'line' evaluates indicators on the real line;
    'circle' folds x + c_i n/N into [circle_lo, circle_hi) first.  G is a step
    function of x; the sweep is exact in both modes.
    """
    coeffs = [int(c) for c in coefficients]
    n_steps = int(n_steps)
    if n_steps < 1:
        raise ValueError("need n_steps >= 1")
    if len(sets) != len(coeffs) or not sets:
        raise ValueError("need matching nonempty sets and coefficients")
    w0, w1 = rat(window[0]), rat(window[1])
    if w0 >= w1:
        raise ValueError("window must be nondegenerate")
    level = rat(level)
    m0 = _count_threshold(level, n_steps)

    if topology == "line":
        events, scale = _line_piece_events(sets, coeffs, n_steps, w0, w1)
        cells = [(Fraction(c, scale), cnt) for c, cnt in _sweep_counts(events)]
    elif topology == "circle":
        events = _circle_piece_events(
            sets, coeffs, n_steps, w0, w1, rat(circle_lo), rat(circle_hi)
        )
        cells = _sweep_counts(events)
    else:
        raise ValueError("topology must be 'line' or 'circle'")

    # cells give the grid count from each coordinate onward; fold into a step
    # function spanning exactly [w0, w1] (pieces were clipped to the window)
    xs = [w0]
    vals = []
    running = Fraction(0)
    for coord, cnt in cells:
        if coord >= w1:
            break
        if coord > xs[-1]:
            vals.append(running)
            xs.append(coord)
        running = Fraction(cnt, n_steps)
    vals.append(running)
    xs.append(w1)
    g = StepFunction(tuple(xs), tuple(vals))

    if m0 <= 0:
        sup = normalize([(w0, w1)])
    else:
        sup = g.superlevel(Fraction(m0, n_steps))
    return SweepResult(function=g, superlevel=sup, superlevel_measure=sup.measure())


def _discrete_line_measure(sets, coeffs, n_steps, level, w0, w1) -> Fraction:
    """Measure of the line-topology grid superlevel, without the step function."""
    m0 = _count_threshold(level, n_steps)
    if m0 <= 0:
        return w1 - w0
    events, scale = _line_piece_events(sets, coeffs, n_steps, w0, w1)
    cells = _sweep_counts(events)
    total = 0
    for (coord, cnt), nxt in zip(cells, cells[1:]):
        if cnt >= m0:
            total += nxt[0] - coord
    return Fraction(total, scale)


@dataclass(frozen=True)
class RiemannCertificate:
    n_steps: int
    measure: Fraction
    level: Fraction
    target: Fraction


def find_riemann_n(
    k: int,
    level: RationalLike,
    target: RationalLike,
    progression: Sequence[int] | None = None,
    window=(-1, 0),
    max_n: int = 10_000,
) -> RiemannCertificate:
    """Smallest N in the progression whose grid superlevel measure reaches target.

    Uses the depth-k triple-average scenario on the given window; the default
    progression is the multiples of 8*12^k up to max_n (grid aligned with the
    set endpoints).  The returned certificate is exact; exhaustion raises
    SearchExhaustedError and proves nothing.
    """
    scen = furstenberg_family(k)
    level, target = rat(level), rat(target)
    w0, w1 = rat(window[0]), rat(window[1])
    if progression is None:
        base = 8 * 12**k
        progression = range(base, max_n + 1, base)
    last = None
    for n_steps in progression:
        last = int(n_steps)
        meas = _discrete_line_measure(
            scen.factors, list(scen.coefficients), last, level, w0, w1
        )
        if meas >= target:
            return RiemannCertificate(
                n_steps=last, measure=meas, level=level, target=target
            )
    raise SearchExhaustedError(
        f"no N up to {last} reached superlevel measure {target} at level {level}"
    )


# ---------------------------------------------------------------------------
# cube certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubeCheck:
    x: Fraction
    eps: Tuple[int, ...]
    base_in_form: bool
    slack: Fraction
    passed: bool


@dataclass(frozen=True)
class CubeCertificateReport:
    dimension: int
    depth: int
    t_tail: Fraction
    checks: Tuple[CubeCheck, ...]
    all_pass: bool
    integral_lower_bound: Fraction


def cube_certificate_check(
    scenario: CubeScenario, t_tail: RationalLike | None = None
) -> CubeCertificateReport:
    """Symbolic verification of the cube-average certificate.

    Every witness base point decomposes uniquely as x = b_1+...+b_m - (m-1)b
    over generator base points b_j and a shared point b.  With t_j in
    [b - b_j, b - b_j + t_tail] the form value x + eps.t has base point
    x + sum_{j: eps_j=1} (b - b_j), which must be a base point of the eps form
    set, and fractional part z + sum of at most |eps| tails, which must fit
    inside the form tail: slack = form_tail - (witness_tail + |eps| * t_tail)
    must be >= 0.  Both checks run per (x, eps); all-pass implies the average
    lower bound [(m+1) * 2^(k(m+1))]^(-m) at every witness point.
    """
    m = scenario.dimension
    tau = scenario.witness_tail
    t_tail = tau if t_tail is None else rat(t_tail)
    form_tail = scenario.form_tail
    gen_pts = [base_points(g) for g in scenario.generator_specs]
    shared_pts = base_points(scenario.shared_spec)
    lattice = set(base_points(scenario.base_spec))
    form_base: Dict[Tuple[int, ...], set] = {
        eps: set(base_points(spec)) for eps, spec in scenario.form_specs.items()
    }
    eps_list = sorted(scenario.form_specs)

    checks = []
    all_pass = True
    for combo in itertools.product(*gen_pts, shared_pts):
        bs, b = combo[:-1], combo[-1]
        x = sum(bs) - (m - 1) * b
        if x not in lattice:
            raise AssertionError("witness decomposition left the base lattice")
        for eps in eps_list:
            l = sum(eps)
            target = x + sum(b - bs[j] for j in range(m) if eps[j])
            member = target in form_base[eps]
            slack = form_tail - (tau + l * t_tail)
            ok = member and slack >= 0
            if not ok:
                all_pass = False
            checks.append(
                CubeCheck(x=x, eps=eps, base_in_form=member, slack=slack, passed=ok)
            )
    rho_k = (2 ** (m + 1)) ** scenario.depth
    bound = Fraction(1, ((m + 1) * rho_k) ** m)
    return CubeCertificateReport(
        dimension=m,
        depth=scenario.depth,
        t_tail=t_tail,
        checks=tuple(checks),
        all_pass=all_pass,
        integral_lower_bound=bound,
    )


# ---------------------------------------------------------------------------
# Monte Carlo estimator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    stderr: float
    samples: int
    seed: int


def monte_carlo_average(
    matrix: Sequence[Sequence[int]],
    sets: Sequence[IntervalUnion],
    x: RationalLike,
    eps: RationalLike,
    samples: int,
    seed: int,
) -> MCEstimate:
    """Unbiased estimate of (1/eps^m) int_{[0,eps]^m} prod_i 1_{U_i}(x + a_i . t) dt.

    Floating point by design (the non-exact substitute engine); output is a
    deterministic function of (seed, samples).
    """
    matrix = [list(map(int, row)) for row in matrix]
    if len(matrix) != len(sets) or not matrix:
        raise ValueError("need one coefficient row per set")
    mdim = len(matrix[0])
    if any(len(row) != mdim for row in matrix):
        raise ValueError("ragged coefficient matrix")
    samples = int(samples)
    if samples < 2:
        raise ValueError("need at least 2 samples")
    rng = np.random.default_rng(seed)
    t = rng.random((samples, mdim)) * float(rat(eps))
    ok = np.ones(samples, dtype=bool)
    x0 = float(rat(x))
    for row, u in zip(matrix, sets):
        y = x0 + t @ np.asarray(row, dtype=float)
        ep = np.asarray([float(e) for e in u.endpoints()], dtype=float)
        if ep.size == 0:
            ok[:] = False
            break
        ok &= (np.searchsorted(ep, y, side="right") % 2) == 1
    est = float(ok.mean())
    stderr = float(ok.std(ddof=1) / math.sqrt(samples))
    return MCEstimate(estimate=est, stderr=stderr, samples=samples, seed=int(seed))


# ---------------------------------------------------------------------------
# degenerate (dependent-form) truncated ratios
# ---------------------------------------------------------------------------


def degenerate_pointwise_bound(big_m: int, x: float) -> float:
    """Certified pointwise lower bound min(4, 4/(M|x|+1)^2) for the squares average.

    Centered-box argument: both s and t range over an interval of length 1/M
    centered at -x/2, and the third constraint x+s+t in [-1/M, 1/M] is then
    automatic; normalizing at scale (M|x|+1)/(2M) gives the bound.
    """
    return min(4.0, 4.0 / (big_m * abs(x) + 1.0) ** 2)


def degenerate_lower_ratio(big_m: int, p4prime: float, big_l) -> Tuple[float, float]:
    """(ratio, integral) for the truncated degenerate-squares quasi-norm ratio.

    integral = int_{-L}^{L} bound(x)^{p4'} dx in closed form
             = 2*4^{p4'} * ((ML+1)^{1-2p4'} - 1) / (M(1-2p4'))
    (logarithmic at p4' = 1/2); ratio = (integral)^{1/p4'} / (2/M)^{1/p4'}.
    Grows without bound in L exactly when p4' < 1/2.
    """
    big_m = int(big_m)
    p = float(p4prime)
    big_l = float(big_l)
    if big_m < 1 or p <= 0 or big_l <= 0:
        raise ValueError("need M >= 1, p4' > 0, L > 0")
    u = big_m * big_l + 1.0
    if abs(1.0 - 2.0 * p) < 1e-9:
        integral = 2.0 * (4.0**p) * math.log(u) / big_m
    else:
        integral = 2.0 * (4.0**p) * (u ** (1.0 - 2.0 * p) - 1.0) / (big_m * (1.0 - 2.0 * p))
    ratio = (integral * big_m / 2.0) ** (1.0 / p)
    return ratio, integral


@dataclass(frozen=True)
class DependentFormsBound:
    ratio: float
    integral: float
    threshold: Fraction
    grows: bool


def dependent_forms_pointwise_bound(r: int, b: Sequence[int], big_m: int, x: float) -> float:
    """min(2^(r-1), c_b/(M|x|+1)^(r-1)) with c_b = (2/sum|b_i|)^(r-1)."""
    sigma = sum(abs(int(v)) for v in b)
    cb = (2.0 / sigma) ** (r - 1)
    return min(2.0 ** (r - 1), cb / (big_m * abs(x) + 1.0) ** (r - 1))


def dependent_forms_lower_ratio(
    r: int, b: Sequence[int], big_m: int, p: float, big_l
) -> DependentFormsBound:
    """Truncated L^(p/r) quasi-norm ratio for r monomials x+t_1,...,x+t_{r-1},
    x + sum b_i t_i with integer b_i summing to 1.

    The centered-box bound integrates in closed form like the squares case
    with exponent (r-1) * p/r; the ratio grows without bound in L exactly when
    that exponent is < 1, i.e. p < r/(r-1) (the predicted divergence range).
    """
    r = int(r)
    b = [int(v) for v in b]
    if r < 3:
        raise ValueError("need r >= 3")
    if len(b) != r - 1:
        raise ValueError("need r-1 coefficients")
    if sum(b) != 1:
        raise ValueError("coefficients must sum to 1 (dependent-form condition)")
    big_m = int(big_m)
    p = float(p)
    big_l = float(big_l)
    if big_m < 1 or p <= 0 or big_l <= 0:
        raise ValueError("need M >= 1, p > 0, L > 0")
    sigma = sum(abs(v) for v in b)
    q = p / r
    cb = (2.0 / sigma) ** (r - 1)
    a = (r - 1) * q
    u = big_m * big_l + 1.0
    if abs(1.0 - a) < 1e-9:
        integral = 2.0 * (cb**q) * math.log(u) / big_m
    else:
        integral = 2.0 * (cb**q) * (u ** (1.0 - a) - 1.0) / (big_m * (1.0 - a))
    ratio = (integral * big_m / 2.0) ** (1.0 / q)
    thr = Fraction(r, r - 1)
    return DependentFormsBound(
        ratio=ratio, integral=integral, threshold=thr, grows=p < float(thr)
    )
