"""Counterexample scenario constructions, exact measures, thresholds, blow-up series.

Two families:

* the triple-average scenario in radix 12: three factor sets hit by the forms
  x+t, x+2t, x+3t, plus a witness set on which the average is provably at
  least the level 1/(8*12^k);

* the cube-average scenario in radix 2^(m+1): one form set per nonzero
  epsilon in {0,1}^m, a base-point lattice and a witness set of measure
  1/(m+1), all derived from m two-digit generator sets and one shared
  rational-digit set via the constraint algebra
  A_eps = sum_{j in Z(eps)} G_j - (|Z(eps)|-1) * S   (Z = zero positions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Dict, Mapping, Tuple

from .digitsets import DigitSetSpec, cardinality, combine, digit_spec, materialize
from .intervals import IntervalUnion, rat, rat_str, real

RATIO_TOL = 1e-12  # band around 1 separating diverges / boundary / decays


# ---------------------------------------------------------------------------
# triple-average scenario (radix 12)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FurstenbergScenario:
    """Radix-12 construction at a given depth k.

    factor_specs[i] is the set hit by the form x + coefficients[i]*t; the
    average over t of the indicator product is >= level on the witness set.
    """

    depth: int
    coefficients: Tuple[int, int, int]
    factor_specs: Tuple[DigitSetSpec, DigitSetSpec, DigitSetSpec]
    witness_spec: DigitSetSpec
    level: Fraction

    @cached_property
    def factors(self) -> Tuple[IntervalUnion, ...]:
        return tuple(materialize(s) for s in self.factor_specs)

    @cached_property
    def witness(self) -> IntervalUnion:
        return materialize(self.witness_spec)

    def measures(self, normalized: bool = False) -> Dict[str, Fraction]:
        """Exact Lebesgue measures; normalized=True halves them (mass-1 measure
        on the ambient interval of length 2)."""
        half = Fraction(1, 2) if normalized else Fraction(1)
        out = {
            f"factor_{i + 1}": u.measure() * half for i, u in enumerate(self.factors)
        }
        out["witness"] = self.witness.measure() * half
        return out

    def to_json(self):
        return {
            "kind": "furstenberg",
            "k": self.depth,
            "coefficients": list(self.coefficients),
            "lambda": rat_str(self.level),
            "sets": {
                "factor_1": self.factor_specs[0].to_json(),
                "factor_2": self.factor_specs[1].to_json(),
                "factor_3": self.factor_specs[2].to_json(),
                "witness": self.witness_spec.to_json(),
            },
            "measures": {k: rat_str(v) for k, v in self.measures().items()},
            "measures_normalized": {
                k: rat_str(v) for k, v in self.measures(normalized=True).items()
            },
        }

    @staticmethod
    def from_json(data) -> "FurstenbergScenario":
        sets = data["sets"]
        return FurstenbergScenario(
            depth=int(data["k"]),
            coefficients=tuple(int(c) for c in data["coefficients"]),
            factor_specs=tuple(
                DigitSetSpec.from_json(sets[f"factor_{i}"]) for i in (1, 2, 3)
            ),
            witness_spec=DigitSetSpec.from_json(sets["witness"]),
            level=rat(data["lambda"]),
        )


def furstenberg_family(k: int) -> FurstenbergScenario:
    """The radix-12 scenario at depth k >= 1.

    Factor alphabets: {-4,-2,0}, then its digitwise combinations
    2*{0..3} - {-4,-2,0} = {0,2,...,10} and 2*{-4,-2,0} - {0..3} = {-11..0}
    for the witness; factor tails 1/(2*12^k), witness tail 1/(8*12^k).
    """
    if k < 1:
        raise ValueError("depth must be >= 1")
    tail = Fraction(1, 2 * 12**k)
    wtail = Fraction(1, 8 * 12**k)
    first = digit_spec(12, k, [-4, -2, 0], tail)
    second = digit_spec(12, k, [0, 1, 2, 3], tail)
    third = combine([(2, second), (-1, first)], tail)
    witness = combine([(2, first), (-1, second)], wtail)
    return FurstenbergScenario(
        depth=k,
        coefficients=(1, 2, 3),
        factor_specs=(first, second, third),
        witness_spec=witness,
        level=wtail,
    )


# ---------------------------------------------------------------------------
# cube-average scenario (radix 2^(m+1))
# ---------------------------------------------------------------------------


def _eps_vectors(m: int):
    out = []
    for mask in range(1, 2**m):
        out.append(tuple((mask >> (m - 1 - j)) & 1 for j in range(m)))
    return sorted(out)


def _eps_key(eps) -> str:
    return "".join(str(int(e)) for e in eps)


@dataclass(frozen=True)
class CubeScenario:
    """Radix-2^(m+1) construction at dimension m >= 3 and depth k >= 1.

    generator_specs[j] (j = 0..m-1) are the two-digit sets {0, 2^j}; the
    shared spec carries the rational digit -2^m/(m-1).  form_specs maps each
    nonzero epsilon to the set hit by the form x + eps.t; the witness has
    exact measure 1/(m+1).
    """

    dimension: int
    depth: int
    generator_specs: Tuple[DigitSetSpec, ...]
    shared_spec: DigitSetSpec
    form_specs: Mapping[Tuple[int, ...], DigitSetSpec]
    base_spec: DigitSetSpec  # witness base-point lattice, tail 0
    witness_spec: DigitSetSpec

    @cached_property
    def witness(self) -> IntervalUnion:
        return materialize(self.witness_spec)

    @cached_property
    def form_sets(self) -> Dict[Tuple[int, ...], IntervalUnion]:
        return {eps: materialize(s) for eps, s in self.form_specs.items()}

    @property
    def form_tail(self) -> Fraction:
        return Fraction(1, (2 ** (self.dimension + 1)) ** self.depth)

    @property
    def witness_tail(self) -> Fraction:
        return self.witness_spec.tail

    def cardinalities(self) -> Dict[Tuple[int, ...], int]:
        return {eps: cardinality(s) for eps, s in self.form_specs.items()}

    def cardinality_bound(self, eps) -> int:
        """2^((m-l+1)k) for weight l <= m-2; the exact 2^k otherwise."""
        l = sum(eps)
        m, k = self.dimension, self.depth
        if l <= m - 2:
            return 2 ** ((m - l + 1) * k)
        return 2**k

    def to_json(self):
        sets = {f"form_{_eps_key(e)}": s.to_json() for e, s in sorted(self.form_specs.items())}
        sets["base_lattice"] = self.base_spec.to_json()
        sets["witness"] = self.witness_spec.to_json()
        return {
            "kind": "cubes",
            "k": self.depth,
            "m": self.dimension,
            "sets": sets,
            "measures": {"witness": rat_str(self.witness.measure())},
            "cardinalities": {
                _eps_key(e): c for e, c in sorted(self.cardinalities().items())
            },
        }

    @staticmethod
    def from_json(data) -> "CubeScenario":
        m, k = int(data["m"]), int(data["k"])
        sets = data["sets"]
        form_specs = {}
        for eps in _eps_vectors(m):
            form_specs[eps] = DigitSetSpec.from_json(sets[f"form_{_eps_key(eps)}"])
        gens = tuple(
            form_specs[tuple(0 if i == j else 1 for i in range(m))].with_tail(0)
            for j in range(m)
        )
        shared = form_specs[(1,) * m].with_tail(0)
        return CubeScenario(
            dimension=m,
            depth=k,
            generator_specs=gens,
            shared_spec=shared,
            form_specs=form_specs,
            base_spec=DigitSetSpec.from_json(sets["base_lattice"]),
            witness_spec=DigitSetSpec.from_json(sets["witness"]),
        )


def cube_family(m: int, k: int) -> CubeScenario:
    if m < 3:
        raise ValueError("dimension must be >= 3 (m = 2 has no dependent forms)")
    if k < 1:
        raise ValueError("depth must be >= 1")
    rho = 2 ** (m + 1)
    form_tail = Fraction(1, rho**k)
    witness_tail = Fraction(1, (m + 1) * rho**k)
    gens = tuple(digit_spec(rho, k, [0, 2**j], 0) for j in range(m))
    shared = digit_spec(rho, k, [0, Fraction(-(2**m), m - 1)], 0)
    form_specs = {}
    for eps in _eps_vectors(m):
        zero = [j for j in range(m) if eps[j] == 0]
        terms = [(1, gens[j]) for j in zero]
        c = -(len(zero) - 1)
        if c != 0:
            terms.append((c, shared))
        form_specs[eps] = combine(terms, form_tail)
    base = combine([(1, g) for g in gens] + [(-(m - 1), shared)], 0)
    return CubeScenario(
        dimension=m,
        depth=k,
        generator_specs=gens,
        shared_spec=shared,
        form_specs=form_specs,
        base_spec=base,
        witness_spec=base.with_tail(witness_tail),
    )


# ---------------------------------------------------------------------------
# divergence thresholds
# ---------------------------------------------------------------------------


def furstenberg_threshold() -> float:
    """ln 24 / ln 12 = 1 + log_6(2) / (1 + log_6(2)) ~= 1.2789."""
    return math.log(24) / math.log(12)


def furstenberg_threshold_log_form() -> float:
    """The 1 + log_6(2)/(1 + log_6(2)) form, for the identity check."""
    l = math.log(2) / math.log(6)
    return 1 + l / (1 + l)


def cube_threshold(m: int) -> Fraction:
    if m < 3:
        raise ValueError("dimension must be >= 3")
    return Fraction(2 ** (m - 1) + 1, m + 1)


def cube_threshold_sum_form(m: int) -> Fraction:
    """1 + sum_{l=1}^{m-2} l*C(m,l) / (m(m+1)), exactly equal to cube_threshold(m)."""
    if m < 3:
        raise ValueError("dimension must be >= 3")
    s = sum(l * comb(m, l) for l in range(1, m - 1))
    return 1 + Fraction(s, m * (m + 1))


def degenerate_threshold(r: int) -> Fraction:
    if r < 2:
        raise ValueError("need r >= 2 monomials")
    return Fraction(r, r - 1)


# ---------------------------------------------------------------------------
# blow-up series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlowupSeries:
    """A forced-constant series value_k with its per-step ratios and verdict."""

    kind: str
    p: float
    weighted: bool
    mode: str
    indices: Tuple[int, ...]
    values: Tuple[float, ...]
    step_ratios: Tuple[float, ...]
    closed_form_ratio: float
    threshold: float
    verdict: str

    def to_json(self):
        return {
            "kind": self.kind,
            "p": real(self.p),
            "weighted": self.weighted,
            "mode": self.mode,
            "indices": list(self.indices),
            "values": [real(v) for v in self.values],
            "step_ratios": [real(r) for r in self.step_ratios],
            "closed_form_ratio": real(self.closed_form_ratio),
            "threshold": real(self.threshold),
            "verdict": self.verdict,
        }


def _verdict(ratio: float) -> str:
    if ratio > 1 + RATIO_TOL:
        return "diverges"
    if ratio < 1 - RATIO_TOL:
        return "decays"
    return "boundary"


def blowup_series(
    kind: str,
    p: float,
    kmax: int,
    m: int | None = None,
    weighted: bool = False,
    mode: str = "exact",
) -> BlowupSeries:
    """Blow-up series for one of the scenarios.

    kind 'thm1':  value_k = ((4*4^k)(4*3^k)(4*2^k))^(1/p) / (32*12^k),
                  optionally weighted by k^-6; step ratio 24^(1/p)/12.
    kind 'h3':    value_k = 8^(-1/p) * 24^(k/p) / (8*12^k); same step ratio.
    kind 'cubes': value_k = [(m+1)*2^(k(m+1))]^(-m)
                  * prod_eps (2^(k(m+1)) / #A_eps)^(1/p), with exact per-eps
                  cardinalities in mode 'exact' and the 2^((m-l+1)k) bounds
                  (exact 2^k at weights m-1, m) in mode 'bound'.

    Values are computed in log space to avoid overflow; per-step ratios are
    value_{k+1}/value_k of the reported values.
    """
    if p <= 0:
        raise ValueError("p must be positive")
    if kmax < 2:
        raise ValueError("need kmax >= 2 for at least one step ratio")
    ks = tuple(range(1, kmax + 1))
    ln2 = math.log(2)

    if kind == "thm1" or kind == "h3":
        mode = ""
        base = math.log(24) / p - math.log(12)
        if kind == "thm1":
            logs = [
                (math.log(4 * 4**k) + math.log(4 * 3**k) + math.log(4 * 2**k)) / p
                - math.log(32) - k * math.log(12)
                for k in ks
            ]
            if weighted:
                logs = [lv - 6 * math.log(k) for lv, k in zip(logs, ks)]
        else:
            if weighted:
                raise ValueError("weighted variant applies to kind 'thm1' only")
            logs = [-math.log(8) / p - math.log(8) + k * base for k in ks]
        threshold = furstenberg_threshold()
        closed = math.exp(base)
    elif kind == "cubes":
        if m is None:
            raise ValueError("kind 'cubes' requires m")
        if weighted:
            raise ValueError("weighted variant applies to kind 'thm1' only")
        if mode not in ("exact", "bound"):
            raise ValueError("mode must be 'exact' or 'bound'")
        scen1 = cube_family(m, 1)
        cards1 = scen1.cardinalities()
        logs = []
        # sum over eps of log(2^(m+1) / count_at_depth_1); counts scale as c^k
        if mode == "exact":
            log_prod1 = sum(
                (m + 1) * ln2 - math.log(c) for c in cards1.values()
            )
        else:
            log_prod1 = 0.0
            for eps in cards1:
                l = sum(eps)
                bexp = (m - l + 1) if l <= m - 2 else 1
                log_prod1 += ((m + 1) - bexp) * ln2
        for k in ks:
            logs.append(-m * (math.log(m + 1) + k * (m + 1) * ln2) + k * log_prod1 / p)
        closed = math.exp(-m * (m + 1) * ln2 + log_prod1 / p)
        if mode == "bound":
            threshold = float(cube_threshold(m))
        else:
            # the p solving closed-form ratio == 1 with exact cardinalities
            threshold = log_prod1 / (m * (m + 1) * ln2)
    else:
        raise ValueError(f"unknown series kind {kind!r}")

    values = tuple(math.exp(lv) for lv in logs)
    ratios = tuple(v1 / v0 for v0, v1 in zip(values, values[1:]))
    return BlowupSeries(
        kind=kind,
        p=float(p),
        weighted=weighted,
        mode=mode,
        indices=ks,
        values=values,
        step_ratios=ratios,
        closed_form_ratio=closed,
        threshold=threshold,
        verdict=_verdict(closed),
    )
