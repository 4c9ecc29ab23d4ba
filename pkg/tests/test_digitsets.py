"""Digit-expansion sets against direct Fraction enumeration oracles."""

import itertools
import random
from fractions import Fraction as F

import pytest

from divlab.digitsets import (
    DigitSetSpec,
    NoCarryError,
    base_points,
    cardinality,
    combine,
    digit_spec,
    is_collision_free,
    materialize,
)
from divlab.intervals import EMPTY, normalize


# --- oracles -----------------------------------------------------------------


def brute_points(spec):
    """Base points recomputed directly as Fraction sums, no Horner, no ints."""
    pts = set()
    for digits in itertools.product(spec.alphabet, repeat=spec.depth):
        pts.add(sum((d * F(1, spec.radix**i) for i, d in enumerate(digits, 1)), F(0)))
    return sorted(pts)


def brute_union(spec):
    return normalize((p, p + spec.tail) for p in brute_points(spec))


def rnd_spec(rnd, tail_den=None):
    radix = rnd.randint(2, 12)
    depth = rnd.randint(1, 3)
    size = rnd.randint(1, 4)
    alphabet = {
        F(rnd.randint(-(radix - 1), radix - 1), rnd.randint(1, 3)) for _ in range(size)
    }
    tail = F(1, tail_den or rnd.randint(1, 4) * radix**depth)
    return digit_spec(radix, depth, sorted(alphabet), tail)


# --- spec validation ---------------------------------------------------------


def test_spec_validation():
    with pytest.raises(ValueError):
        digit_spec(1, 1, [0], 0)
    with pytest.raises(ValueError):
        digit_spec(2, 0, [0], 0)
    with pytest.raises(ValueError):
        digit_spec(2, 1, [], 0)
    with pytest.raises(ValueError):
        digit_spec(2, 1, [0], F(-1))
    s = digit_spec(10, 1, [3, 1, 3, F(2, 2)], F(1, 10))
    assert s.alphabet == (F(1), F(3))  # sorted, deduplicated
    assert s.with_tail(0).tail == 0


def test_json_round_trip():
    rnd = random.Random(12)
    for _ in range(50):
        s = rnd_spec(rnd)
        assert DigitSetSpec.from_json(s.to_json()) == s


# --- enumeration -------------------------------------------------------------


def test_base_points_match_brute():
    rnd = random.Random(321)
    for _ in range(150):
        s = rnd_spec(rnd)
        assert base_points(s) == brute_points(s)


def test_materialize_matches_brute_union():
    rnd = random.Random(654)
    for _ in range(150):
        s = rnd_spec(rnd)
        assert materialize(s) == brute_union(s)


def test_materialize_zero_tail():
    s = digit_spec(12, 1, [0, 1], 0)
    assert materialize(s) == EMPTY


def test_materialize_merges_touching_tails():
    # tail equal to the point gap glues everything into one interval
    s = digit_spec(10, 1, [0, 1, 2], F(1, 10))
    assert materialize(s).pairs() == [(F(0), F(3, 10))]


def test_cardinality_and_collision_freeness():
    rnd = random.Random(987)
    for _ in range(150):
        s = rnd_spec(rnd)
        brute = brute_points(s)
        assert cardinality(s) == len(brute)
        assert is_collision_free(s) == (len(brute) == len(s.alphabet) ** s.depth)


def test_collision_example():
    # radix 2 with alphabet {0, 1/2, 1}: 1/2 at position i collides with
    # 1 at position i+1, so distinct strings can share a value
    s = digit_spec(2, 2, [0, F(1, 2), 1], F(1, 100))
    assert not is_collision_free(s)
    assert cardinality(s) < 9
    # integer alphabets below the radix always pass the gap criterion
    t = digit_spec(12, 3, [-4, -2, 0], F(1, 100))
    assert is_collision_free(t)
    assert cardinality(t) == 27


# --- digitwise combinations --------------------------------------------------


def test_combine_is_pointwise_combination():
    rnd = random.Random(246)
    done = 0
    while done < 100:
        radix = rnd.randint(6, 12)
        depth = rnd.randint(1, 2)
        nterms = rnd.randint(1, 3)
        terms = []
        for _ in range(nterms):
            size = rnd.randint(1, 3)
            alphabet = sorted({F(rnd.randint(-2, 2)) for _ in range(size)})
            terms.append(
                (rnd.choice([-2, -1, 1, 2]), digit_spec(radix, depth, alphabet, 0))
            )
        try:
            out = combine(terms, F(1, radix**depth))
        except NoCarryError:
            continue
        done += 1
        expected = sorted(
            {
                sum((c * x for (c, _), x in zip(terms, pts)), F(0))
                for pts in itertools.product(*(brute_points(s) for _, s in terms))
            }
        )
        assert base_points(out) == expected


def test_combine_no_carry_violation():
    a = digit_spec(4, 1, [0, 3], 0)
    with pytest.raises(NoCarryError) as exc:
        combine([(1, a), (1, a)])
    assert "magnitude >= radix" in str(exc.value)
    # scalar blow-up alone can violate it too
    with pytest.raises(NoCarryError):
        combine([(2, digit_spec(4, 1, [0, 2], 0))])


def test_combine_shape_validation():
    a = digit_spec(4, 1, [0, 1], 0)
    b = digit_spec(5, 1, [0, 1], 0)
    c = digit_spec(4, 2, [0, 1], 0)
    with pytest.raises(ValueError):
        combine([(1, a), (1, b)])
    with pytest.raises(ValueError):
        combine([(1, a), (1, c)])
    with pytest.raises(ValueError):
        combine([])
