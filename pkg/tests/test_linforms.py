"""Linear-forms dependence structure against a rational elimination oracle."""

import itertools
import random
from fractions import Fraction as F

import pytest

from divlab.linforms import (
    classify,
    dependence_vector,
    exact_rank,
    extended_matrix,
    minimal_dependent_rows,
    solve_in_span,
)


# --- oracle: plain Fraction Gaussian elimination -----------------------------


def oracle_rank(matrix):
    a = [[F(v) for v in row] for row in matrix]
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            f = a[i][c] / a[r][c]
            for j in range(c, cols):
                a[i][j] -= f * a[r][j]
        r += 1
    return r


def rnd_matrix(rnd, max_rows=6, max_cols=5, span=5):
    n = rnd.randint(1, max_rows)
    m = rnd.randint(1, max_cols)
    return [[rnd.randint(-span, span) for _ in range(m)] for _ in range(n)]


# --- rank and witnesses -------------------------------------------------------


def test_exact_rank_matches_oracle():
    rnd = random.Random(1729)
    for _ in range(150):
        mat = rnd_matrix(rnd)
        assert exact_rank(mat) == oracle_rank(mat)


def test_extended_matrix_shape():
    ext = extended_matrix([[1, 2], [3, 4]])
    assert ext == [[1, 2, 1], [3, 4, 1], [0, 0, 1]]
    with pytest.raises(ValueError):
        extended_matrix([])
    with pytest.raises(ValueError):
        extended_matrix([[1], [1, 2]])


def test_dependence_vector_annihilates():
    rnd = random.Random(31)
    hits = 0
    while hits < 60:
        vecs = [
            [rnd.randint(-3, 3) for _ in range(rnd.randint(1, 3))]
            for _ in range(rnd.randint(2, 5))
        ]
        dims = {len(v) for v in vecs}
        if len(dims) != 1:
            continue
        lam = dependence_vector(vecs)
        if lam is None:
            assert oracle_rank(vecs) == len(vecs)
            continue
        hits += 1
        dim = dims.pop()
        combo = [sum(l * v[d] for l, v in zip(lam, vecs)) for d in range(dim)]
        assert all(c == 0 for c in combo)
        # primitive integers, first nonzero positive
        from math import gcd
        g = 0
        for v in lam:
            g = gcd(g, v)
        assert g == 1
        assert next(v for v in lam if v != 0) > 0


def test_solve_in_span():
    basis = [[1, 0, 1], [0, 1, 1]]
    alpha = solve_in_span(basis, [2, 3, 5])
    assert alpha == [F(2), F(3)]
    assert solve_in_span(basis, [0, 0, 1]) is None


# --- circuit search -----------------------------------------------------------


def test_minimal_dependent_rows_is_minimal_and_lex_first():
    rnd = random.Random(97)
    for _ in range(100):
        mat = rnd_matrix(rnd, max_rows=6, max_cols=3, span=3)
        dep = minimal_dependent_rows(mat)
        aug = [row + [1] for row in mat]
        sizes = {}
        for size in range(2, len(aug) + 1):
            for combo in itertools.combinations(range(len(aug)), size):
                if oracle_rank([aug[i] for i in combo]) < size:
                    sizes.setdefault(size, combo)
            if size in sizes:
                break
        if dep is None:
            assert not sizes
            continue
        assert dep.size == min(sizes)
        assert dep.indices == sizes[dep.size]  # lexicographically first
        combo = [
            sum(l * v for l, v in zip(dep.dependence, col))
            for col in zip(*(aug[i] for i in dep.indices))
        ]
        assert all(c == 0 for c in combo)


def test_size_cap():
    with pytest.raises(ValueError):
        minimal_dependent_rows([[1]] * 21)


# --- classification -----------------------------------------------------------


def test_classify_fixtures():
    c = classify([[1], [2], [3]])
    assert c.scenario == "nondegenerate"
    assert c.circuit.size == 3
    assert c.circuit.dependence == (1, -2, 1)
    assert c.t_part_rank == 1
    assert c.exponent_bound is None

    c = classify([[2, 0], [0, 2], [1, 1]])
    assert c.scenario == "degenerate"
    assert c.circuit.size == 3
    assert c.circuit.dependence == (1, 1, -2)
    assert c.t_part_rank == 2
    assert c.exponent_bound == F(3, 2)

    assert classify([[1], [2]]).scenario == "independent"
    assert classify([[1, 0], [0, 1], [1, 1]]).scenario == "independent"


def test_classify_cube_rows_m3():
    rows = sorted(itertools.product((0, 1), repeat=3))[1:]  # nonzero 0/1 vectors
    c = classify(rows)
    assert c.scenario == "degenerate"
    assert c.circuit.size == 4
    assert c.circuit.indices == (0, 1, 4, 5)
    assert c.circuit.dependence == (1, -1, -1, 1)
    assert c.t_part_rank == 3
    assert c.exponent_bound == F(4, 3)
    assert c.basis_indices == (0, 1, 4)
    # row 5 = -row0 + row1 + row4 exactly
    assert c.expansions == {5: [F(-1), F(1), F(1)]}


def test_classify_expansions_reproduce_rows():
    rnd = random.Random(555)
    for _ in range(100):
        mat = rnd_matrix(rnd, max_rows=6, max_cols=3, span=3)
        c = classify(mat)
        assert c.rank_matrix == oracle_rank(mat)
        assert c.rank_extended == oracle_rank(extended_matrix(mat))
        if c.circuit is None:
            assert c.scenario == "independent"
            continue
        assert c.t_part_rank in (c.circuit.size - 2, c.circuit.size - 1)
        assert c.scenario == (
            "nondegenerate" if c.t_part_rank == c.circuit.size - 2 else "degenerate"
        )
        for i, coeffs in c.expansions.items():
            recon = [
                sum(a * mat[j][d] for a, j in zip(coeffs, c.basis_indices))
                for d in range(len(mat[0]))
            ]
            assert recon == [F(v) for v in mat[i]]


def test_classify_json():
    data = classify([[2, 0], [0, 2], [1, 1]]).to_json()
    assert data["scenario"] == "degenerate"
    assert data["exponent_bound"] == "3/2"
    assert data["dependence"] == [1, 1, -2]
    assert data["rank_extended"] == 3
    indep = classify([[1], [2]]).to_json()
    assert "r" not in indep and "exponent_bound" not in indep
