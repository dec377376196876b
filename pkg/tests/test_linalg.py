import random
from fractions import Fraction

import pytest

from plectic.coeff import ScalarExpr, parse_expr
from plectic.linalg import (
    DimensionMismatchError,
    SingularMatrixError,
    invert,
    kernel_basis,
    matmul,
    rank,
    subspace_contained,
)

F = Fraction


def _e(i, n):
    return [F(int(j == i)) for j in range(n)]


def test_kernel_of_identity_is_trivial():
    m = [_e(i, 3) for i in range(3)]
    assert kernel_basis(m) == []


def test_kernel_of_zero_map_is_everything():
    m = [[F(0)] * 3 for _ in range(2)]
    basis = kernel_basis(m)
    assert len(basis) == 3
    assert rank(basis) == 3


def test_kernel_of_scalar_field_contraction(manifold4):
    # contraction matrix of the degenerate 3-form at rho_x = 1
    from plectic.splitting import contraction_matrix

    rows, _ = contraction_matrix(manifold4.omega, [0, 0, 0, 1, 0])
    assert len(rows) == 10 and len(rows[0]) == 5
    basis = kernel_basis(rows)
    assert len(basis) == 2
    expected = [
        [F(1), F(0), F(1), F(0), F(0)],  # e_x + rho_x e_u at rho_x = 1
        [F(0), F(0), F(0), F(0), F(1)],  # e_rho_t
    ]
    assert subspace_contained(basis, expected)
    assert subspace_contained(expected, basis)


def test_subspace_containment_trivial_cases():
    e1, e2, e3 = _e(0, 3), _e(1, 3), _e(2, 3)
    assert subspace_contained([e1], [e1, e2])
    assert not subspace_contained([e3], [e1, e2])


def test_subspace_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        subspace_contained([[F(1)]], [[F(1), F(0)]])


def test_invert_identity():
    variables = ("x",)
    one, zero = ScalarExpr.one(variables), ScalarExpr.zero(variables)
    m = [[one, zero], [zero, one]]
    assert invert(m) == m


def test_invert_unipotent_and_multiply_back():
    variables = ("x",)
    m = [
        [parse_expr("1", variables), parse_expr("x", variables)],
        [parse_expr("0", variables), parse_expr("1", variables)],
    ]
    inv = invert(m)
    assert inv[0][1] == parse_expr("0-x", variables)
    identity = [
        [ScalarExpr.one(variables), ScalarExpr.zero(variables)],
        [ScalarExpr.zero(variables), ScalarExpr.one(variables)],
    ]
    assert matmul(m, inv) == identity
    assert matmul(inv, m) == identity


def test_invert_singular_raises():
    variables = ("x",)
    x = parse_expr("x", variables)
    with pytest.raises(SingularMatrixError):
        invert([[x, x], [x, x]])


def test_rank_transpose_invariance():
    rng = random.Random(3)
    for _ in range(40):
        nrows, ncols = rng.randint(1, 5), rng.randint(1, 5)
        m = [[F(rng.randint(-4, 4)) for _ in range(ncols)] for _ in range(nrows)]
        mt = [list(col) for col in zip(*m)]
        assert rank(m) == rank(mt)


def test_kernel_invariants_on_random_matrices():
    rng = random.Random(11)
    for _ in range(40):
        nrows, ncols = rng.randint(1, 5), rng.randint(1, 6)
        m = [
            [F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(ncols)]
            for _ in range(nrows)
        ]
        basis = kernel_basis(m)
        assert len(basis) == ncols - rank(m)
        for v in basis:
            assert all(
                sum(row[j] * v[j] for j in range(ncols)) == 0 for row in m
            )
        if basis:
            assert rank(basis) == len(basis)


def test_rank_invariant_under_permutations():
    rng = random.Random(5)
    for _ in range(30):
        nrows, ncols = rng.randint(2, 5), rng.randint(2, 5)
        m = [[F(rng.randint(-3, 3)) for _ in range(ncols)] for _ in range(nrows)]
        r = rank(m)
        rows = m[:]
        rng.shuffle(rows)
        cols = list(range(ncols))
        rng.shuffle(cols)
        shuffled = [[row[c] for c in cols] for row in rows]
        assert rank(shuffled) == r
