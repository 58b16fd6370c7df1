"""Tests for minimal ranks: formula route, oracle route, attainment,
membership predicates."""

import random
from fractions import Fraction as F

import pytest

from pencilranks import blocks
from pencilranks.exact import MatrixQ, rank_exact
from pencilranks.kcf import Pencil, direct_sum, kronecker_structure
from pencilranks.minranks import (
    Gl2Transform,
    MinimalRanks,
    attain_transform,
    drop_points,
    in_b_rs,
    in_c,
    minimal_ranks,
    minimal_ranks_oracle,
    minimal_ranks_regular,
    minimal_ranks_singular_part,
    regular_counts,
)
from pencilranks.sampling import random_gl2, random_pencil, random_unimodular


def _h_double_prime(a, b):
    # J_2(a) (+) (b): two distinct eigenvalues
    return direct_sum([blocks.jordan_pencil(2, a), blocks.scalar_pencil(b)])


# ---------------------------------------------------------------------------
# worked examples
# ---------------------------------------------------------------------------


def test_worked_example_h():
    assert minimal_ranks(blocks.jordan_pencil(3, 1)) == MinimalRanks(3, 2)


def test_worked_example_h_prime():
    P = direct_sum([blocks.jordan_pencil(2, 1), blocks.scalar_pencil(1)])
    assert minimal_ranks(P) == MinimalRanks(3, 1)


def test_worked_example_h_double_prime():
    assert minimal_ranks(_h_double_prime(1, 2)) == MinimalRanks(2, 2)


def test_worked_example_q():
    Q = blocks.q_pencil(1, 2, 3)
    assert minimal_ranks(Q, "real") == MinimalRanks(2, 2)
    assert minimal_ranks(Q, "complex") == MinimalRanks(1, 1)


def test_worked_example_proportional():
    for n in (1, 2, 3, 4):
        E = Pencil(MatrixQ.identity(n), MatrixQ.identity(n))
        assert minimal_ranks(E) == MinimalRanks(n, 0)


# ---------------------------------------------------------------------------
# regular / singular formulas
# ---------------------------------------------------------------------------


def test_regular_counts():
    P = direct_sum([blocks.jordan_pencil(2, 1), blocks.jordan_pencil(1, 1),
                    blocks.jordan_pencil(1, 2), blocks.infinite_pencil(2)])
    rc = regular_counts(kronecker_structure(P))
    assert rc.j == 1 and rc.k_s == 2 and rc.k_r == 1


def test_regular_rejects_singular():
    with pytest.raises(ValueError):
        minimal_ranks_regular(kronecker_structure(blocks.l_block(1)))


def test_singular_part_sums():
    assert minimal_ranks_singular_part(kronecker_structure(blocks.l_block(2))) == 2
    P = direct_sum([blocks.l_block(1), blocks.r_block(1)])
    assert minimal_ranks_singular_part(kronecker_structure(P)) == 2
    assert minimal_ranks(P) == MinimalRanks(2, 2)
    Z = Pencil.zero(2, 3)
    assert minimal_ranks_singular_part(kronecker_structure(Z)) == 0
    assert minimal_ranks(Z) == MinimalRanks(0, 0)


def test_infinite_divisors_count_as_one_eigenvalue():
    # two N blocks: j = 2 is the largest count
    P = direct_sum([blocks.infinite_pencil(1), blocks.infinite_pencil(2),
                    blocks.jordan_pencil(1, 0)])
    assert minimal_ranks(P) == MinimalRanks(3, 2)


def test_table_s33_combination():
    # L_1 (+) (Q_2(a,b) + lam E_2): rho = (3, 3)
    P = direct_sum([blocks.l_block(1), blocks.q_pencil(1, 1, 2)])
    assert minimal_ranks(P) == MinimalRanks(3, 3)


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------


def test_oracle_two_noncollinear_minimizers():
    A = MatrixQ.identity(4)
    B = MatrixQ.block_diag([MatrixQ.identity(2) * 2, MatrixQ.identity(2) * 5])
    P = Pencil(A, B)
    R, points = drop_points(P)
    assert R == 4
    mins = [p for p in points if p.rank == 2]
    assert sum(p.real_points for p in mins) == 2
    assert minimal_ranks_oracle(P) == MinimalRanks(2, 2)
    assert minimal_ranks(P) == MinimalRanks(2, 2)


def test_oracle_matches_formula_random():
    rng = random.Random(101)
    for _ in range(40):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        P = random_pencil(rng, m, n)
        for field in ("real", "complex"):
            assert minimal_ranks(P, field) == minimal_ranks_oracle(P, field)


def test_oracle_irrational_drop():
    # companion-style pencil with eigenvalues at the two roots of x^2 - 2
    A = MatrixQ([[0, 2], [1, 0]])
    P = Pencil(A, MatrixQ.identity(2))
    assert minimal_ranks_oracle(P) == minimal_ranks(P) == MinimalRanks(1, 1)


# ---------------------------------------------------------------------------
# invariance properties
# ---------------------------------------------------------------------------


def test_rho_orbit_invariance():
    rng = random.Random(55)
    for _ in range(10):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        P = random_pencil(rng, m, n)
        rho = minimal_ranks(P)
        L = random_unimodular(rng, m)
        U = random_unimodular(rng, n)
        T = random_gl2(rng)
        P2 = P.left_right(L, U).apply_gl2(*T)
        assert minimal_ranks(P2) == rho


def test_complex_leq_real():
    rng = random.Random(77)
    for _ in range(15):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        P = random_pencil(rng, m, n)
        rr = minimal_ranks(P, "real")
        rc = minimal_ranks(P, "complex")
        assert rc.r <= rr.r and rc.s <= rr.s


def test_s_zero_iff_proportional():
    rng = random.Random(88)
    for _ in range(15):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        P = random_pencil(rng, m, n)
        rho = minimal_ranks(P)
        # s = 0 <=> A and B are proportional (some nontrivial t A + u B = 0)
        prop = rank_exact(MatrixQ([[x for row in P.A.entries for x in row],
                                   [x for row in P.B.entries for x in row]])) <= 1
        assert (rho.s == 0) == prop


# ---------------------------------------------------------------------------
# attainment
# ---------------------------------------------------------------------------


def _check_attained(P, field="real"):
    T, rho = attain_transform(P, field)
    if T.is_rational:
        A2 = P.A * T.t11 + P.B * T.t12
        B2 = P.A * T.t21 + P.B * T.t22
        assert rank_exact(A2) == rho.r
        assert rank_exact(B2) == rho.s
        assert T.t11 * T.t22 - T.t12 * T.t21 != 0
    return T, rho


def test_attain_swap_jordan():
    T, rho = _check_attained(blocks.jordan_pencil(2, 0))
    assert rho == MinimalRanks(2, 1)


def test_attain_h_double_prime():
    T, rho = _check_attained(_h_double_prime(1, 2))
    assert rho == MinimalRanks(2, 2)


def test_attain_l2_identity_like():
    T, rho = _check_attained(blocks.l_block(2))
    assert rho == MinimalRanks(2, 2)


def test_attain_random():
    rng = random.Random(5)
    for _ in range(20):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        P = random_pencil(rng, m, n)
        _check_attained(P)


def test_attain_irrational_float_rendering():
    A = MatrixQ([[0, 2], [1, 0]])
    P = Pencil(A, MatrixQ.identity(2))
    T, rho = attain_transform(P)
    assert not T.is_rational
    rows = T.row_floats()
    # both rows evaluate (1, +-sqrt2); the transformed floats attain the ranks
    import numpy as np

    for (t1, t2), expected in zip(rows, (rho.r, rho.s)):
        M = float(t1) * P.A.to_float() + float(t2) * P.B.to_float()
        assert np.linalg.matrix_rank(M, tol=1e-8) == expected


# ---------------------------------------------------------------------------
# membership predicates
# ---------------------------------------------------------------------------


def test_in_b_rs_proportional_identity():
    E = Pencil(MatrixQ.identity(3), MatrixQ.identity(3))
    assert in_b_rs(E, 3, 3)
    assert in_b_rs(E, 3, 0)


def test_in_b_rs_regular_constraint():
    # a regular 2x2 pencil needs r + s >= 2
    P = blocks.jordan_pencil(2, 0)
    assert not in_b_rs(P, 1, 1)
    assert in_b_rs(P, 2, 1)


def test_in_b_rs_own_rho():
    rng = random.Random(6)
    for _ in range(10):
        P = random_pencil(rng, rng.randint(1, 4), rng.randint(1, 4))
        rho = minimal_ranks(P)
        assert in_b_rs(P, rho.r, rho.s)


def test_in_b_rs_hierarchy():
    rng = random.Random(61)
    for _ in range(10):
        P = random_pencil(rng, rng.randint(1, 4), rng.randint(1, 4))
        mn = min(P.m, P.n)
        for r in range(mn + 1):
            for s in range(r + 1):
                if in_b_rs(P, r, s):
                    assert in_b_rs(P, min(r + 1, mn + 1), s)
                    if s + 1 <= r:
                        assert in_b_rs(P, r, s + 1)


def test_in_c():
    assert in_c(blocks.q_pencil(1, 0, 1))
    assert not in_c(blocks.jordan_pencil(4, 1))
    assert in_c(direct_sum([blocks.q_pencil(1, 1, 2), blocks.q_pencil(1, 3, 4)]))
    assert not in_c(blocks.jordan_pencil(3, 0))  # odd dimension
    assert not in_c(blocks.l_block(2))  # non-square


def test_minimal_ranks_invariants():
    rng = random.Random(9)
    for _ in range(15):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        P = random_pencil(rng, m, n)
        rho = minimal_ranks(P)
        assert rho.s <= rho.r <= min(m, n)
