"""Tests for exact Kronecker structure extraction."""

import random
from fractions import Fraction as F

import pytest

from pencilranks import blocks
from pencilranks.exact import MatrixQ, PolyQ
from pencilranks.kcf import (
    EigenvalueDescriptor,
    Pencil,
    direct_sum,
    eigenvalue_key,
    finite_structure,
    infinite_structure,
    invariant_polynomials,
    kronecker_structure,
    minimal_indices,
    normal_rank,
)
from pencilranks.sampling import random_gl2, random_pencil, random_unimodular

X = PolyQ.x()


# ---------------------------------------------------------------------------
# normal rank
# ---------------------------------------------------------------------------


def test_normal_rank_l1():
    assert normal_rank(blocks.l_block(1)) == 1


def test_normal_rank_l1_r1():
    assert normal_rank(direct_sum([blocks.l_block(1), blocks.r_block(1)])) == 2


def test_normal_rank_nonsingular_a():
    rng = random.Random(1)
    for _ in range(10):
        from pencilranks.exact import det_exact

        while True:
            A = MatrixQ([[rng.randint(-4, 4) for _ in range(4)] for _ in range(4)])
            if det_exact(A) != 0:
                break
        B = MatrixQ([[rng.randint(-4, 4) for _ in range(4)] for _ in range(4)])
        assert normal_rank(Pencil(A, B)) == 4


# ---------------------------------------------------------------------------
# finite / infinite structure
# ---------------------------------------------------------------------------


def test_finite_jordan3():
    divs = finite_structure(blocks.jordan_pencil(3, 1))
    assert divs == [(EigenvalueDescriptor.rational(-1), 3)]


def test_finite_split_jordan():
    # a (+) J_2(a): invariant polynomials {1, a+lam, (a+lam)^2}
    P = direct_sum([blocks.scalar_pencil(1), blocks.jordan_pencil(2, 1)])
    assert invariant_polynomials(P) == [PolyQ([1]), X + 1, (X + 1) * (X + 1)]
    divs = finite_structure(P)
    assert sorted(p for _, p in divs) == [1, 2]
    assert all(d == EigenvalueDescriptor.rational(-1) for d, _ in divs)


def test_finite_q_block_fields():
    P = blocks.q_pencil(1, 0, 1)
    real = finite_structure(P, "real")
    assert len(real) == 1
    desc, power = real[0]
    assert desc.kind == "complex_pair" and power == 1
    assert desc.min_poly == X * X + 1
    cplx = finite_structure(P, "complex")
    assert len(cplx) == 2 and all(p == 1 for _, p in cplx)
    assert len({eigenvalue_key(d) for d, _ in cplx}) == 2


def test_finite_zero_pencil():
    assert finite_structure(Pencil.zero(2, 2)) == []


def test_infinite_n2():
    assert infinite_structure(blocks.infinite_pencil(2)) == (2,)


def test_infinite_nonsingular_b():
    assert infinite_structure(blocks.jordan_pencil(3, F(1, 2))) == ()


def test_infinite_padded():
    P = direct_sum([Pencil(MatrixQ([[1]]), MatrixQ([[1]])),
                    blocks.infinite_pencil(2)])
    assert infinite_structure(P) == (2,)


# ---------------------------------------------------------------------------
# minimal indices
# ---------------------------------------------------------------------------


def test_minimal_indices_l2():
    assert minimal_indices(blocks.l_block(2)) == ((2,), ())


def test_minimal_indices_l1_l1():
    P = direct_sum([blocks.l_block(1), blocks.l_block(1)])
    assert minimal_indices(P) == ((1, 1), ())


def test_minimal_indices_zero():
    assert minimal_indices(Pencil.zero(2, 3)) == ((0, 0, 0), (0, 0))


def test_minimal_indices_mixed():
    P = direct_sum([blocks.l_block(0), blocks.l_block(2), blocks.r_block(1)])
    assert minimal_indices(P) == ((0, 2), (1,))


# ---------------------------------------------------------------------------
# assembled structure
# ---------------------------------------------------------------------------


def test_structure_table_s32_shape():
    # L_1 (+) (J_2(0) + lam E_2), a 3 x 4 pencil
    P = direct_sum([blocks.l_block(1), blocks.jordan_pencil(2, 0)])
    ks = kronecker_structure(P)
    assert ks.min_col_indices == (1,)
    assert ks.min_row_indices == ()
    assert ks.finite_divisors == ((EigenvalueDescriptor.rational(0), 2),)
    assert ks.infinite_divisor_degrees == ()


def test_structure_two_eigenvalues_twice():
    # E_4 + lam (a E_2 (+) b E_2): four divisors of power 1, two eigenvalues
    A = MatrixQ.identity(4)
    B = MatrixQ.block_diag([MatrixQ.identity(2) * 2, MatrixQ.identity(2) * 3])
    ks = kronecker_structure(Pencil(A, B))
    assert ks.is_regular
    assert sorted(p for _, p in ks.finite_divisors) == [1, 1, 1, 1]
    keys = [eigenvalue_key(d) for d, _ in ks.finite_divisors]
    assert len(set(keys)) == 2


def test_structure_1x1():
    ks = kronecker_structure(Pencil(MatrixQ([[F(3)]]), MatrixQ([[1]])))
    assert ks.finite_divisors == ((EigenvalueDescriptor.rational(-3), 1),)


def test_budget_identities_random():
    rng = random.Random(42)
    for _ in range(25):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        P = random_pencil(rng, m, n)
        ks = kronecker_structure(P)  # budgets assert-checked internally
        assert ks.normal_rank == sum(ks.min_col_indices) + sum(ks.min_row_indices) \
            + ks.regular_dimension


def test_gl_mn_invariance():
    rng = random.Random(7)
    for _ in range(15):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        P = random_pencil(rng, m, n, disguise=False)
        ks0 = kronecker_structure(P)
        L = random_unimodular(rng, m)
        U = random_unimodular(rng, n)
        ks1 = kronecker_structure(P.left_right(L, U))
        assert ks0 == ks1


def test_gl2_action_preserves_indices_and_powers():
    rng = random.Random(13)
    for _ in range(12):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        P = random_pencil(rng, m, n)
        ks0 = kronecker_structure(P)
        T = random_gl2(rng)
        ks1 = kronecker_structure(P.apply_gl2(*T))
        assert ks0.min_col_indices == ks1.min_col_indices
        assert ks0.min_row_indices == ks1.min_row_indices
        # powers are invariant; eigenvalues move by a Moebius map, and the
        # infinite eigenvalue may trade places with a finite one
        def power_multiset(ks):
            fin = sorted((2 if (d.kind == "complex_pair") else 1, p)
                         for d, p in ks.finite_divisors)
            inf = sorted((1, p) for p in ks.infinite_divisor_degrees)
            return sorted(fin + inf)

        assert power_multiset(ks0) == power_multiset(ks1)


def test_structure_roundtrip_on_canonical_blocks():
    cases = [
        (blocks.jordan_pencil(2, F(5)), ((), (), 1, ())),  # one rational divisor
        (blocks.infinite_pencil(3), ((), (), 0, (3,))),
        (blocks.l_block(3), ((3,), (), 0, ())),
        (blocks.r_block(2), ((), (2,), 0, ())),
    ]
    for P, (cols, rows, n_fin, inf) in cases:
        ks = kronecker_structure(P)
        assert ks.min_col_indices == cols
        assert ks.min_row_indices == rows
        assert len(ks.finite_divisors) == n_fin
        assert ks.infinite_divisor_degrees == inf


def test_real_algebraic_descriptor():
    # companion pencil for lam^2 - 2
    A = MatrixQ([[0, -2], [-1, 0]])
    ks = kronecker_structure(Pencil(A * (-1) * (-1), MatrixQ.identity(2)))
    kinds = {d.kind for d, _ in ks.finite_divisors}
    assert kinds == {"real_algebraic"}
    assert len(ks.finite_divisors) == 2
    ivs = [d.isolating_interval for d, _ in ks.finite_divisors]
    assert ivs[0] != ivs[1]
