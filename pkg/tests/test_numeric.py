"""Tests for floating-point Kronecker structure extraction."""

import random

import numpy as np
import pytest

from pencilranks import blocks
from pencilranks.classify import (
    canonical_representative,
    catalog,
    make_label,
    random_parameters,
)
from pencilranks.kcf import kronecker_structure
from pencilranks.numeric import (
    FloatPencil,
    staircase_structure,
    structures_match,
)


def _perturbed(P, eps, rng, tol=1e-8):
    A, B = P.to_float()
    return FloatPencil(A + eps * rng.standard_normal(A.shape),
                       B + eps * rng.standard_normal(B.shape), tol)


def test_float_pencil_validation():
    with pytest.raises(ValueError):
        FloatPencil(np.zeros((2, 2)), np.zeros((2, 3)))
    with pytest.raises(ValueError):
        FloatPencil(np.zeros((2, 2)), np.zeros((2, 2)), tolerance=0.0)


def test_structure_on_clean_blocks():
    rng = np.random.default_rng(0)
    for P in [blocks.jordan_pencil(3, 2), blocks.q_pencil(2, 1, 1),
              blocks.l_block(2), blocks.infinite_pencil(3),
              blocks.direct_sum([blocks.l_block(0), blocks.jordan_pencil(2, -1)])]:
        ks = kronecker_structure(P)
        ns = staircase_structure(_perturbed(P, 0.0, rng))
        assert structures_match(ns, ks, 1e-8), (ks, ns)
        assert not ns.warnings


def test_noise_below_tolerance_is_absorbed():
    # a family representative perturbed at 1e-12 with tolerance 1e-8 keeps
    # the exact structure
    rng = np.random.default_rng(1)
    P = canonical_representative(make_label("R2,1", {"a": 3}))
    ks = kronecker_structure(P)
    ns = staircase_structure(_perturbed(P, 1e-12, rng))
    assert structures_match(ns, ks, 1e-8)


def test_multiple_eigenvalue_splitting_is_merged():
    # noise splits a triple eigenvalue by ~eps^(1/3), far beyond the cluster
    # radius; connectivity merging must still report a single point
    rng = np.random.default_rng(2)
    P = blocks.jordan_pencil(3, 1)
    ns = staircase_structure(_perturbed(P, 1e-10, rng))
    assert len(ns.finite_divisors) == 1
    ev, power = ns.finite_divisors[0]
    assert ev.kind == "real" and power == 3
    assert ev.value.real == pytest.approx(-1.0, abs=1e-4)


def test_complex_pair_detected():
    rng = np.random.default_rng(3)
    ns = staircase_structure(_perturbed(blocks.q_pencil(1, 0, 2), 1e-10, rng))
    assert len(ns.finite_divisors) == 1
    ev, power = ns.finite_divisors[0]
    assert ev.kind == "complex_pair" and power == 1
    assert ev.value == pytest.approx(complex(0, 2), abs=1e-6)


def test_all_family_representatives_under_perturbation():
    rng = np.random.default_rng(4)
    rr = random.Random(4)
    for rec in catalog().values():
        P = canonical_representative(
            make_label(rec.name, random_parameters(rec, rr)))
        ks = kronecker_structure(P)
        ns = staircase_structure(_perturbed(P, 1e-10, rng))
        assert structures_match(ns, ks, 1e-8), rec.name


def test_near_threshold_noise_raises_warning():
    # perturbation of the same magnitude as the tolerance makes some rank
    # decision ambiguous: the flag must be set (structure may be either)
    rng = np.random.default_rng(5)
    P = blocks.direct_sum([blocks.l_block(1), blocks.jordan_pencil(2, 0)])
    flagged = 0
    for _ in range(10):
        ns = staircase_structure(_perturbed(P, 1e-8, rng))
        flagged += bool(ns.warnings)
    assert flagged > 0


def test_structures_match_discriminates():
    rng = np.random.default_rng(6)
    P1 = blocks.jordan_pencil(2, 0)
    P2 = blocks.direct_sum([blocks.jordan_pencil(1, 0),
                            blocks.jordan_pencil(1, 0)])
    ns = staircase_structure(_perturbed(P1, 0.0, rng))
    assert structures_match(ns, kronecker_structure(P1), 1e-8)
    assert not structures_match(ns, kronecker_structure(P2), 1e-8)
    P3 = blocks.jordan_pencil(2, 1)
    assert not structures_match(ns, kronecker_structure(P3), 1e-8)


def test_budget_mismatch_is_flagged_not_raised():
    # tolerance far too coarse wipes out the regular structure; the result
    # must carry warnings instead of failing
    rng = np.random.default_rng(7)
    A, B = blocks.jordan_pencil(3, 1).to_float()
    ns = staircase_structure(FloatPencil(A, B, tolerance=0.5))
    assert isinstance(ns.normal_rank, int)
