"""Minimal ranks of matrix polynomials via rank-minimizing subspaces.

A degree-(d-1) matrix polynomial P(lambda) = sum_k lambda^(k-1) A_k is viewed
through the ranks of the linear combinations sum_k t_k A_k.  Rank-minimizing
subspaces T_1, T_2, ... of F^d are built in stages: T_1 is spanned by all
minimizers of rank over nonzero t, T_2 by all minimizers outside T_1, and so
on; the minimal-rank tuple repeats each stage value according to the subspace
dimensions (largest first).  When a stage's solution set spans more than the
dimension left (possible when a whole positive-dimensional family attains the
stage minimum), the extra directions simply extend the same stage value to
more tuple positions.

For d = 2 everything is exact, delegating to the pencil drop-point oracle.
For d >= 3 the problem is a polynomial-system question; the heuristic
combines exact pencil analysis on two-dimensional slices of the coefficient
space (which meet every positive-dimensional component of the rank-drop
variety) with resultant elimination for isolated rational drop points (d = 3),
and reports certified=False.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import MatrixQ, rank_exact
from .kcf import Pencil
from .minranks import _certified_root, minimal_ranks_oracle, drop_points


@dataclass(frozen=True)
class MatrixPolynomial:
    """P(lambda) = sum_{k=1}^{d} lambda^(k-1) A_k with rational coefficients."""

    coefficients: tuple[MatrixQ, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("at least one coefficient matrix is required")
        dims = {(A.rows, A.cols) for A in self.coefficients}
        if len(dims) != 1:
            raise ValueError("coefficient matrices must share dimensions")

    @staticmethod
    def from_lists(mats: Sequence[Sequence[Sequence]]) -> "MatrixPolynomial":
        return MatrixPolynomial(tuple(MatrixQ(A) for A in mats))

    @staticmethod
    def from_pencil(P: Pencil) -> "MatrixPolynomial":
        return MatrixPolynomial((P.A, P.B))

    @property
    def m(self) -> int:
        return self.coefficients[0].rows

    @property
    def n(self) -> int:
        return self.coefficients[0].cols

    @property
    def d(self) -> int:
        return len(self.coefficients)

    def combine(self, t: Sequence) -> MatrixQ:
        """sum_k t_k A_k."""
        if len(t) != self.d:
            raise ValueError("coefficient vector length must equal d")
        out = MatrixQ.zero(self.m, self.n)
        for tk, A in zip(t, self.coefficients):
            if tk:
                out = out + A * Fraction(tk)
        return out

    def transform(self, L: MatrixQ, U: MatrixQ, T: Sequence[Sequence]) \
            -> "MatrixPolynomial":
        """(L, U, T) action: A'_k = L (sum_j T_kj A_j) U^T."""
        return MatrixPolynomial(tuple(
            (L @ self.combine(row) @ U.transpose()) for row in T))


@dataclass(frozen=True)
class RankMinimizingSubspace:
    """One stage: a basis (vectors over Q, or float approximations for
    irrational minimizers) and the rank value attained on it."""

    basis: tuple[tuple, ...]
    rank_value: int


@dataclass(frozen=True)
class RankMinimizingDecomposition:
    subspaces: tuple[RankMinimizingSubspace, ...]
    tuple: tuple[int, ...]
    certified: bool

    def __post_init__(self):
        assert all(self.tuple[i] >= self.tuple[i + 1]
                   for i in range(len(self.tuple) - 1))
        ranks = [sub.rank_value for sub in self.subspaces]
        assert ranks == sorted(ranks) and len(set(ranks)) == len(ranks)


# ---------------------------------------------------------------------------
# exact d = 2
# ---------------------------------------------------------------------------


def _point_vectors(p) -> list[tuple]:
    """(t1, t2) coefficient vectors of a projective drop point; algebraic
    points yield one vector per real root (floats)."""
    from .exact import isolating_intervals

    if p.kind == "rational":
        return [(Fraction(1), p.value)]
    if p.kind == "infinity":
        return [(Fraction(0), Fraction(1))]
    out = []
    for iv in isolating_intervals(p.min_poly)[:p.real_points]:
        out.append((1.0, float(_certified_root(p.min_poly, iv, 30))))
    return out


def poly_minimal_ranks_d2(P: MatrixPolynomial) -> RankMinimizingDecomposition:
    """Exact rank-minimizing subspaces of F^2 for a pencil (d = 2)."""
    if P.d != 2:
        raise ValueError("poly_minimal_ranks_d2 requires exactly 2 coefficients")
    pencil = Pencil(P.coefficients[0], P.coefficients[1])
    R, points = drop_points(pencil)
    rho = minimal_ranks_oracle(pencil)
    r, s = rho.r, rho.s
    if r == s:
        # a single rank-minimizing subspace T_1 = F^2
        sub = RankMinimizingSubspace(((Fraction(1), Fraction(0)),
                                      (Fraction(0), Fraction(1))), s)
        return RankMinimizingDecomposition((sub,), (s, s), True)
    minimizers = [v for p in points if p.rank == s for v in _point_vectors(p)]
    t1 = RankMinimizingSubspace((minimizers[0],), s)
    second = [v for p in points if p.rank == r for v in _point_vectors(p)]
    if not second:  # r equals the normal rank, attained generically
        rational = {p.value for p in points if p.kind == "rational"}
        t = Fraction(0)
        while t in rational or rank_exact(pencil.A + pencil.B * t) != R:
            t += 1
        second = [(Fraction(1), t)]
    t2 = RankMinimizingSubspace(tuple(second), r)
    return RankMinimizingDecomposition((t1, t2), (r, s), True)


# ---------------------------------------------------------------------------
# heuristic for general d
# ---------------------------------------------------------------------------


_HEIGHT = 10 ** 6


def _random_direction(rng, d: int) -> tuple[Fraction, ...]:
    while True:
        v = tuple(Fraction(rng.randint(-999, 999), rng.randint(1, 999))
                  for _ in range(d))
        if any(v):
            return v


def _normalize_exact(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    lead = next(x for x in v if x)
    return tuple(Fraction(x) / lead for x in v)


@dataclass
class _Candidate:
    floats: np.ndarray          # unit vector
    exact: tuple | None         # projectively normalized rational vector
    rank: int


def _make_candidate(P: MatrixPolynomial, vec, exact: bool) -> _Candidate:
    if exact:
        vec = _normalize_exact(vec)
        rank = rank_exact(P.combine(vec))
        f = np.array([float(x) for x in vec])
        return _Candidate(f / np.linalg.norm(f), vec, rank)
    f = np.array([float(x) for x in vec])
    f = f / np.linalg.norm(f)
    M = sum(float(c) * A.to_float() for c, A in zip(f, P.coefficients))
    return _Candidate(f, None, int(np.linalg.matrix_rank(M, tol=1e-9)))


def _slice_candidates(P: MatrixPolynomial, u, v, R: int) -> list[_Candidate]:
    """Exact drop points of the pencil on the slice span{u, v}."""
    out: list[_Candidate] = []
    Au, Av = P.combine(u), P.combine(v)
    slice_pencil = Pencil(Au, Av)
    R_slice, points = drop_points(slice_pencil)
    if R_slice < R:
        # the whole slice sits inside the rank-drop variety: record a few of
        # its generic points (they attain rank R_slice except at drops)
        for c in (Fraction(0), Fraction(1), Fraction(2)):
            vec = tuple(a + c * b for a, b in zip(u, v))
            out.append(_make_candidate(P, vec, exact=True))
    for p in points:
        if p.kind == "rational":
            vec = tuple(a + p.value * b for a, b in zip(u, v))
            out.append(_make_candidate(P, vec, exact=True))
        elif p.kind == "infinity":
            out.append(_make_candidate(P, v, exact=True))
        else:
            for t1, t2 in _point_vectors(p):
                vec = tuple(float(a) + t2 * float(b) for a, b in zip(u, v))
                out.append(_make_candidate(P, vec, exact=False))
    return [c for c in out if c.rank < R]


def _sympy_combination_matrix(P: MatrixPolynomial, symbols):
    import sympy

    M = sympy.zeros(P.m, P.n)
    for t, A in zip(symbols, P.coefficients):
        M += t * sympy.Matrix([[sympy.Rational(x) for x in row]
                               for row in A.entries])
    return M


def _elimination_candidates(P: MatrixPolynomial, R: int, rng) \
        -> list[_Candidate]:
    """Isolated rational points with rank <= k (k < R), via resultants
    eliminating one variable on each affine chart.  d = 3 only; loci cut out
    by a single minor are positive-dimensional and left to the slices."""
    import sympy

    t1, t2, t3 = sympy.symbols("t1 t2 t3")
    M = _sympy_combination_matrix(P, (t1, t2, t3))
    found: list[_Candidate] = []
    for k in range(1, R):
        size = k + 1
        minors = [M[rs, cs].det() for rs in
                  itertools.combinations(range(P.m), size)
                  for cs in itertools.combinations(range(P.n), size)]
        minors = [f for f in (sympy.expand(f) for f in minors) if f != 0]
        if len(minors) < 2:
            continue
        found.extend(_chart_solutions(P, minors, (t1, t2, t3), rng))
    return [c for c in found if c.rank < R]


def _rational_roots(f, var) -> list[Fraction]:
    import sympy

    if f == 0 or f.is_number:
        return []
    return [Fraction(r.p, r.q)
            for r in sympy.roots(sympy.Poly(f, var), filter="Q")]


def _chart_solutions(P: MatrixPolynomial, minors, symbols, rng) \
        -> list[_Candidate]:
    import sympy

    t1, t2, t3 = symbols
    out: list[_Candidate] = []

    def check(vec):
        cand = _make_candidate(P, vec, exact=True)
        out.append(cand)

    # chart t1 = 1: eliminate t3 from two random combinations of the minors
    polys = [sympy.expand(f.subs(t1, 1)) for f in minors]
    for _ in range(4):
        F = sum(sympy.Integer(rng.randint(-9, 9)) * f for f in polys)
        G = sum(sympy.Integer(rng.randint(-9, 9)) * f for f in polys)
        res = sympy.resultant(F, G, t3)
        if res == 0:
            continue
        for x0 in _rational_roots(sympy.expand(res), t2):
            slices = [sympy.expand(f.subs(t2, sympy.Rational(x0)))
                      for f in polys]
            g = sympy.Integer(0)
            for f in slices:
                g = sympy.gcd(g, f)
            if g == 0:  # every minor vanishes on the whole line
                check((Fraction(1), x0, Fraction(0)))
                continue
            for y0 in _rational_roots(g, t3):
                check((Fraction(1), x0, y0))
        break
    # chart t1 = 0, t2 = 1: a univariate gcd in t3
    g = sympy.Integer(0)
    for f in minors:
        g = sympy.gcd(g, sympy.expand(f.subs({t1: 0, t2: 1})))
    if g == 0:
        check((Fraction(0), Fraction(1), Fraction(0)))
    else:
        for y0 in _rational_roots(g, t3):
            check((Fraction(0), Fraction(1), y0))
    # the remaining point (0, 0, 1)
    if all(f.subs({t1: 0, t2: 0, t3: 1}) == 0 for f in minors):
        check((Fraction(0), Fraction(0), Fraction(1)))
    return out


def _dim(basis: list[np.ndarray]) -> int:
    if not basis:
        return 0
    return int(np.linalg.matrix_rank(np.array(basis), tol=1e-8))


def _outside(c: _Candidate, basis: list[np.ndarray]) -> bool:
    return _dim(basis + [c.floats]) > _dim(basis)


def poly_minimal_ranks_heuristic(P: MatrixPolynomial, samples: int = 40,
                                 seed: int = 0) -> RankMinimizingDecomposition:
    """Staged rank-minimizing subspaces for general d.

    Generic rank is estimated by exact evaluation at `samples` random
    rational points (every witnessed rank is achieved, so it is a certified
    lower bound).  Drop candidates come from exact pencil analysis on random
    and coordinate 2-dimensional slices, plus, for d = 3, resultant
    elimination of the minor systems on affine charts (rational roots only).
    The result is certified only for d = 2."""
    if P.d < 2:
        raise ValueError("the heuristic requires d >= 2")
    rng = random.Random(seed)
    d = P.d

    R = 0
    for _ in range(samples):
        R = max(R, rank_exact(P.combine(_random_direction(rng, d))))
        if R == min(P.m, P.n):
            break

    candidates: list[_Candidate] = []
    if R > 0:
        unit = [tuple(Fraction(int(i == j)) for i in range(d))
                for j in range(d)]
        slices = list(itertools.combinations(unit, 2))
        for _ in range(2 * d):
            u, v = _random_direction(rng, d), _random_direction(rng, d)
            slices.append((u, v))
        for u, v in slices:
            candidates.extend(_slice_candidates(P, u, v, R))
        if d == 3:
            candidates.extend(_elimination_candidates(P, R, rng))

    # projective dedup
    unique: list[_Candidate] = []
    for c in candidates:
        if not any(abs(abs(float(np.dot(c.floats, o.floats))) - 1.0) < 1e-9
                   for o in unique):
            unique.append(c)

    # stage assembly
    stages: list[RankMinimizingSubspace] = []
    basis: list[np.ndarray] = []
    remaining = sorted(unique, key=lambda c: c.rank)
    while _dim(basis) < d:
        outside = [c for c in remaining if _outside(c, basis)]
        if not outside:
            fill = []
            for j in range(d):
                e = np.zeros(d)
                e[j] = 1.0
                if _outside(_Candidate(e, None, R), basis):
                    basis.append(e)
                    fill.append(tuple(Fraction(int(i == j)) for i in range(d)))
            stages.append(RankMinimizingSubspace(tuple(fill), R))
            break
        rmin = min(c.rank for c in outside)
        vectors = []
        for c in outside:
            if c.rank == rmin and _outside(c, basis):
                basis.append(c.floats)
                vectors.append(c.exact if c.exact is not None
                               else tuple(float(x) for x in c.floats))
        stages.append(RankMinimizingSubspace(tuple(vectors), rmin))
        remaining = [c for c in remaining if c.rank > rmin]

    # stage dimensions from the accumulated spans
    dims = []
    used = 0
    acc: list[np.ndarray] = []
    for sub in stages:
        for v in sub.basis:
            acc.append(np.array([float(x) for x in v]))
        new_dim = min(_dim(acc), d)
        dims.append(new_dim - used)
        used = new_dim
    tup: list[int] = []
    for sub, dim in zip(reversed(stages), reversed(dims)):
        tup.extend([sub.rank_value] * dim)
    return RankMinimizingDecomposition(tuple(stages), tuple(tup),
                                       certified=(d == 2))


def poly_minimal_ranks(P: MatrixPolynomial, samples: int = 40,
                       seed: int = 0) -> RankMinimizingDecomposition:
    """Exact for d = 2, heuristic otherwise."""
    if P.d == 2:
        return poly_minimal_ranks_d2(P)
    return poly_minimal_ranks_heuristic(P, samples=samples, seed=seed)


def poly_in_b(P: MatrixPolynomial, s: Sequence[int], samples: int = 40,
              seed: int = 0) -> bool:
    """Whether P belongs to B_{s_1,...,s_d}: componentwise domination of the
    minimal-rank tuple after sorting the query descending (membership is
    invariant under permutations of the tuple)."""
    if len(s) != P.d:
        raise ValueError("query tuple length must equal d")
    query = sorted(s, reverse=True)
    rho = poly_minimal_ranks(P, samples=samples, seed=seed).tuple
    return all(q >= r for q, r in zip(query, rho))


__all__ = [
    "MatrixPolynomial", "RankMinimizingSubspace", "RankMinimizingDecomposition",
    "poly_minimal_ranks_d2", "poly_minimal_ranks_heuristic",
    "poly_minimal_ranks", "poly_in_b",
]
