"""Exact Kronecker structure of rational matrix pencils.

Structural invariants only: normal rank, minimal column/row indices, finite
elementary divisors (over the reals or the complexes) and infinite elementary
divisors.  No transformation matrices are produced.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Literal, Sequence

from .exact import (
    MatrixQ,
    PolyQ,
    factor_poly,
    isolating_intervals,
    pencil_matrix,
    rank_exact,
    smith_form,
    squarefree_part,
    sturm_real_root_count,
)

Field = Literal["real", "complex"]


# ---------------------------------------------------------------------------
# pencils
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pencil:
    """A matrix pencil A + lambda*B over Q."""

    A: MatrixQ
    B: MatrixQ

    def __post_init__(self):
        if (self.A.rows, self.A.cols) != (self.B.rows, self.B.cols):
            raise ValueError("A and B must share dimensions")

    @property
    def m(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols

    @staticmethod
    def from_lists(A: Sequence[Sequence], B: Sequence[Sequence]) -> "Pencil":
        return Pencil(MatrixQ(A), MatrixQ(B))

    @staticmethod
    def zero(m: int, n: int) -> "Pencil":
        return Pencil(MatrixQ.zero(m, n), MatrixQ.zero(m, n))

    def transpose(self) -> "Pencil":
        return Pencil(self.A.transpose(), self.B.transpose())

    def direct_sum(self, other: "Pencil") -> "Pencil":
        return Pencil(MatrixQ.block_diag([self.A, other.A]),
                      MatrixQ.block_diag([self.B, other.B]))

    def left_right(self, P: MatrixQ, U: MatrixQ) -> "Pencil":
        """The pencil P (A + lambda B) U^T."""
        Ut = U.transpose()
        return Pencil(P @ self.A @ Ut, P @ self.B @ Ut)

    def apply_gl2(self, t11, t12, t21, t22) -> "Pencil":
        """(A, B) -> (t11 A + t12 B, t21 A + t22 B)."""
        det = Fraction(t11) * Fraction(t22) - Fraction(t12) * Fraction(t21)
        if det == 0:
            raise ValueError("GL2 transform must be invertible")
        return Pencil(self.A * t11 + self.B * t12, self.A * t21 + self.B * t22)

    def eval_at(self, t, u) -> MatrixQ:
        """t*A + u*B."""
        return self.A * t + self.B * u

    def norm_sq(self) -> Fraction:
        return self.A.norm_sq() + self.B.norm_sq()

    def dist_sq(self, other: "Pencil") -> Fraction:
        return (self.A - other.A).norm_sq() + (self.B - other.B).norm_sq()

    def to_float(self):
        return self.A.to_float(), self.B.to_float()


def direct_sum(pencils: Sequence[Pencil]) -> Pencil:
    return Pencil(MatrixQ.block_diag([p.A for p in pencils]),
                  MatrixQ.block_diag([p.B for p in pencils]))


# ---------------------------------------------------------------------------
# eigenvalue descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenvalueDescriptor:
    """Exact description of one eigenvalue of the regular part.

    kind is one of:
      - "rational": value holds the eigenvalue; divisor is (lambda - value)^power
      - "real_algebraic": an irrational real root of min_poly, pinned down by
        a Sturm-certified isolating interval
      - "complex_pair": a conjugate pair of nonreal roots of min_poly;
        pair_index distinguishes pairs of the same factor (and, over the
        complex field, the two conjugate copies)
      - "infinite": the eigenvalue at infinity (divisor of the reversed pencil)
    """

    kind: Literal["rational", "real_algebraic", "complex_pair", "infinite"]
    value: Fraction | None = None
    min_poly: PolyQ | None = None
    isolating_interval: tuple[Fraction, Fraction] | None = None
    pair_index: int = 0

    @staticmethod
    def rational(value) -> "EigenvalueDescriptor":
        return EigenvalueDescriptor("rational", value=Fraction(value))

    @staticmethod
    def infinite() -> "EigenvalueDescriptor":
        return EigenvalueDescriptor("infinite")

    def approx(self) -> complex:
        """A floating approximation of (one representative of) the eigenvalue."""
        if self.kind == "rational":
            return complex(float(self.value), 0.0)
        if self.kind == "infinite":
            return complex(float("inf"), 0.0)
        import numpy as np

        roots = np.roots([float(c) for c in reversed(self.min_poly.coeffs)])
        if self.kind == "real_algebraic":
            lo, hi = self.isolating_interval
            real = [z.real for z in roots if abs(z.imag) < 1e-9]
            return complex(min(real, key=lambda x: abs(x - (float(lo) + float(hi)) / 2)), 0.0)
        pairs = sorted({(round(z.real, 9), round(abs(z.imag), 9))
                        for z in roots if z.imag > 1e-9})
        re, im = pairs[self.pair_index % len(pairs)]
        return complex(re, im)


@dataclass(frozen=True)
class KroneckerStructure:
    """Complete structural fingerprint of a pencil."""

    normal_rank: int
    min_col_indices: tuple[int, ...]
    min_row_indices: tuple[int, ...]
    finite_divisors: tuple[tuple[EigenvalueDescriptor, int], ...]
    infinite_divisor_degrees: tuple[int, ...]
    field: Field = "real"

    @property
    def regular_dimension(self) -> int:
        """Total dimension q of the regular part (real-dimension count)."""
        q = sum(self.infinite_divisor_degrees)
        for desc, power in self.finite_divisors:
            weight = 2 if (desc.kind == "complex_pair" and self.field == "real") else 1
            q += weight * power
        return q

    @property
    def is_regular(self) -> bool:
        return not self.min_col_indices and not self.min_row_indices

    def singular_index_sum(self) -> int:
        return sum(self.min_col_indices) + sum(self.min_row_indices)


# ---------------------------------------------------------------------------
# structure extraction
# ---------------------------------------------------------------------------


def normal_rank(P: Pencil) -> int:
    """Rank of A + lambda*B over Q(lambda).

    rank(A + tB) equals the normal rank except at the finitely many roots of
    the gcd of maximal minors, whose number is at most min(m, n); evaluating
    at min(m, n) + 1 distinct rational points therefore hits a generic point.
    """
    best = 0
    for t in range(min(P.m, P.n) + 1):
        best = max(best, rank_exact(P.A + P.B * t))
        if best == min(P.m, P.n):
            return best
    return best


def invariant_polynomials(P: Pencil) -> list[PolyQ]:
    return smith_form(pencil_matrix(P.A, P.B))


def _real_root_descriptors(f: PolyQ) -> list[EigenvalueDescriptor]:
    """One descriptor per distinct real root of the irreducible factor f."""
    if f.degree == 1:
        # monic x + c has root -c
        return [EigenvalueDescriptor.rational(-f.coeffs[0])]
    out = []
    for lo, hi in isolating_intervals(f):
        out.append(EigenvalueDescriptor("real_algebraic", min_poly=f,
                                        isolating_interval=(lo, hi)))
    return out


def _pair_descriptors(f: PolyQ, field: Field) -> list[EigenvalueDescriptor]:
    """Descriptors for the conjugate nonreal root pairs of irreducible f."""
    n_real = sturm_real_root_count(squarefree_part(f))
    n_pairs = (f.degree - n_real) // 2
    out = []
    for i in range(n_pairs):
        if field == "real":
            out.append(EigenvalueDescriptor("complex_pair", min_poly=f, pair_index=i))
        else:
            out.append(EigenvalueDescriptor("complex_pair", min_poly=f, pair_index=2 * i))
            out.append(EigenvalueDescriptor("complex_pair", min_poly=f, pair_index=2 * i + 1))
    return out


def finite_structure(P: Pencil, field: Field = "real") \
        -> list[tuple[EigenvalueDescriptor, int]]:
    """Finite elementary divisors (descriptor, power) of the regular part."""
    divisors: list[tuple[EigenvalueDescriptor, int]] = []
    for s in invariant_polynomials(P):
        if s.degree <= 0:
            continue
        _, factors = factor_poly(s)
        for f, power in factors:
            if f.degree == 1:
                divisors.append((_real_root_descriptors(f)[0], power))
            else:
                for desc in _real_root_descriptors(f):
                    divisors.append((desc, power))
                for desc in _pair_descriptors(f, field):
                    divisors.append((desc, power))
    return divisors


def infinite_structure(P: Pencil) -> tuple[int, ...]:
    """Degrees of infinite elementary divisors: divisors at 0 of B + lambda*A."""
    degrees = []
    x = PolyQ.x()
    for s in invariant_polynomials(Pencil(P.B, P.A)):
        k = 0
        while not s.is_zero and s.coeffs[0] == 0:
            s = s.exact_div(x)
            k += 1
        if k:
            degrees.append(k)
    return tuple(sorted(degrees))


def _expansion_rank(P: Pencil, j: int) -> int:
    """Rank of the degree-j column expansion matrix.

    Its null space holds polynomial vectors x(lambda) of degree <= j with
    (A + lambda B) x(lambda) = 0; block row i of the (j+2) x (j+1) block grid
    carries A at (i, i) and B at (i+1, i).
    """
    m, n = P.m, P.n
    rows = [[Fraction(0)] * ((j + 1) * n) for _ in range((j + 2) * m)]
    for blk in range(j + 1):
        for i in range(m):
            for c in range(n):
                a = P.A.entries[i][c]
                if a:
                    rows[blk * m + i][blk * n + c] = a
                b = P.B.entries[i][c]
                if b:
                    rows[(blk + 1) * m + i][blk * n + c] = b
    return rank_exact(MatrixQ(rows))


def minimal_indices(P: Pencil) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Exact minimal column and row index multisets, zeros included."""
    R = normal_rank(P)

    def col_indices(Q: Pencil) -> tuple[int, ...]:
        total = Q.n - R
        out: list[int] = []
        prev_nullity = 0
        j = 0
        while len(out) < total:
            nullity = (j + 1) * Q.n - _expansion_rank(Q, j)
            count_leq_j = nullity - prev_nullity
            out.extend([j] * (count_leq_j - len(out)))
            prev_nullity = nullity
            j += 1
        return tuple(out)

    cols = col_indices(P)
    rows = col_indices(P.transpose())
    return cols, rows


def kronecker_structure(P: Pencil, field: Field = "real") -> KroneckerStructure:
    """Assemble the full Kronecker structure, with budget cross-checks."""
    R = normal_rank(P)
    fin = finite_structure(P, field)
    inf = infinite_structure(P)
    cols, rows = minimal_indices(P)
    ks = KroneckerStructure(
        normal_rank=R,
        min_col_indices=cols,
        min_row_indices=rows,
        finite_divisors=tuple(fin),
        infinite_divisor_degrees=inf,
        field=field,
    )
    q = ks.regular_dimension
    assert sum(k + 1 for k in cols) + sum(rows) + q == P.n, "column budget violated"
    assert sum(cols) + sum(l + 1 for l in rows) + q == P.m, "row budget violated"
    assert sum(cols) + sum(rows) + q == R, "normal-rank budget violated"
    return ks


def eigenvalue_key(desc: EigenvalueDescriptor):
    """Hashable identity of an eigenvalue: equal keys <=> equal eigenvalues."""
    if desc.kind == "rational":
        return ("rational", desc.value)
    if desc.kind == "infinite":
        return ("infinite",)
    if desc.kind == "real_algebraic":
        return ("real_algebraic", desc.min_poly, desc.isolating_interval)
    return ("complex_pair", desc.min_poly, desc.pair_index)
