"""Minimal ranks of matrix pencils.

Two independent routes are provided:

  - ``minimal_ranks``: structure-driven, via the Kronecker invariants (block
    counts per eigenvalue for the regular part, index sums for the singular
    part);
  - ``minimal_ranks_oracle``: definition-driven, locating the projective rank
    drop points of t*A + u*B as roots of the gcd of maximal minors and
    evaluating ranks exactly at every drop point (rational, real-algebraic
    via number fields, or at infinity).

Also here: the GL2 transform realizing the minimal ranks with exact rank
verification, and the membership predicates for B_{r,s} and the absolutely
nonsingular set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exact import (
    MatrixQ,
    NumberFieldElem,
    PolyQ,
    factor_poly,
    matrix_over_field,
    pencil_matrix,
    poly_det,
    poly_gcd,
    rank_exact,
    rank_over_number_field,
    squarefree_part,
    sturm_real_root_count,
)
from .kcf import (
    EigenvalueDescriptor,
    Field,
    KroneckerStructure,
    Pencil,
    eigenvalue_key,
    kronecker_structure,
    normal_rank,
)


@dataclass(frozen=True)
class MinimalRanks:
    r: int
    s: int

    def __post_init__(self):
        if self.r < self.s:
            raise ValueError("minimal ranks require r >= s")

    def __iter__(self):
        return iter((self.r, self.s))

    def leq(self, other: "MinimalRanks") -> bool:
        return self.r <= other.r and self.s <= other.s


@dataclass(frozen=True)
class Gl2Transform:
    """Invertible change of basis on the (A, B) pair.

    The transformed pair is (t11 A + t12 B, t21 A + t22 B).  Entries are
    rational whenever the minimizing eigenvalues are; otherwise they are
    elements of one or two real number fields Q[x]/(h) (each row lives in a
    single field, pinned to a real root by root_intervals).
    """

    t11: Fraction | NumberFieldElem
    t12: Fraction | NumberFieldElem
    t21: Fraction | NumberFieldElem
    t22: Fraction | NumberFieldElem
    row_intervals: tuple = (None, None)  # isolating interval per algebraic row

    @property
    def is_rational(self) -> bool:
        return all(isinstance(t, Fraction)
                   for t in (self.t11, self.t12, self.t21, self.t22))

    def row_floats(self, digits: int = 50):
        """Float rendering of both rows at the certified real roots."""
        import mpmath

        mpmath.mp.dps = digits
        out = []
        for (ta, tb), iv in (((self.t11, self.t12), self.row_intervals[0]),
                             ((self.t21, self.t22), self.row_intervals[1])):
            if isinstance(ta, Fraction) and isinstance(tb, Fraction):
                out.append((mpmath.mpf(ta.numerator) / ta.denominator,
                            mpmath.mpf(tb.numerator) / tb.denominator))
                continue
            elem = ta if isinstance(ta, NumberFieldElem) else tb
            if iv is None or (isinstance(iv, tuple) and iv
                              and iv[0] == "nonreal"):
                # a row standing for a nonreal root of the minimal polynomial
                idx = iv[1] if iv is not None else 0
                coeffs = [mpmath.mpf(c.numerator) / c.denominator
                          for c in reversed(elem.min_poly.coeffs)]
                roots = mpmath.polyroots(coeffs, maxsteps=200)
                nonreal = sorted(
                    (z for z in roots if abs(mpmath.im(z)) > 1e-30),
                    key=lambda z: (mpmath.re(z), mpmath.im(z))) or roots
                root = nonreal[idx % len(nonreal)]
            else:
                root = _certified_root(elem.min_poly, iv, digits)
            vals = []
            for t in (ta, tb):
                if isinstance(t, Fraction):
                    vals.append(mpmath.mpf(t.numerator) / t.denominator)
                else:
                    vals.append(_eval_residue(t.residue, root))
            out.append(tuple(vals))
        return tuple(out)


def _certified_root(h: PolyQ, interval, digits: int):
    import mpmath

    mpmath.mp.dps = digits
    lo = mpmath.mpf(interval[0].numerator) / interval[0].denominator
    hi = mpmath.mpf(interval[1].numerator) / interval[1].denominator

    def f(x):
        return sum(mpmath.mpf(c.numerator) / c.denominator * x ** i
                   for i, c in enumerate(h.coeffs))

    try:
        return mpmath.findroot(f, (lo, hi), solver="anderson")
    except ValueError:
        # fall back to plain bisection on the certified bracket
        flo = f(lo)
        for _ in range(8 * digits):
            mid = (lo + hi) / 2
            fmid = f(mid)
            if fmid == 0:
                return mid
            if (flo < 0) == (fmid < 0):
                lo, flo = mid, fmid
            else:
                hi = mid
        return (lo + hi) / 2


def _eval_residue(res: PolyQ, root):
    import mpmath

    return sum(mpmath.mpf(c.numerator) / c.denominator * root ** i
               for i, c in enumerate(res.coeffs))


@dataclass(frozen=True)
class RegularCounts:
    """Block counts entering the regular-part minimal-rank formula."""

    j: int  # number of infinite divisors
    per_eigenvalue_block_counts: dict
    k_s: int
    k_r: int


def _eligible(desc: EigenvalueDescriptor, field: Field) -> bool:
    """Whether the eigenvalue lives in the scalar field (linear-form divisor)."""
    if desc.kind in ("rational", "real_algebraic"):
        return True
    return desc.kind == "complex_pair" and field == "complex"


def regular_counts(ks: KroneckerStructure) -> RegularCounts:
    counts: dict = {}
    for desc, _power in ks.finite_divisors:
        if _eligible(desc, ks.field):
            key = eigenvalue_key(desc)
            counts[key] = counts.get(key, 0) + 1
    ordered = sorted(counts.values(), reverse=True)
    k_s = ordered[0] if ordered else 0
    k_r = ordered[1] if len(ordered) > 1 else 0
    return RegularCounts(j=len(ks.infinite_divisor_degrees),
                         per_eigenvalue_block_counts=counts, k_s=k_s, k_r=k_r)


def minimal_ranks_regular(ks: KroneckerStructure) -> MinimalRanks:
    """Regular-part minimal ranks (n - k'_r, n - k'_s)."""
    if not ks.is_regular:
        raise ValueError("structure has a singular part")
    rc = regular_counts(ks)
    first, second = sorted((rc.j, rc.k_s, rc.k_r), reverse=True)[:2]
    n = ks.regular_dimension
    return MinimalRanks(n - second, n - first)


def minimal_ranks_singular_part(ks: KroneckerStructure) -> int:
    """Sum of all minimal column and row indices."""
    return ks.singular_index_sum()


def _regular_substructure(ks: KroneckerStructure) -> KroneckerStructure:
    return KroneckerStructure(
        normal_rank=ks.regular_dimension,
        min_col_indices=(),
        min_row_indices=(),
        finite_divisors=ks.finite_divisors,
        infinite_divisor_degrees=ks.infinite_divisor_degrees,
        field=ks.field,
    )


def minimal_ranks_from_structure(ks: KroneckerStructure) -> MinimalRanks:
    s_bar = minimal_ranks_singular_part(ks)
    reg = minimal_ranks_regular(_regular_substructure(ks))
    return MinimalRanks(reg.r + s_bar, reg.s + s_bar)


def minimal_ranks(P: Pencil, field: Field = "real") -> MinimalRanks:
    return minimal_ranks_from_structure(kronecker_structure(P, field))


# ---------------------------------------------------------------------------
# the definition-driven oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DropPoint:
    """A projective point (t, u) where rank(t*A + u*B) drops below normal.

    In pencil coordinates the point is lambda = u/t with (t, u) = (1, value)
    for finite points; the infinite point is (0, 1), i.e. the matrix B.
    Algebraic points carry the irreducible factor and the number of real
    roots it contributes (each a distinct projective point of equal rank).
    """

    kind: str  # "rational" | "algebraic" | "infinity"
    value: Fraction | None
    min_poly: PolyQ | None
    real_points: int  # how many real projective points this entry stands for
    rank: int


def _minor_gcd_polynomial(P: Pencil, R: int) -> PolyQ:
    """Monic gcd of all R x R minors of A + lambda*B (nonzero since R is the
    normal rank)."""
    M = pencil_matrix(P.A, P.B)
    g = PolyQ()
    for ri in itertools.combinations(range(P.m), R):
        for ci in itertools.combinations(range(P.n), R):
            sub = [[M[i][j] for j in ci] for i in ri]
            g = poly_gcd(g, poly_det(sub))
            if g.degree == 0:
                return g
    return g


def rank_at_rational(P: Pencil, lam: Fraction) -> int:
    return rank_exact(P.A + P.B * lam)


def rank_at_factor(P: Pencil, f: PolyQ) -> int:
    """Exact rank of A + lambda*B at any root of the irreducible factor f
    (all conjugate roots share the same rank)."""
    return rank_over_number_field(matrix_over_field(P.A, P.B, f.monic()))


def drop_points(P: Pencil, field: Field = "real") -> tuple[int, list[DropPoint]]:
    """Normal rank and all projective rank-drop points over the given field."""
    R = normal_rank(P)
    points: list[DropPoint] = []
    if R == 0:
        return R, points
    g = _minor_gcd_polynomial(P, R)
    assert not g.is_zero, "maximal minors cannot all vanish at the normal rank"
    if g.degree > 0:
        _, factors = factor_poly(g)
        for f, _power in factors:
            if f.degree == 1:
                lam = -f.coeffs[0]
                points.append(DropPoint("rational", lam, None, 1,
                                        rank_at_rational(P, lam)))
            else:
                n_real = sturm_real_root_count(squarefree_part(f))
                n_points = f.degree if field == "complex" else n_real
                if n_points == 0:
                    continue
                points.append(DropPoint("algebraic", None, f, n_points,
                                        rank_at_factor(P, f)))
    rank_b = rank_exact(P.B)
    if rank_b < R:
        points.append(DropPoint("infinity", None, None, 1, rank_b))
    # drop points must genuinely drop; roots of g of full rank cannot occur
    assert all(p.rank < R for p in points)
    return R, points


def minimal_ranks_oracle(P: Pencil, field: Field = "real") -> MinimalRanks:
    """Definition-driven minimal ranks, independent of the Kronecker route."""
    R, points = drop_points(P, field)
    if not points:
        # rank is constant over the projective line; the minimum s = R is
        # attained at two (indeed all) non-collinear points, so r = s
        return MinimalRanks(R, R)
    s = min(p.rank for p in points)
    minimizing_points = sum(p.real_points for p in points if p.rank == s)
    if minimizing_points >= 2:
        return MinimalRanks(s, s)
    others = [p.rank for p in points if p.rank != s]
    r = min(others + [R])
    return MinimalRanks(r, s)


# ---------------------------------------------------------------------------
# attaining transform
# ---------------------------------------------------------------------------


def _point_rows(p: DropPoint, how_many: int):
    """Up to how_many (t1, t2, interval) rows located at the point(s) of p.

    For an algebraic point every root of the factor is a distinct projective
    point; rows beyond the real (interval-pinned) roots stand for nonreal
    roots and carry no interval.
    """
    from .exact import isolating_intervals

    if p.kind == "rational":
        return [(Fraction(1), p.value, None)]
    if p.kind == "infinity":
        return [(Fraction(0), Fraction(1), None)]
    rows = []
    gen = NumberFieldElem.generator(p.min_poly)
    one = NumberFieldElem.from_rational(p.min_poly, 1)
    for iv in isolating_intervals(p.min_poly)[:how_many]:
        rows.append((one, gen, iv))
    idx = 0
    while len(rows) < how_many:
        rows.append((one, gen, ("nonreal", idx)))
        idx += 1
    return rows


def _verify_row_rank(P: Pencil, t1, t2) -> int:
    if isinstance(t1, Fraction) and isinstance(t2, Fraction):
        return rank_exact(P.A * t1 + P.B * t2)
    h = (t1 if isinstance(t1, NumberFieldElem) else t2).min_poly
    return rank_over_number_field(matrix_over_field(P.A, P.B, h, t1, t2))


def attain_transform(P: Pencil, field: Field = "real") \
        -> tuple[Gl2Transform, MinimalRanks]:
    """A GL2 transform whose transformed pair attains (rank r, rank s) exactly.

    Row (t21, t22) realizes s, row (t11, t12) realizes r; both ranks are
    verified by exact computation before returning.
    """
    R, points = drop_points(P, "real" if field == "real" else field)
    rho = minimal_ranks_oracle(P, field)
    r, s = rho.r, rho.s

    def generic_row():
        g_roots = {p.value for p in points if p.kind == "rational"}
        t = Fraction(0)
        while t in g_roots or rank_at_rational(P, t) != R:
            t += 1
        return (Fraction(1), t, None)

    if not points:
        row_s = (Fraction(0), Fraction(1), None)  # plain B has full normal rank
        row_r = (Fraction(1), Fraction(0), None)
    else:
        minimizers = []
        for p in sorted((p for p in points if p.rank == s),
                        key=lambda p: p.kind):
            minimizers.extend(_point_rows(p, p.real_points))
        row_s = minimizers[0]
        if r == s and len(minimizers) >= 2:
            row_r = minimizers[1]
        else:
            candidates = [p for p in points if p.rank == r]
            row_r = _point_rows(candidates[0], 1)[0] if candidates else generic_row()

    assert _verify_row_rank(P, row_r[0], row_r[1]) == r
    assert _verify_row_rank(P, row_s[0], row_s[1]) == s
    T = Gl2Transform(row_r[0], row_r[1], row_s[0], row_s[1],
                     row_intervals=(row_r[2], row_s[2]))
    return T, rho


# ---------------------------------------------------------------------------
# membership predicates
# ---------------------------------------------------------------------------


def in_b_rs(P: Pencil, r: int, s: int, field: Field = "real") -> bool:
    """Whether P belongs to B_{r,s}: both minimal ranks bounded by (r, s)."""
    if r < s:
        raise ValueError("B_{r,s} requires r >= s")
    return minimal_ranks(P, field).leq(MinimalRanks(r, s))


def in_c(P: Pencil) -> bool:
    """Absolutely nonsingular pencils: square, even-dimensional, with
    det(t*A + u*B) != 0 for every real (t, u) != 0; equivalently the real
    minimal ranks equal (n, n)."""
    if P.m != P.n or P.m % 2 == 1:
        return False
    n = P.n
    return minimal_ranks(P, "real") == MinimalRanks(n, n)
