"""Exact rational building blocks: polynomials, matrices, number fields.

Everything here works over exact rationals (``fractions.Fraction``); sympy is
used only for polynomial factorization over Q and for real-root counting /
isolation, where reimplementing would be pointless.  All functions are pure
and all values immutable, so concurrent use is safe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy as sp

_LAM = sp.Symbol("lam")

Rat = Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, sp.Rational):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


# ---------------------------------------------------------------------------
# univariate polynomials over Q
# ---------------------------------------------------------------------------


class PolyQ:
    """Dense univariate polynomial over Q, coefficients lowest degree first.

    The zero polynomial has an empty coefficient tuple; otherwise the leading
    coefficient is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("PolyQ is immutable")

    # -- basics ------------------------------------------------------------

    @staticmethod
    def const(c) -> "PolyQ":
        return PolyQ([c])

    @staticmethod
    def x() -> "PolyQ":
        return PolyQ([0, 1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = PolyQ([other])
        return isinstance(other, PolyQ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "PolyQ(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{i}")
        return "PolyQ(" + " + ".join(terms) + ")"

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "PolyQ":
        other = other if isinstance(other, PolyQ) else PolyQ([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return PolyQ(a)

    def __neg__(self) -> "PolyQ":
        return PolyQ([-c for c in self.coeffs])

    def __sub__(self, other) -> "PolyQ":
        other = other if isinstance(other, PolyQ) else PolyQ([other])
        return self + (-other)

    def __mul__(self, other) -> "PolyQ":
        if isinstance(other, (int, Fraction)):
            return PolyQ([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return PolyQ()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyQ(out)

    __rmul__ = __mul__

    def divmod(self, other: "PolyQ") -> tuple["PolyQ", "PolyQ"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        den = other.coeffs
        dd = len(den) - 1
        lead = den[-1]
        if len(rem) - 1 < dd:
            return PolyQ(), self
        quot = [Fraction(0)] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            if rem[i] == 0:
                continue
            q = rem[i] / lead
            quot[i - dd] = q
            for j in range(dd + 1):
                rem[i - dd + j] -= q * den[j]
        return PolyQ(quot), PolyQ(rem)

    def __floordiv__(self, other: "PolyQ") -> "PolyQ":
        return self.divmod(other)[0]

    def __mod__(self, other: "PolyQ") -> "PolyQ":
        return self.divmod(other)[1]

    def exact_div(self, other: "PolyQ") -> "PolyQ":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise ValueError("division is not exact")
        return q

    def monic(self) -> "PolyQ":
        if self.is_zero:
            return self
        return self * (1 / self.leading)

    def derivative(self) -> "PolyQ":
        return PolyQ([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Evaluate via Horner; x may be Fraction, float, complex or an
        element of a number field."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return 0 * x if not isinstance(x, (int, float, complex, Fraction)) else Fraction(0)
        return acc

    def shift_pow(self, k: int) -> "PolyQ":
        """Multiply by x**k."""
        if self.is_zero:
            return self
        return PolyQ([Fraction(0)] * k + list(self.coeffs))

    # -- conversions ---------------------------------------------------------

    def to_sympy(self, sym=_LAM) -> sp.Poly:
        return sp.Poly.from_list([sp.Rational(c.numerator, c.denominator)
                                  for c in reversed(self.coeffs)] or [0], sym, domain=sp.QQ)

    @staticmethod
    def from_sympy(p: sp.Poly) -> "PolyQ":
        return PolyQ([_as_fraction(c) for c in reversed(p.all_coeffs())])


def poly_gcd(p: PolyQ, q: PolyQ) -> PolyQ:
    """Monic gcd via the Euclidean algorithm; gcd(0, 0) = 0."""
    a, b = p, q
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(p: PolyQ, q: PolyQ) -> tuple[PolyQ, PolyQ, PolyQ]:
    """Extended gcd: returns (g, u, v) with u*p + v*q = g, g monic."""
    r0, r1 = p, q
    s0, s1 = PolyQ([1]), PolyQ()
    t0, t1 = PolyQ(), PolyQ([1])
    while not r1.is_zero:
        qt, rem = r0.divmod(r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if r0.is_zero:
        return r0, s0, t0
    c = 1 / r0.leading
    return r0 * c, s0 * c, t0 * c


def squarefree_part(p: PolyQ) -> PolyQ:
    if p.is_zero:
        return p
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.monic()
    return p.exact_div(g).monic()


def sturm_real_root_count(p: PolyQ, lo: Fraction | None = None,
                          hi: Fraction | None = None) -> int:
    """Number of distinct real roots of squarefree p in (lo, hi].

    None stands for an infinite endpoint.  Rejects the zero polynomial.
    """
    if p.is_zero:
        raise ValueError("root counting on the zero polynomial")
    if p.degree == 0:
        return 0
    sq = squarefree_part(p)
    if sq != p.monic():
        raise ValueError("input must be squarefree")
    sym = sq.to_sympy()
    lo_s = None if lo is None else sp.Rational(lo.numerator, lo.denominator)
    hi_s = None if hi is None else sp.Rational(hi.numerator, hi.denominator)
    count = sym.count_roots(lo_s, hi_s)  # closed interval [lo, hi]
    if lo is not None and sq(lo) == 0:
        count -= 1
    return int(count)


def factor_poly(p: PolyQ) -> tuple[Fraction, list[tuple[PolyQ, int]]]:
    """Factor over Q into irreducibles: returns (constant, [(monic factor, power)])."""
    if p.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    const, factors = p.to_sympy().factor_list()
    out = []
    lead = _as_fraction(const)
    for f, e in factors:
        fq = PolyQ.from_sympy(f)
        lc = fq.leading
        lead *= lc ** e
        out.append((fq.monic(), int(e)))
    return lead, out


def isolating_intervals(p: PolyQ) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational isolating intervals, one per distinct real root,
    sorted increasingly.  Works on any nonzero polynomial."""
    sq = squarefree_part(p)
    out = []
    for (a, b), _ in sq.to_sympy().intervals():
        out.append((_as_fraction(a), _as_fraction(b)))
    return out


def refine_isolating_interval(p: PolyQ, lo: Fraction, hi: Fraction,
                              width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of squarefree p down to the given width."""
    flo = p(lo)
    if flo == 0:
        return lo, lo
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = p(mid)
        if fm == 0:
            return mid, mid
        if (flo > 0) == (fm > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


# ---------------------------------------------------------------------------
# rational matrices
# ---------------------------------------------------------------------------


class MatrixQ:
    """Immutable dense matrix over Q."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows_data: Sequence[Sequence], *, cols: int | None = None):
        data = tuple(tuple(_as_fraction(x) for x in row) for row in rows_data)
        if data and any(len(r) != len(data[0]) for r in data):
            raise ValueError("ragged matrix data")
        ncols = len(data[0]) if data else (0 if cols is None else cols)
        if data and cols is not None and cols != ncols:
            raise ValueError("cols override conflicts with row data")
        object.__setattr__(self, "rows", len(data))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", data)

    def __setattr__(self, *a):
        raise AttributeError("MatrixQ is immutable")

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(m: int, n: int) -> "MatrixQ":
        return MatrixQ([[0] * n for _ in range(m)], cols=n)

    @staticmethod
    def identity(n: int) -> "MatrixQ":
        return MatrixQ([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def block_diag(blocks: Sequence["MatrixQ"]) -> "MatrixQ":
        m = sum(b.rows for b in blocks)
        n = sum(b.cols for b in blocks)
        out = [[Fraction(0)] * n for _ in range(m)]
        ro = co = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[ro + i][co + j] = b.entries[i][j]
            ro += b.rows
            co += b.cols
        return MatrixQ(out, cols=n)

    # -- accessors -----------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i) -> tuple:
        return self.entries[i]

    def __eq__(self, other):
        return (isinstance(other, MatrixQ) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"MatrixQ({self.rows}x{self.cols}: {body})"

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "MatrixQ") -> "MatrixQ":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return MatrixQ([[a + b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.entries, other.entries)],
                       cols=self.cols)

    def __sub__(self, other: "MatrixQ") -> "MatrixQ":
        return self + (other * Fraction(-1))

    def __mul__(self, c) -> "MatrixQ":
        c = _as_fraction(c)
        return MatrixQ([[x * c for x in row] for row in self.entries],
                       cols=self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other: "MatrixQ") -> "MatrixQ":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.transpose().entries
        return MatrixQ([[sum(a * b for a, b in zip(row, col)) for col in ot]
                        for row in self.entries], cols=other.cols)

    def transpose(self) -> "MatrixQ":
        return MatrixQ([[self.entries[i][j] for i in range(self.rows)]
                        for j in range(self.cols)], cols=self.rows)

    def hstack(self, other: "MatrixQ") -> "MatrixQ":
        if self.rows != other.rows:
            raise ValueError("dimension mismatch")
        return MatrixQ([list(r1) + list(r2)
                        for r1, r2 in zip(self.entries, other.entries)],
                       cols=self.cols + other.cols)

    def vstack(self, other: "MatrixQ") -> "MatrixQ":
        return self.transpose().hstack(other.transpose()).transpose()

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "MatrixQ":
        return MatrixQ([[self.entries[i][j] for j in col_idx] for i in row_idx],
                       cols=len(tuple(col_idx)))

    def to_float(self):
        import numpy as np
        out = np.zeros((self.rows, self.cols))
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                out[i, j] = float(x)
        return out

    def to_sympy(self) -> sp.Matrix:
        return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in row]
                          for row in self.entries])

    def norm_sq(self) -> Fraction:
        return sum((x * x for row in self.entries for x in row), Fraction(0))


def rank_exact(M: MatrixQ) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on an integer copy."""
    if M.rows == 0 or M.cols == 0:
        return 0
    rows = []
    for r in M.entries:
        den = 1
        for x in r:
            den = den * x.denominator // _gcd(den, x.denominator)
        rows.append([int(x * den) for x in r])
    m, n = len(rows), len(rows[0])
    rank = 0
    prev = 1
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        for i in range(rank + 1, m):
            fi = rows[i][col]
            for j in range(col, n):
                rows[i][j] = (rows[i][j] * pv - fi * rows[rank][j]) // prev
        prev = pv
        rank += 1
        if rank == m:
            break
    return rank


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def det_exact(M: MatrixQ) -> Fraction:
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return Fraction(1)
    a = [list(row) for row in M.entries]
    sign = 1
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        pv = a[col][col]
        det *= pv
        for i in range(col + 1, n):
            f = a[i][col] / pv
            if f == 0:
                continue
            for j in range(col, n):
                a[i][j] -= f * a[col][j]
    return det * sign


def rref(M: MatrixQ) -> tuple[MatrixQ, list[int]]:
    """Reduced row echelon form over Q; returns (R, pivot column indices)."""
    a = [list(row) for row in M.entries]
    m, n = M.rows, M.cols
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][col]
        a[r] = [x / pv for x in a[r]]
        for i in range(m):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return MatrixQ(a) if m else M, pivots


def nullspace(M: MatrixQ) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space over Q."""
    R, pivots = rref(M)
    n = M.cols
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -R.entries[r][f]
        basis.append(tuple(v))
    return basis


def rank_factorization(M: MatrixQ) -> tuple[MatrixQ, MatrixQ]:
    """Exact M = C @ F with C of full column rank r and F of full row rank r."""
    R, pivots = rref(M)
    r = len(pivots)
    if r == 0:
        return MatrixQ.zero(M.rows, 0), MatrixQ.zero(0, M.cols)
    C = M.submatrix(range(M.rows), pivots)
    F = R.submatrix(range(r), range(M.cols))
    return C, F


def solve_exact(A: MatrixQ, b: Sequence[Fraction]) -> list[Fraction] | None:
    """One exact solution of A x = b, or None if inconsistent."""
    aug = A.hstack(MatrixQ([[x] for x in b]))
    R, pivots = rref(aug)
    if A.cols in pivots:
        return None
    x = [Fraction(0)] * A.cols
    for r, p in enumerate(pivots):
        x[p] = R.entries[r][A.cols]
    return x


# ---------------------------------------------------------------------------
# polynomial matrices and the Smith normal form
# ---------------------------------------------------------------------------

PolyMatrix = list[list[PolyQ]]


def poly_matrix(entries: Sequence[Sequence]) -> PolyMatrix:
    out = []
    for row in entries:
        out.append([e if isinstance(e, PolyQ) else PolyQ([e]) for e in row])
    return out


def pencil_matrix(A: MatrixQ, B: MatrixQ) -> PolyMatrix:
    """The polynomial matrix A + x*B."""
    return [[PolyQ([A.entries[i][j], B.entries[i][j]]) for j in range(A.cols)]
            for i in range(A.rows)]


def poly_det(M: PolyMatrix) -> PolyQ:
    """Determinant by cofactor expansion with memoization (small matrices)."""
    n = len(M)
    if n == 0:
        return PolyQ([1])
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    cols = tuple(range(n))
    cache: dict[tuple[int, tuple[int, ...]], PolyQ] = {}

    def rec(i: int, cs: tuple[int, ...]) -> PolyQ:
        if not cs:
            return PolyQ([1])
        key = (i, cs)
        if key in cache:
            return cache[key]
        acc = PolyQ()
        for k, j in enumerate(cs):
            e = M[i][j]
            if e.is_zero:
                continue
            sub = rec(i + 1, cs[:k] + cs[k + 1:])
            term = e * sub
            acc = acc + term if k % 2 == 0 else acc - term
        cache[key] = acc
        return acc

    return rec(0, cols)


def _minor_gcds(M: PolyMatrix) -> list[PolyQ]:
    """Determinant divisors d_1, d_2, ... (monic gcd of all j x j minors),
    truncated at the first identically-zero order."""
    m, n = len(M), len(M[0]) if M else 0
    out = []
    for k in range(1, min(m, n) + 1):
        g = PolyQ()
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                sub = [[M[i][j] for j in ci] for i in ri]
                g = poly_gcd(g, poly_det(sub))
                if g.degree == 0:
                    break
            if g.degree == 0:
                break
        if g.is_zero:
            break
        out.append(g.monic())
    return out


def smith_form_minors(M: PolyMatrix) -> list[PolyQ]:
    """Invariant factors via determinant divisors (independent slow path)."""
    d = _minor_gcds(M)
    out = []
    prev = PolyQ([1])
    for dk in d:
        out.append(dk.exact_div(prev).monic())
        prev = dk
    return out


def smith_form(M: PolyMatrix) -> list[PolyQ]:
    """Monic invariant factors s_1 | s_2 | ... of a polynomial matrix,
    ascending, via elementary row/column operations over Q[x].

    For matrices up to 4x4 the determinant-divisor chain is recomputed
    independently and asserted equal, catching transformation bugs.
    """
    a = [row[:] for row in M]
    m = len(a)
    n = len(a[0]) if a else 0
    out: list[PolyQ] = []
    k = 0
    while k < min(m, n):
        # locate a nonzero entry of minimal degree in the trailing block
        piv = None
        best = None
        for i in range(k, m):
            for j in range(k, n):
                e = a[i][j]
                if not e.is_zero and (best is None or e.degree < best):
                    best = e.degree
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        a[k], a[pi] = a[pi], a[k]
        for row in a:
            row[k], row[pj] = row[pj], row[k]
        while True:
            p = a[k][k]
            dirty = False
            for i in range(k + 1, m):
                if a[i][k].is_zero:
                    continue
                q, r = a[i][k].divmod(p)
                for j in range(k, n):
                    a[i][j] = a[i][j] - q * a[k][j]
                if not r.is_zero:
                    a[k], a[i] = a[i], a[k]
                    dirty = True
                    break
            if dirty:
                continue
            for j in range(k + 1, n):
                if a[k][j].is_zero:
                    continue
                q, r = a[k][j].divmod(p)
                for row in a:
                    row[j] = row[j] - q * row[k]
                if not r.is_zero:
                    for row in a:
                        row[k], row[j] = row[j], row[k]
                    dirty = True
                    break
            if dirty:
                continue
            # pivot must divide every remaining entry
            offender = None
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if not (a[i][j] % p).is_zero:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            for j in range(k, n):
                a[k][j] = a[k][j] + a[offender][j]
        out.append(a[k][k].monic())
        k += 1
    if min(m, n) <= 4:
        check = smith_form_minors(M)
        assert out == check, "Smith form disagrees with determinant divisors"
    return out


# ---------------------------------------------------------------------------
# number fields Q[x]/(h)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NumberFieldElem:
    """Element of Q[x]/(h) with h monic irreducible over Q."""

    min_poly: PolyQ
    residue: PolyQ

    def __post_init__(self):
        if self.min_poly.is_zero or self.min_poly.leading != 1:
            raise ValueError("minimal polynomial must be monic")
        object.__setattr__(self, "residue", self.residue % self.min_poly)

    @staticmethod
    def generator(h: PolyQ) -> "NumberFieldElem":
        return NumberFieldElem(h, PolyQ.x())

    @staticmethod
    def from_rational(h: PolyQ, c) -> "NumberFieldElem":
        return NumberFieldElem(h, PolyQ([c]))

    def _coerce(self, other) -> "NumberFieldElem":
        if isinstance(other, NumberFieldElem):
            if other.min_poly != self.min_poly:
                raise ValueError("mixed minimal polynomials")
            return other
        return NumberFieldElem(self.min_poly, PolyQ([_as_fraction(other)]))

    @property
    def is_zero(self) -> bool:
        return self.residue.is_zero

    def __add__(self, other):
        o = self._coerce(other)
        return NumberFieldElem(self.min_poly, self.residue + o.residue)

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElem(self.min_poly, -self.residue)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return NumberFieldElem(self.min_poly, (self.residue * o.residue) % self.min_poly)

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElem":
        if self.is_zero:
            raise ZeroDivisionError("inverting zero field element")
        g, u, _ = poly_xgcd(self.residue, self.min_poly)
        if g.degree != 0:
            raise ValueError("minimal polynomial is not irreducible")
        return NumberFieldElem(self.min_poly, u * (1 / g.coeffs[0]) % self.min_poly)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def eval_at(self, root) -> complex:
        """Numeric image under the embedding sending the generator to root."""
        return self.residue(root)


def rank_over_number_field(M: Sequence[Sequence[NumberFieldElem]]) -> int:
    """Exact rank of a matrix over Q[x]/(h) by Gaussian elimination.

    All entries must share the same minimal polynomial.
    """
    rows = [list(r) for r in M]
    if not rows or not rows[0]:
        return 0
    h = rows[0][0].min_poly
    for r in rows:
        for e in r:
            if e.min_poly != h:
                raise ValueError("mixed minimal polynomials")
    m, n = len(rows), len(rows[0])
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, m) if not rows[i][col].is_zero), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        for i in range(rank + 1, m):
            if rows[i][col].is_zero:
                continue
            f = rows[i][col] * inv
            rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == m:
            break
    return rank


def matrix_over_field(A: MatrixQ, B: MatrixQ, h: PolyQ,
                      coeff_a=1, coeff_b=None) -> list[list[NumberFieldElem]]:
    """coeff_a*A + coeff_b*B with entries in Q[x]/(h); coeff_b defaults to the
    field generator (so the default is A + x*B)."""
    gen = NumberFieldElem.generator(h)
    ca = gen._coerce(coeff_a) if isinstance(coeff_a, NumberFieldElem) else \
        NumberFieldElem.from_rational(h, coeff_a)
    cb = coeff_b if isinstance(coeff_b, NumberFieldElem) else (
        gen if coeff_b is None else NumberFieldElem.from_rational(h, coeff_b))
    return [[ca * A.entries[i][j] + cb * B.entries[i][j] for j in range(A.cols)]
            for i in range(A.rows)]
