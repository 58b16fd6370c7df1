"""Canonical pencil blocks: Jordan, infinite, singular and real-quadratic.

Conventions:
  - ``J(m, a) = a*E_m + H_m`` with ``H_m`` the upper shift; the pencil
    ``J(m, a) + lambda*E_m`` carries the finite elementary divisor
    ``(a + lambda)^m`` (eigenvalue ``-a``).
  - ``N(v) = E_v + lambda*H_v`` carries one infinite divisor of degree v.
  - ``L(k)`` is the k x (k+1) singular block with lambda on the diagonal and
    ones on the superdiagonal; ``R(l)`` is its transpose.
  - ``Q2k(k, a, b)`` is the real 2k x 2k block whose pencil
    ``Q2k + lambda*E`` carries the divisor ((lambda + a)^2 + b^2)^k, i.e. the
    conjugate eigenvalue pair ``-a ± i*b`` with b != 0.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import MatrixQ
from .kcf import Pencil, direct_sum


def identity(n: int) -> MatrixQ:
    return MatrixQ.identity(n)


def upper_shift(n: int) -> MatrixQ:
    """H_n: ones on the first superdiagonal."""
    return MatrixQ([[1 if j == i + 1 else 0 for j in range(n)] for i in range(n)])


def jordan_matrix(m: int, a) -> MatrixQ:
    """J_m(a) = a*E_m + H_m."""
    return identity(m) * Fraction(a) + upper_shift(m)


def jordan_pencil(m: int, a) -> Pencil:
    """J_m(a) + lambda*E_m: divisor (a + lambda)^m."""
    return Pencil(jordan_matrix(m, a), identity(m))


def infinite_pencil(v: int) -> Pencil:
    """N_v(lambda) = E_v + lambda*H_v: one infinite divisor of degree v."""
    return Pencil(identity(v), upper_shift(v))


def l_block(k: int) -> Pencil:
    """L_k(lambda), k x (k+1): minimal column index k (k = 0 gives a zero column)."""
    A = MatrixQ([[1 if j == i + 1 else 0 for j in range(k + 1)] for i in range(k)],
                cols=k + 1)
    B = MatrixQ([[1 if j == i else 0 for j in range(k + 1)] for i in range(k)],
                cols=k + 1)
    return Pencil(A, B)


def r_block(l: int) -> Pencil:
    """R_l(lambda) = L_l(lambda)^T, (l+1) x l: minimal row index l."""
    return l_block(l).transpose()


def q_matrix(k: int, a, b) -> MatrixQ:
    """Real canonical 2k x 2k matrix with eigenvalue pair a ± i*b repeated k
    times in a single real Jordan chain: kron(E_k, [[a, b], [-b, a]]) plus
    kron(H_k, E_2)."""
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        raise ValueError("q block requires b != 0")
    rows = [[Fraction(0)] * (2 * k) for _ in range(2 * k)]
    for i in range(k):
        rows[2 * i][2 * i] = a
        rows[2 * i][2 * i + 1] = b
        rows[2 * i + 1][2 * i] = -b
        rows[2 * i + 1][2 * i + 1] = a
        if i + 1 < k:
            rows[2 * i][2 * i + 2] = Fraction(1)
            rows[2 * i + 1][2 * i + 3] = Fraction(1)
    return MatrixQ(rows)


def q_pencil(k: int, a, b) -> Pencil:
    """Q_2k(a, b) + lambda*E_2k: divisor ((lambda + a)^2 + b^2)^k, i.e. the
    conjugate pair -a ± i*b."""
    return Pencil(q_matrix(k, a, b), identity(2 * k))


def scalar_pencil(a) -> Pencil:
    """The 1 x 1 pencil a + lambda."""
    return Pencil(MatrixQ([[a]]), MatrixQ([[1]]))


__all__ = [
    "identity", "upper_shift", "jordan_matrix", "jordan_pencil",
    "infinite_pencil", "l_block", "r_block", "q_matrix", "q_pencil",
    "scalar_pencil", "direct_sum",
]
