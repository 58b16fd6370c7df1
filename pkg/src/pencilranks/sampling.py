"""Random generators for tests and experiments.

Pencils are sampled by assembling a random list of canonical blocks that fits
the requested dimensions and disguising it with random unimodular integer
matrices on both sides (so all structural invariants are known by
construction and arithmetic stays exact).
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import blocks
from .exact import MatrixQ
from .kcf import Pencil, direct_sum


def random_unimodular(rng: random.Random, n: int, steps: int | None = None) -> MatrixQ:
    """Integer matrix with determinant +/-1, built from elementary row ops."""
    if n == 0:
        return MatrixQ([])
    a = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    steps = 3 * n if steps is None else steps
    for _ in range(steps):
        op = rng.randrange(3)
        i, j = rng.randrange(n), rng.randrange(n)
        if op == 0 and i != j:
            c = rng.choice([-2, -1, 1, 2])
            for k in range(n):
                a[i][k] += c * a[j][k]
        elif op == 1 and i != j:
            a[i], a[j] = a[j], a[i]
        elif op == 2:
            a[i] = [-x for x in a[i]]
    return MatrixQ(a)


def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, bound)
    return Fraction(num, den)


def random_gl2(rng: random.Random, bound: int = 4):
    """Random invertible 2x2 rational transform as a (t11, t12, t21, t22) tuple."""
    while True:
        t = tuple(random_rational(rng, bound) for _ in range(4))
        if t[0] * t[3] - t[1] * t[2] != 0:
            return t


def _block_choices(dm: int, dn: int, rng: random.Random):
    """All canonical blocks fitting in a remaining (dm, dn) corner."""
    out = []
    for k in range(0, dn):  # L_k is k x (k+1)
        if k <= dm and k + 1 <= dn:
            out.append(("L", k))
    for l in range(0, dm):  # R_l is (l+1) x l
        if l + 1 <= dm and l <= dn:
            out.append(("R", l))
    for sz in range(1, min(dm, dn) + 1):
        out.append(("J", sz))
        out.append(("N", sz))
    for k2 in range(1, min(dm, dn) // 2 + 1):
        out.append(("Q", k2))
    return out


def _build_block(tag: str, size: int, rng: random.Random) -> Pencil:
    if tag == "L":
        return blocks.l_block(size)
    if tag == "R":
        return blocks.r_block(size)
    if tag == "J":
        return blocks.jordan_pencil(size, random_rational(rng, 3))
    if tag == "N":
        return blocks.infinite_pencil(size)
    if tag == "Q":
        a = random_rational(rng, 3)
        b = Fraction(0)
        while b == 0:
            b = random_rational(rng, 3)
        return blocks.q_pencil(size, a, b)
    raise ValueError(tag)


def random_canonical_pencil(rng: random.Random, m: int, n: int,
                            max_tries: int = 200) -> Pencil:
    """Random direct sum of canonical blocks of total size exactly m x n."""
    for _ in range(max_tries):
        dm, dn = m, n
        recipe: list[tuple[str, int]] = []
        while dm > 0 or dn > 0:
            choices = _block_choices(dm, dn, rng)
            if dm > 0 and dn == 0:
                choices = [("R", 0)]
            if dn > 0 and dm == 0:
                choices = [("L", 0)]
            if not choices:
                break
            tag, size = rng.choice(choices)
            p = _build_block(tag, size, rng)
            dm -= p.m
            dn -= p.n
            recipe.append((tag, size))
        if dm == 0 and dn == 0 and recipe:
            return direct_sum([_build_block(t, s, rng) for t, s in recipe])
    raise RuntimeError(f"could not fit canonical blocks into {m}x{n}")


def random_pencil(rng: random.Random, m: int, n: int,
                  disguise: bool = True) -> Pencil:
    """Random pencil with known-by-construction Kronecker structure class."""
    P = random_canonical_pencil(rng, m, n)
    if not disguise:
        return P
    L = random_unimodular(rng, m)
    U = random_unimodular(rng, n)
    return P.left_right(L, U)
