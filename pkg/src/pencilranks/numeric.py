"""Floating-point Kronecker structure extraction with an explicit rank
tolerance, the numeric companion of the exact routines in ``kcf``.

All rank decisions compare singular values against an absolute threshold
``tolerance * norm`` with ``norm`` the Frobenius norm of the input pencil.
Decisions that come within a factor 10 of the threshold are reported as
warning flags on the result, never silenced.

Eigenvalues of the regular part are found by verified random projections:
the eigenvalues of U (A + lambda B) V for random slim U, V contain every
regular eigenvalue of the pencil (generically), and each candidate is kept
only if it produces an actual rank drop.  Candidates are clustered at
relative distance 100 * tolerance and matched into conjugate pairs.
Divisor powers at a point come from nullities of the block Toeplitz
matrices with the evaluated pencil on the diagonal and its direction
derivative on the superdiagonal; the contribution of the singular part to
those nullities (one per minimal column index and Toeplitz order) is
subtracted.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
import scipy.linalg

from .kcf import KroneckerStructure


@dataclass(frozen=True)
class FloatPencil:
    A: np.ndarray
    B: np.ndarray
    tolerance: float = 1e-8

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        B = np.asarray(self.B, dtype=float)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if A.shape != B.shape or A.ndim != 2:
            raise ValueError("A and B must be float matrices of equal shape")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def norm(self) -> float:
        return float(np.hypot(np.linalg.norm(self.A), np.linalg.norm(self.B)))


@dataclass(frozen=True)
class NumericEigenvalue:
    """kind is "real" (value on the real axis) or "complex_pair" (value the
    upper-half representative of a conjugate pair)."""

    kind: str
    value: complex


@dataclass(frozen=True)
class NumericStructure:
    """Float mirror of KroneckerStructure, plus warning flags."""

    normal_rank: int
    min_col_indices: tuple[int, ...]
    min_row_indices: tuple[int, ...]
    finite_divisors: tuple[tuple[NumericEigenvalue, int], ...]
    infinite_divisor_degrees: tuple[int, ...]
    warnings: tuple[str, ...] = ()

    @property
    def regular_dimension(self) -> int:
        q = sum(self.infinite_divisor_degrees)
        for ev, power in self.finite_divisors:
            q += (2 if ev.kind == "complex_pair" else 1) * power
        return q


class _RankContext:
    """Shared threshold for all rank decisions on one pencil, collecting
    near-threshold warnings."""

    def __init__(self, scale: float, tolerance: float):
        self.threshold = tolerance * max(scale, np.finfo(float).tiny)
        self.warnings: list[str] = []

    def rank(self, M: np.ndarray, what: str) -> int:
        if min(M.shape) == 0:
            return 0
        sigma = np.linalg.svd(M, compute_uv=False)
        near = [s for s in sigma
                if self.threshold / 10 <= s <= self.threshold * 10]
        if near:
            self.warnings.append(
                f"ill-conditioned rank decision ({what}): singular value "
                f"{near[0]:.3e} within a factor 10 of threshold "
                f"{self.threshold:.3e}")
        return int(np.sum(sigma > self.threshold))


def _evaluate(P: FloatPencil, alpha: complex, beta: complex) -> np.ndarray:
    return alpha * P.A + beta * P.B


def _normal_rank(P: FloatPencil, ctx: _RankContext, rng) -> int:
    best = 0
    for _ in range(min(P.m, P.n) + 2):
        theta = rng.uniform(0, np.pi)
        M = _evaluate(P, np.cos(theta), np.sin(theta))
        best = max(best, ctx.rank(M, "normal rank"))
        if best == min(P.m, P.n):
            break
    return best


def _expansion_rank(P: FloatPencil, j: int, ctx: _RankContext) -> int:
    """Float version of the degree-j column expansion matrix: block row i of
    the (j+2) x (j+1) grid carries A at (i, i) and B at (i+1, i)."""
    m, n = P.m, P.n
    M = np.zeros(((j + 2) * m, (j + 1) * n))
    for blk in range(j + 1):
        M[blk * m:(blk + 1) * m, blk * n:(blk + 1) * n] = P.A
        M[(blk + 1) * m:(blk + 2) * m, blk * n:(blk + 1) * n] = P.B
    return ctx.rank(M, f"expansion degree {j}")


def _minimal_indices(P: FloatPencil, R: int, ctx: _RankContext):
    def col_indices(Q: FloatPencil, total: int) -> tuple[int, ...]:
        out: list[int] = []
        prev_nullity = 0
        j = 0
        while len(out) < total:
            if j > Q.A.shape[1] + 1:
                ctx.warnings.append("minimal-index extraction did not "
                                    "terminate; structure is unreliable")
                out.extend([j] * (total - len(out)))
                break
            nullity = (j + 1) * Q.n - _expansion_rank(Q, j, ctx)
            out.extend([j] * (nullity - prev_nullity - len(out)))
            prev_nullity = nullity
            j += 1
        return tuple(out)

    cols = col_indices(P, P.n - R)
    Pt = FloatPencil(P.A.T, P.B.T, P.tolerance)
    rows = col_indices(Pt, P.m - R)
    return cols, rows


def _to_projective(lam: complex) -> np.ndarray:
    """Unit homogeneous coordinates (alpha, beta) of the point lambda =
    beta / alpha, with alpha real positive."""
    norm = (1 + abs(lam) ** 2) ** 0.5
    return np.array([1 / norm, lam / norm], dtype=complex)


_INFINITY = np.array([0.0, 1.0], dtype=complex)


def _chordal(u: np.ndarray, v: np.ndarray) -> float:
    """Chordal distance of unit homogeneous points; agrees with the relative
    eigenvalue distance for moderate points and is finite at infinity."""
    return float(abs(u[0] * v[1] - u[1] * v[0]))


def _candidate_points(P: FloatPencil, R: int, rng) -> list[np.ndarray]:
    """Eigenvalue candidates on the projective line: from two independent
    random normal-rank projections U (A + lambda B) V (every regular
    eigenvalue appears among the projected eigenvalues with probability
    one), plus the point at infinity."""
    if R == 0:
        return []
    cands = [_INFINITY]
    for _ in range(2):
        U = rng.standard_normal((R, P.m))
        V = rng.standard_normal((P.n, R))
        try:
            vals = scipy.linalg.eig(U @ P.A @ V, -(U @ P.B @ V), right=False)
        except (ValueError, np.linalg.LinAlgError):
            continue
        for lam in vals:
            if np.isfinite(lam.real) and np.isfinite(lam.imag):
                cands.append(_to_projective(complex(lam)))
    return cands


def _rank_drops_at(P: FloatPencil, u: np.ndarray, R: int,
                   ctx: _RankContext) -> bool:
    M = _evaluate(P, u[0], u[1])
    if abs(u[0].imag) < 1e-300 and abs(u[1].imag) < 1e-300:
        M = M.real
    sigma = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(sigma > ctx.threshold)) < R


def _projective_midpoint(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    ip = np.vdot(u, v)
    if abs(ip) > 0:
        v = v * (np.conj(ip) / abs(ip))
    mid = u + v
    return mid / np.linalg.norm(mid)


_MERGE_REACH = 0.1


def _merge_candidates(P: FloatPencil, points: list[np.ndarray], R: int,
                      ctx: _RankContext, radius: float) \
        -> list[list[np.ndarray]]:
    """Group verified candidates that represent one eigenvalue.  A multiple
    eigenvalue perturbed at magnitude eps splits into points roughly
    eps^(1/e) apart — far beyond the clustering radius — but the whole
    splitting disc keeps the rank low, so two candidates are merged when the
    rank also drops at their chordal midpoint (checked within a bounded
    reach)."""
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if find(i) == find(j):
                continue
            gap = _chordal(points[i], points[j])
            if gap <= radius or (
                    gap <= _MERGE_REACH and _rank_drops_at(
                        P, _projective_midpoint(points[i], points[j]), R, ctx)):
                parent[find(i)] = find(j)
    groups: dict[int, list[np.ndarray]] = {}
    for i, p in enumerate(points):
        groups.setdefault(find(i), []).append(p)
    return list(groups.values())


def _toeplitz_nullity(M: np.ndarray, D: np.ndarray, j: int,
                      ctx: _RankContext) -> int:
    """Nullity of the j x j block Toeplitz with M on the diagonal and the
    direction derivative D on the superdiagonal."""
    m, n = M.shape
    T = np.zeros((j * m, j * n), dtype=M.dtype)
    for blk in range(j):
        T[blk * m:(blk + 1) * m, blk * n:(blk + 1) * n] = M
        if blk + 1 < j:
            T[blk * m:(blk + 1) * m, (blk + 1) * n:(blk + 2) * n] = D
    return j * n - ctx.rank(T, f"Toeplitz order {j}")


def _divisor_powers(P: FloatPencil, alpha: complex, beta: complex, R: int,
                    n_cols: int, q: int, ctx: _RankContext) -> list[int]:
    """Powers of the elementary divisors at the projective point (alpha,
    beta), via Toeplitz nullity differences.  Each minimal column index
    inflates the order-j nullity by exactly j, hence the n_cols correction."""
    M = _evaluate(P, alpha, beta)
    D = _evaluate(P, -np.conj(beta), np.conj(alpha))
    if np.isrealobj(np.array([alpha, beta])):
        M, D = M.real, D.real
    drop = R - ctx.rank(M, "eigenvalue verification")
    if drop <= 0:
        return []
    counts = []  # counts[j-1] = number of divisors with power >= j
    prev = 0
    j = 1
    while j <= q + 1:
        nullity = _toeplitz_nullity(M, D, j, ctx)
        count_ge = (nullity - prev) - n_cols
        if count_ge <= 0:
            break
        counts.append(count_ge)
        prev = nullity
        j += 1
    powers = []
    for i, c in enumerate(counts):
        nxt = counts[i + 1] if i + 1 < len(counts) else 0
        powers.extend([i + 1] * (c - nxt))
    return sorted(powers, reverse=True)


def staircase_structure(P: FloatPencil, seed: int = 2024) -> NumericStructure:
    """Kronecker structure of a float pencil at the pencil's tolerance."""
    ctx = _RankContext(P.norm(), P.tolerance)
    rng = np.random.default_rng(seed)
    R = _normal_rank(P, ctx, rng)
    cols, rows = _minimal_indices(P, R, ctx)
    q = R - sum(cols) - sum(rows)
    n_cols = len(cols)

    radius = 100 * P.tolerance
    finite: list[tuple[NumericEigenvalue, int]] = []
    infinite: list[int] = []
    if q > 0:
        verified = [u for u in _candidate_points(P, R, rng)
                    if _rank_drops_at(P, u, R, ctx)]
        for group in _merge_candidates(P, verified, R, ctx, radius):
            if any(abs(u[0]) < 1e-12 for u in group):
                # contains the point at infinity
                infinite = _divisor_powers(P, 0.0, 1.0, R, n_cols, q, ctx)
                continue
            # groups are conjugate-symmetric for real eigenvalues (the
            # projected pencils are real), so the mean lands on the axis;
            # a genuine pair yields two mirror groups, the lower skipped
            lam = complex(np.mean([u[1] / u[0] for u in group]))
            if abs(lam.imag) <= radius * max(1.0, abs(lam)):
                lam = complex(lam.real, 0.0)
            elif lam.imag < 0:
                continue
            u = _to_projective(lam)
            alpha, beta = u[0], u[1]
            if lam.imag == 0:
                alpha, beta = float(alpha.real), float(beta.real)
            powers = _divisor_powers(P, alpha, beta, R, n_cols, q, ctx)
            kind = "real" if lam.imag == 0 else "complex_pair"
            for e in powers:
                finite.append((NumericEigenvalue(kind, lam), e))

    used = sum((2 if ev.kind == "complex_pair" else 1) * e
               for ev, e in finite) + sum(infinite)
    if used != q:
        ctx.warnings.append(
            f"structure budget mismatch: regular part has dimension {q} but "
            f"divisors account for {used}")
    return NumericStructure(
        normal_rank=R,
        min_col_indices=cols,
        min_row_indices=rows,
        finite_divisors=tuple(sorted(
            finite, key=lambda t: (t[0].kind, t[0].value.real,
                                   t[0].value.imag, -t[1]))),
        infinite_divisor_degrees=tuple(sorted(infinite)),
        warnings=tuple(dict.fromkeys(ctx.warnings)),
    )


def structures_match(ns: NumericStructure, ks: KroneckerStructure,
                     tolerance: float) -> bool:
    """Whether a numeric structure reproduces an exact one: equal normal
    rank, index multisets and infinite degrees, and a bijection between
    divisors matching kind, power and eigenvalue within the clustering
    radius 100 * tolerance (relative)."""
    if (ns.normal_rank != ks.normal_rank
            or tuple(sorted(ns.min_col_indices)) != tuple(sorted(ks.min_col_indices))
            or tuple(sorted(ns.min_row_indices)) != tuple(sorted(ks.min_row_indices))
            or tuple(sorted(ns.infinite_divisor_degrees))
            != tuple(sorted(ks.infinite_divisor_degrees))):
        return False
    radius = 100 * tolerance
    remaining = list(ns.finite_divisors)
    for desc, power in ks.finite_divisors:
        approx = desc.approx()
        kind = "complex_pair" if desc.kind == "complex_pair" else "real"
        target = approx if kind == "complex_pair" else complex(approx.real, 0)
        hit = None
        for i, (ev, e) in enumerate(remaining):
            if (ev.kind == kind and e == power
                    and abs(ev.value - target)
                    <= radius * max(1.0, abs(target))):
                hit = i
                break
        if hit is None:
            return False
        remaining.pop(hit)
    return not remaining


__all__ = [
    "FloatPencil", "NumericEigenvalue", "NumericStructure",
    "staircase_structure", "structures_match",
]
