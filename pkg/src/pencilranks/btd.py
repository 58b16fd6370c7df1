"""Block-term decompositions of m x n x 2 tensors and ill-posed
best-approximation experiments.

A pencil A + lambda*B is identified with the tensor A (x) e1 + B (x) e2;
the Frobenius norms agree.  A pencil with minimal ranks (r, s) admits an
exact decomposition (U V^T) (x) w + (X Y^T) (x) z with rank factors r and s
and {w, z} a basis of the plane, built here from the attaining transform.

Approximation over the set of pencils with minimal ranks at most (r, s) is
performed by alternating least squares with exact block updates (objective
monotone non-increasing).  The module also constructs the two explicit
sequences showing that the approximation problem can lack a minimizer: the
P_n template built from factor stacks, and the Z_p perturbations of an even
Jordan block, both with exact rational invariants.

The ALS sweep runs on a compiled Cython kernel when available and falls back
to a pure-numpy implementation (select explicitly with the environment
variable PENCILRANKS_ALS_BACKEND=cython|python).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import _als_py
from .blocks import identity, jordan_matrix, q_matrix
from .exact import MatrixQ, rank_factorization
from .kcf import Pencil
from .minranks import MinimalRanks, attain_transform, in_c, minimal_ranks


def _load_backend():
    choice = os.environ.get("PENCILRANKS_ALS_BACKEND", "auto")
    if choice not in ("auto", "cython", "python"):
        raise ValueError("PENCILRANKS_ALS_BACKEND must be auto, cython or python")
    if choice in ("auto", "cython"):
        try:
            from . import _als as kernel  # compiled extension

            return kernel, "cython"
        except ImportError:
            if choice == "cython":
                raise
    return _als_py, "python"


_KERNEL, ALS_BACKEND = _load_backend()


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tensor3:
    """Dense m x n x d tensor of floats."""

    entries: np.ndarray

    def __post_init__(self):
        if self.entries.ndim != 3:
            raise ValueError("Tensor3 requires a 3-way array")

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.entries.shape

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def slice(self, k: int) -> np.ndarray:
        return self.entries[:, :, k]


def pencil_to_tensor(P) -> Tensor3:
    """A (x) e1 + B (x) e2.  Accepts exact pencils or (A, B) float arrays."""
    if isinstance(P, Pencil):
        A, B = P.to_float()
    else:
        A, B = np.asarray(P[0], dtype=float), np.asarray(P[1], dtype=float)
    return Tensor3(np.stack([A, B], axis=2))


# ---------------------------------------------------------------------------
# decomposition states and logs
# ---------------------------------------------------------------------------


@dataclass
class BtdState:
    """Factors of (U V^T) (x) w + (X Y^T) (x) z."""

    U: np.ndarray
    V: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    w: np.ndarray
    z: np.ndarray
    objective: float = 0.0
    iteration: int = 0

    @property
    def r(self) -> int:
        return self.U.shape[1]

    @property
    def s(self) -> int:
        return self.X.shape[1]

    def reconstruction(self) -> np.ndarray:
        M1, M2 = self.U @ self.V.T, self.X @ self.Y.T
        return np.stack([self.w[k] * M1 + self.z[k] * M2 for k in range(2)],
                        axis=2)

    def max_factor_norm(self) -> float:
        return max(float(np.linalg.norm(F)) for F in (self.U, self.V,
                                                      self.X, self.Y))

    def cond_wz(self) -> float:
        return float(np.linalg.cond(np.column_stack([self.w, self.z])))

    def sigma_mins(self) -> tuple[float, float]:
        """Smallest structural singular value of each block product."""
        out = []
        for M, k in ((self.U @ self.V.T, self.r), (self.X @ self.Y.T, self.s)):
            if k == 0:
                out.append(0.0)
            else:
                out.append(float(np.linalg.svd(M, compute_uv=False)[k - 1]))
        return tuple(out)


@dataclass(frozen=True)
class LogRecord:
    iteration: int
    objective: float
    max_factor_norm: float
    cond_wz: float
    sigma_min_block1: float
    sigma_min_block2: float
    fallback: bool = False


@dataclass
class DivergenceLog:
    records: list[LogRecord] = dc_field(default_factory=list)

    def append(self, rec: LogRecord) -> None:
        self.records.append(rec)

    def __len__(self) -> int:
        return len(self.records)

    def objectives(self) -> list[float]:
        return [rec.objective for rec in self.records]


CSV_COLUMNS = ("trial", "iter", "objective", "max_factor_norm", "cond_wz",
               "sigma_min_block1", "sigma_min_block2")


def write_logs_csv(path, logs: dict) -> None:
    """One row per iteration per trial; keys of `logs` fill the trial column."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for trial, log in logs.items():
            for rec in log.records:
                writer.writerow([trial, rec.iteration, rec.objective,
                                 rec.max_factor_norm, rec.cond_wz,
                                 rec.sigma_min_block1, rec.sigma_min_block2])


# ---------------------------------------------------------------------------
# exact attaining decomposition
# ---------------------------------------------------------------------------


def btd_attaining(P: Pencil, field="real") -> BtdState:
    """A decomposition of pencil_to_tensor(P) whose block ranks equal the
    minimal ranks, from the attaining transform: the transformed matrices
    are rank-factorized and (w, z) are the columns of T^(-1)."""
    T, rho = attain_transform(P, field)
    if T.is_rational:
        t = np.array([[float(T.t11), float(T.t12)],
                      [float(T.t21), float(T.t22)]])
        A2 = P.A * T.t11 + P.B * T.t12
        B2 = P.A * T.t21 + P.B * T.t22
        C1, F1 = rank_factorization(A2)
        C2, F2 = rank_factorization(B2)
        U, V = C1.to_float(), F1.transpose().to_float()
        X, Y = C2.to_float(), F2.transpose().to_float()
    else:
        (t11, t12), (t21, t22) = T.row_floats()
        t = np.array([[float(t11), float(t12)], [float(t21), float(t22)]])
        A, B = P.to_float()
        U, V = _truncated_factorization(t[0, 0] * A + t[0, 1] * B, rho.r)
        X, Y = _truncated_factorization(t[1, 0] * A + t[1, 1] * B, rho.s)
    tinv = np.linalg.inv(t)
    state = BtdState(U=U, V=V, X=X, Y=Y, w=tinv[:, 0].copy(),
                     z=tinv[:, 1].copy())
    T3 = pencil_to_tensor(P)
    state.objective = float(np.linalg.norm(T3.entries - state.reconstruction()))
    scale = max(T3.norm(), 1.0)
    assert state.objective <= 1e-12 * scale, "reconstruction must be exact"
    return state


def _truncated_factorization(M: np.ndarray, k: int):
    u, s, vt = np.linalg.svd(M)
    return u[:, :k] * s[:k], vt[:k].T


# ---------------------------------------------------------------------------
# alternating least squares
# ---------------------------------------------------------------------------


def _initial_state(T: Tensor3, r: int, s: int, seed: int) -> BtdState:
    m, n, _ = T.dims
    rng = np.random.default_rng(seed)
    U, V = rng.standard_normal((m, r)), rng.standard_normal((n, r))
    X, Y = rng.standard_normal((m, s)), rng.standard_normal((n, s))
    state = BtdState(U=U, V=V, X=X, Y=Y,
                     w=np.array([1.0, 0.0]), z=np.array([0.0, 1.0]))
    scale = np.linalg.norm(state.reconstruction())
    if scale > 0:
        factor = (T.norm() / scale) ** 0.5 if T.norm() > 0 else 1.0
        state.U *= factor
        state.X *= factor
    state.objective = float(np.linalg.norm(T.entries - state.reconstruction()))
    return state


def _objective_sq(T0, T1, factors) -> float:
    U, V, X, Y, w, z = factors
    M1, M2 = U @ V.T, X @ Y.T
    R0 = T0 - w[0] * M1 - z[0] * M2
    R1 = T1 - w[1] * M1 - z[1] * M2
    return float(np.vdot(R0, R0) + np.vdot(R1, R1))


def _rebalance(state: BtdState) -> None:
    """Gauge fix: move the scale of (w, z) into the matrix factors so that
    factor norms reflect the size of the block terms.  Model-invariant."""
    for vec, F1, F2 in ((state.w, state.U, state.V),
                        (state.z, state.X, state.Y)):
        nv = float(np.linalg.norm(vec))
        if nv > 0:
            F1 *= nv ** 0.5
            F2 *= nv ** 0.5
            vec /= nv


_EXTRAPOLATE_EVERY = 5
_EXTRAPOLATE_MAX = 1000.0


def _try_extrapolation(T0, T1, state: BtdState, history: list,
                       current_sq: float) -> float:
    """Quadratic vector extrapolation through three equispaced past iterates,
    accepted only on objective decrease (so monotonicity is preserved).
    Plain ALS crawls along the curved degeneracy valley of ill-posed
    instances; following the fitted parabola jumps far along it."""
    from scipy.optimize import minimize_scalar

    S0, S1, S2 = history[0], history[_EXTRAPOLATE_EVERY], history[-1]
    curves = []
    for a0, a1, a2 in zip(S0, S1, S2):
        c2 = (a2 - 2 * a1 + a0) / 2
        curves.append((a0, a1 - a0 - c2, c2))

    def point(tau):
        return [a0 + c1 * tau + c2 * (tau * tau) for a0, c1, c2 in curves]

    res = minimize_scalar(lambda t: _objective_sq(T0, T1, point(t)),
                          bounds=(2.0, _EXTRAPOLATE_MAX), method="bounded",
                          options={"xatol": 1e-3})
    if res.fun < current_sq:
        for dst, src in zip((state.U, state.V, state.X, state.Y,
                             state.w, state.z), point(res.x)):
            dst[:] = src
        history.clear()
        return float(res.fun)
    return current_sq


def als_approximate(T: Tensor3, r: int, s: int, init=0,
                    max_iters: int = 1000, rel_tol: float = 0.0,
                    accelerate: bool = True) \
        -> tuple[BtdState, DivergenceLog]:
    """Best approximation of T by (U V^T) (x) w + (X Y^T) (x) z with block
    ranks (r, s), by cyclic exact least-squares updates (order U, V, X, Y,
    then joint (w, z)), optionally accelerated by quadratic extrapolation.
    The objective never increases; iteration stops at max_iters or when the
    relative decrease falls below rel_tol."""
    if not (r >= s >= 0):
        raise ValueError("block ranks must satisfy r >= s >= 0")
    m, n, d = T.dims
    if d != 2:
        raise ValueError("approximation is defined for m x n x 2 tensors")
    if r > min(m, n):
        raise ValueError("rank r exceeds min(m, n)")
    state = init if isinstance(init, BtdState) else _initial_state(T, r, s, init)
    T0 = np.ascontiguousarray(T.slice(0))
    T1 = np.ascontiguousarray(T.slice(1))
    log = DivergenceLog()
    prev = state.objective ** 2
    history: list = []
    for it in range(1, max_iters + 1):
        obj_sq, fb = _KERNEL.als_sweep(T0, T1, state.U, state.V, state.X,
                                       state.Y, state.w, state.z)
        if obj_sq < 0:  # compiled kernel hit a rank-deficient subproblem
            obj_sq, _ = _als_py.als_sweep(T0, T1, state.U, state.V, state.X,
                                          state.Y, state.w, state.z)
            fb = True
        if accelerate:
            history.append([a.copy() for a in (state.U, state.V, state.X,
                                               state.Y, state.w, state.z)])
            if len(history) > 2 * _EXTRAPOLATE_EVERY + 1:
                history.pop(0)
            if (it % _EXTRAPOLATE_EVERY == 0
                    and len(history) == 2 * _EXTRAPOLATE_EVERY + 1):
                obj_sq = _try_extrapolation(T0, T1, state, history, obj_sq)
        _rebalance(state)
        state.iteration = it
        state.objective = obj_sq ** 0.5
        s1, s2 = state.sigma_mins()
        log.append(LogRecord(it, state.objective, state.max_factor_norm(),
                             state.cond_wz(), s1, s2, fb))
        if rel_tol > 0 and prev > 0 and (prev - obj_sq) < rel_tol * prev:
            break
        prev = obj_sq
    return state, log


# ---------------------------------------------------------------------------
# the P_n sequence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PnSequence:
    """P(lambda) = (A C^T + B D^T) + lambda B C^T approximated by the exact
    members P_n = n[(B + A/n)(C + D/n)^T](1 + lambda/n) - n B C^T, which have
    minimal ranks at most (s', s') by construction.  When
    min{rank [A B], rank [C D]} > 3 s'/2 the limit has no best approximation
    in that set and the factor norms necessarily diverge (linearly here)."""

    A: MatrixQ
    B: MatrixQ
    C: MatrixQ
    D: MatrixQ

    @property
    def s_prime(self) -> int:
        return self.A.cols

    @property
    def cond_ex_holds(self) -> bool:
        from .exact import rank_exact

        ra = rank_exact(self.A.hstack(self.B))
        rc = rank_exact(self.C.hstack(self.D))
        return 2 * min(ra, rc) > 3 * self.s_prime

    @property
    def limit(self) -> Pencil:
        Ct, Dt = self.C.transpose(), self.D.transpose()
        return Pencil(self.A @ Ct + self.B @ Dt, self.B @ Ct)

    def term(self, n: int) -> Pencil:
        if n < 1:
            raise ValueError("sequence index must be >= 1")
        inv = Fraction(1, n)
        F1 = self.B + self.A * inv            # B + A/n
        F2 = (self.C + self.D * inv).transpose()
        M = F1 @ F2
        return Pencil(M * n - (self.B @ self.C.transpose()) * n, M)

    def distance(self, n: int) -> float:
        return float(self.term(n).dist_sq(self.limit)) ** 0.5

    def remainder_identity_holds(self, n: int) -> bool:
        """Exact check of the expansion
        P_n - P = (1/n)(A C^T lam + B D^T lam + A D^T) + (1/n^2) A D^T lam."""
        inv = Fraction(1, n)
        Ct, Dt = self.C.transpose(), self.D.transpose()
        diffA = (self.A @ Dt) * inv
        diffB = (self.A @ Ct + self.B @ Dt) * inv + (self.A @ Dt) * inv ** 2
        Pn, P = self.term(n), self.limit
        return Pn.A - P.A == diffA and Pn.B - P.B == diffB

    def max_factor_norm(self, n: int) -> float:
        """Largest factor norm in the explicit two-block decomposition of
        P_n: the blocks are n(B + A/n)(C + D/n)^T with vector (1, 1/n) and
        -n B C^T with vector (1, 0)."""
        inv = Fraction(1, n)
        factors = [(self.B + self.A * inv) * n, self.C + self.D * inv,
                   self.B * n, self.C]
        return max(float(F.norm_sq()) ** 0.5 for F in factors)


def sequence_pn(A: MatrixQ, B: MatrixQ, C: MatrixQ, D: MatrixQ) -> PnSequence:
    if not (A.rows == B.rows and C.rows == D.rows
            and A.cols == B.cols == C.cols == D.cols):
        raise ValueError("factor stacks must be m x s' and n x s'")
    return PnSequence(A, B, C, D)


# ---------------------------------------------------------------------------
# the Z_p sequence
# ---------------------------------------------------------------------------


def sequence_zp(k: int, a, p: int, q: tuple | None = None) \
        -> tuple[Pencil, Pencil]:
    """(Z_p, limit): an exact member of the rank-(2k-1, 2k-1) set at distance
    exactly 1/p from the limit with minimal ranks (2k, 2k-1).

    Plain variant: W_p = J_{2k-1}(a) (+) (a + 1/p) + e_{2k-1} (x) e_{2k},
    Z_p = W_p + lambda E, limit J_{2k}(a) + lambda E.  With q = (size, c, d)
    a real block Q_{2*size}(c, d) is appended to both (the limit then is
    J_{m1}(a) (+) Q + lambda E with m1 = 2k - 2*size)."""
    if p < 1:
        raise ValueError("p must be a positive integer")
    if k < 1:
        raise ValueError("k must be a positive integer")
    m1 = 2 * k if q is None else 2 * k - 2 * q[0]
    if m1 < 2 or m1 % 2:
        raise ValueError("the Jordan part must have positive even dimension")
    a = Fraction(a)
    rows = [[Fraction(0)] * m1 for _ in range(m1)]
    for i in range(m1):
        rows[i][i] = a
        if i + 1 < m1:
            rows[i][i + 1] = Fraction(1)
    rows[m1 - 1][m1 - 1] = a + Fraction(1, p)
    W = MatrixQ(rows)
    J = jordan_matrix(m1, a)
    if q is not None:
        size, c, d = q
        Qm = q_matrix(size, c, d)
        W = MatrixQ.block_diag([W, Qm])
        J = MatrixQ.block_diag([J, Qm])
    E = identity(2 * k)
    return Pencil(W, E), Pencil(J, E)


# ---------------------------------------------------------------------------
# divergence experiment
# ---------------------------------------------------------------------------


@dataclass
class TrialResult:
    state: BtdState
    log: DivergenceLog
    initial_factor_norm: float

    @property
    def objective(self) -> float:
        return self.state.objective

    @property
    def norm_growth(self) -> float:
        peak = max(rec.max_factor_norm for rec in self.log.records)
        return peak / max(self.initial_factor_norm, 1e-300)


@dataclass
class ExperimentReport:
    pencil_norm: float
    ranks: tuple[int, int]
    control_ranks: tuple[int, int]
    trials: list[TrialResult]
    control: TrialResult

    def best_decile(self) -> list[int]:
        """Indices of the trials in the best tenth of final objectives."""
        order = sorted(range(len(self.trials)),
                       key=lambda i: self.trials[i].objective)
        return order[:max(1, len(self.trials) // 10)]

    def best_objective(self) -> float:
        return min(t.objective for t in self.trials)

    def summary(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "control_ranks": list(self.control_ranks),
            "trials": len(self.trials),
            "best_objective": self.best_objective(),
            "median_objective": sorted(t.objective for t in self.trials)[
                len(self.trials) // 2],
            "max_norm_growth": max(t.norm_growth for t in self.trials),
            "best_decile_cond_wz": [self.trials[i].state.cond_wz()
                                    for i in self.best_decile()],
            "control_objective": self.control.objective,
            "control_max_factor_norm": self.control.state.max_factor_norm(),
            "pencil_norm": self.pencil_norm,
        }

    def write_csv(self, path) -> None:
        logs = {i: t.log for i, t in enumerate(self.trials)}
        logs["control"] = self.control.log
        write_logs_csv(path, logs)

    def write_summary(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, indent=2)
            fh.write("\n")


def divergence_experiment(P: Pencil, r: int, s: int, trials: int = 20,
                          iters: int = 10000, seed: int = 0) \
        -> ExperimentReport:
    """Repeated ALS runs at ranks (r, s) on a pencil whose best approximation
    at those ranks does not exist, plus one control run at ranks (r+1, s)
    where a minimizer is attained with bounded factors.

    Accepts absolutely nonsingular pencils (minimal ranks (2k, 2k)) and the
    boundary case of minimal ranks (2k, 2k-1); both have no best
    approximation at (2k-1, 2k-1)."""
    n = P.n
    rho = minimal_ranks(P)
    if not (in_c(P) or (P.m == n and n % 2 == 0
                        and rho == MinimalRanks(n, n - 1))):
        raise ValueError(
            "the experiment needs an absolutely nonsingular pencil or one "
            "with minimal ranks (2k, 2k-1)")
    T = pencil_to_tensor(P)
    results = []
    for t in range(trials):
        init = _initial_state(T, r, s, seed + t)
        norm0 = init.max_factor_norm()
        state, log = als_approximate(T, r, s, init=init, max_iters=iters)
        results.append(TrialResult(state, log, norm0))
    cr = (min(r + 1, n), s)
    init = _initial_state(T, cr[0], cr[1], seed + trials)
    norm0 = init.max_factor_norm()
    cstate, clog = als_approximate(T, cr[0], cr[1], init=init, max_iters=iters)
    control = TrialResult(cstate, clog, norm0)
    return ExperimentReport(pencil_norm=T.norm(), ranks=(r, s),
                            control_ranks=cr, trials=results, control=control)


__all__ = [
    "ALS_BACKEND", "Tensor3", "BtdState", "LogRecord", "DivergenceLog",
    "CSV_COLUMNS", "write_logs_csv", "pencil_to_tensor", "btd_attaining",
    "als_approximate", "PnSequence", "sequence_pn", "sequence_zp",
    "TrialResult", "ExperimentReport", "divergence_experiment",
]
