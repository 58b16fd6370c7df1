"""Pure-numpy ALS sweep for the two-block decomposition.

This is the fallback backend; a Cython implementation of the same contract
lives in ``_als`` and is preferred when the compiled extension is available.

One sweep performs cyclic exact least-squares updates of U, V, X, Y and the
joint (w, z) pair for the model (U V^T) (x) w + (X Y^T) (x) z of a tensor
with slices T0, T1.  All factor arrays are updated in place.  Returns
(squared objective, fallback) where fallback reports that at least one
subproblem was rank-deficient and solved in the minimum-norm sense.
"""

from __future__ import annotations

import numpy as np

_COND_LIMIT = 1e14


def als_sweep(T0, T1, U, V, X, Y, w, z):
    fallback = False

    def solve_rows(G, RHS):
        """M minimizing ||M G^(1/2) - ...||: solution of M G = RHS."""
        nonlocal fallback
        if G.shape[0] == 0:
            return RHS
        cond = np.linalg.cond(G)
        if np.isfinite(cond) and cond < _COND_LIMIT:
            return np.linalg.solve(G.T, RHS.T).T
        fallback = True
        return RHS @ np.linalg.pinv(G)

    r, s = U.shape[1], X.shape[1]
    wz = w[0] * z[0] + w[1] * z[1]
    if r:
        P = w[0] * T0 + w[1] * T1 - wz * (X @ Y.T)
        ww = w[0] * w[0] + w[1] * w[1]
        U[:] = solve_rows(ww * (V.T @ V), P @ V)
        V[:] = solve_rows(ww * (U.T @ U), P.T @ U)
        wz = w[0] * z[0] + w[1] * z[1]
    if s:
        P = z[0] * T0 + z[1] * T1 - wz * (U @ V.T)
        zz = z[0] * z[0] + z[1] * z[1]
        X[:] = solve_rows(zz * (Y.T @ Y), P @ Y)
        Y[:] = solve_rows(zz * (X.T @ X), P.T @ X)

    M1, M2 = U @ V.T, X @ Y.T
    if s == 0:
        g11 = np.vdot(M1, M1)
        if g11 > 0:
            for k, Tk in ((0, T0), (1, T1)):
                w[k] = np.vdot(Tk, M1) / g11
    else:
        G = np.array([[np.vdot(M1, M1), np.vdot(M1, M2)],
                      [np.vdot(M2, M1), np.vdot(M2, M2)]])
        cond = np.linalg.cond(G)
        use_pinv = not np.isfinite(cond) or cond >= _COND_LIMIT
        if use_pinv:
            fallback = True
            Ginv = np.linalg.pinv(G)
        for k, Tk in ((0, T0), (1, T1)):
            rhs = np.array([np.vdot(Tk, M1), np.vdot(Tk, M2)])
            sol = Ginv @ rhs if use_pinv else np.linalg.solve(G, rhs)
            w[k], z[k] = sol

    R0 = T0 - w[0] * M1 - z[0] * M2
    R1 = T1 - w[1] * M1 - z[1] * M2
    return float(np.vdot(R0, R0) + np.vdot(R1, R1)), fallback
