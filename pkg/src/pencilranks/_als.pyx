# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled ALS sweep for the two-block decomposition.

Same contract as ``_als_py.als_sweep``: one cyclic pass of exact
least-squares updates of U, V, X, Y and the joint (w, z) pair, in place,
returning (squared objective, fallback).  Unlike the Python backend this
kernel does not solve rank-deficient subproblems; it returns (-1.0, True)
and the caller redoes the sweep with the fallback backend.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double _PIVOT_RTOL = 1e-13


cdef int _lu_factor(double[:, ::1] G, int[::1] piv) noexcept:
    """In-place LU with partial pivoting; returns 1 on a negligible pivot."""
    cdef int r = G.shape[0]
    cdef int i, j, k, p
    cdef double big, tmp, scale = 0.0
    for i in range(r):
        for j in range(r):
            if G[i, j] > scale:
                scale = G[i, j]
            elif -G[i, j] > scale:
                scale = -G[i, j]
    if scale == 0.0:
        return 1
    for k in range(r):
        p = k
        big = G[k, k] if G[k, k] >= 0 else -G[k, k]
        for i in range(k + 1, r):
            tmp = G[i, k] if G[i, k] >= 0 else -G[i, k]
            if tmp > big:
                big = tmp
                p = i
        if big < _PIVOT_RTOL * scale:
            return 1
        piv[k] = p
        if p != k:
            for j in range(r):
                tmp = G[k, j]
                G[k, j] = G[p, j]
                G[p, j] = tmp
        for i in range(k + 1, r):
            G[i, k] /= G[k, k]
            for j in range(k + 1, r):
                G[i, j] -= G[i, k] * G[k, j]
    return 0


cdef void _lu_solve(double[:, ::1] G, int[::1] piv, double[::1] b) noexcept:
    cdef int r = G.shape[0]
    cdef int i, j
    cdef double tmp, acc
    for i in range(r):
        if piv[i] != i:
            tmp = b[i]
            b[i] = b[piv[i]]
            b[piv[i]] = tmp
    for i in range(r):
        acc = b[i]
        for j in range(i):
            acc -= G[i, j] * b[j]
        b[i] = acc
    for i in range(r - 1, -1, -1):
        acc = b[i]
        for j in range(i + 1, r):
            acc -= G[i, j] * b[j]
        b[i] = acc / G[i, i]


cdef void _product(double[:, ::1] F1, double[:, ::1] F2,
                   double[:, ::1] out) noexcept:
    """out = F1 @ F2.T for m x k and n x k factors."""
    cdef int m = F1.shape[0], n = F2.shape[0], k = F1.shape[1]
    cdef int i, j, l
    cdef double acc
    for i in range(m):
        for j in range(n):
            acc = 0.0
            for l in range(k):
                acc += F1[i, l] * F2[j, l]
            out[i, j] = acc


cdef void _gram(double[:, ::1] F, double c, double[:, ::1] out) noexcept:
    """out = c * F.T @ F."""
    cdef int n = F.shape[0], r = F.shape[1]
    cdef int i, j, l
    cdef double acc
    for i in range(r):
        for j in range(i, r):
            acc = 0.0
            for l in range(n):
                acc += F[l, i] * F[l, j]
            out[i, j] = c * acc
            out[j, i] = c * acc
    # (symmetric)


cdef int _update_pair(double[:, ::1] P, double[:, ::1] F1, double[:, ::1] F2,
                      double c, double[:, ::1] G, int[::1] piv,
                      double[::1] rhs) noexcept:
    """F1 <- argmin ||P - F1 F2^T||_F (weighted by c), then F2 likewise.
    Returns 1 if a gram matrix was numerically singular."""
    cdef int m = P.shape[0], n = P.shape[1], r = F1.shape[1]
    cdef int i, j, l
    cdef double acc
    _gram(F2, c, G)
    if _lu_factor(G, piv):
        return 1
    for i in range(m):
        for j in range(r):
            acc = 0.0
            for l in range(n):
                acc += P[i, l] * F2[l, j]
            rhs[j] = acc
        _lu_solve(G, piv, rhs)
        for j in range(r):
            F1[i, j] = rhs[j]
    _gram(F1, c, G)
    if _lu_factor(G, piv):
        return 1
    for i in range(n):
        for j in range(r):
            acc = 0.0
            for l in range(m):
                acc += P[l, i] * F1[l, j]
            rhs[j] = acc
        _lu_solve(G, piv, rhs)
        for j in range(r):
            F2[i, j] = rhs[j]
    return 0


cdef double _dot(double[:, ::1] A, double[:, ::1] B) noexcept:
    cdef int i, j
    cdef double acc = 0.0
    for i in range(A.shape[0]):
        for j in range(A.shape[1]):
            acc += A[i, j] * B[i, j]
    return acc


def als_sweep(double[:, ::1] T0, double[:, ::1] T1,
              double[:, ::1] U, double[:, ::1] V,
              double[:, ::1] X, double[:, ::1] Y,
              double[::1] w, double[::1] z):
    cdef int m = T0.shape[0], n = T0.shape[1]
    cdef int r = U.shape[1], s = X.shape[1]
    cdef int k = r if r > s else s
    cdef int i, j
    cdef double wz, c, g11, g12, g22, det, b1, b2, scale, res, obj

    P_arr = np.empty((m, n))
    M1_arr = np.empty((m, n))
    M2_arr = np.empty((m, n))
    G_arr = np.empty((k if k else 1, k if k else 1))
    piv_arr = np.empty(k if k else 1, dtype=np.intc)
    rhs_arr = np.empty(k if k else 1)
    cdef double[:, ::1] P = P_arr
    cdef double[:, ::1] M1 = M1_arr
    cdef double[:, ::1] M2 = M2_arr
    cdef double[:, ::1] G = G_arr
    cdef int[::1] piv = piv_arr
    cdef double[::1] rhs = rhs_arr

    wz = w[0] * z[0] + w[1] * z[1]
    if r:
        _product(X, Y, M2)
        for i in range(m):
            for j in range(n):
                P[i, j] = w[0] * T0[i, j] + w[1] * T1[i, j] - wz * M2[i, j]
        c = w[0] * w[0] + w[1] * w[1]
        if _update_pair(P, U, V, c, G[:r, :r], piv[:r], rhs[:r]):
            return -1.0, True
    if s:
        _product(U, V, M1)
        for i in range(m):
            for j in range(n):
                P[i, j] = z[0] * T0[i, j] + z[1] * T1[i, j] - wz * M1[i, j]
        c = z[0] * z[0] + z[1] * z[1]
        if _update_pair(P, X, Y, c, G[:s, :s], piv[:s], rhs[:s]):
            return -1.0, True

    _product(U, V, M1)
    _product(X, Y, M2)
    if s == 0:
        g11 = _dot(M1, M1)
        if g11 > 0.0:
            w[0] = _dot(T0, M1) / g11
            w[1] = _dot(T1, M1) / g11
    else:
        g11 = _dot(M1, M1)
        g12 = _dot(M1, M2)
        g22 = _dot(M2, M2)
        det = g11 * g22 - g12 * g12
        scale = g11 if g11 > g22 else g22
        if scale <= 0.0 or det <= _PIVOT_RTOL * scale * scale:
            return -1.0, True
        b1 = _dot(T0, M1)
        b2 = _dot(T0, M2)
        w[0] = (g22 * b1 - g12 * b2) / det
        z[0] = (g11 * b2 - g12 * b1) / det
        b1 = _dot(T1, M1)
        b2 = _dot(T1, M2)
        w[1] = (g22 * b1 - g12 * b2) / det
        z[1] = (g11 * b2 - g12 * b1) / det

    obj = 0.0
    for i in range(m):
        for j in range(n):
            res = T0[i, j] - w[0] * M1[i, j] - z[0] * M2[i, j]
            obj += res * res
            res = T1[i, j] - w[1] * M1[i, j] - z[1] * M2[i, j]
            obj += res * res
    return obj, False
