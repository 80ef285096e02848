# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: exact pairwise squared distances and the SMO pair loop.

Both routines follow the operation order of the pure-numpy versions in
``_kernels_py`` so the two backends produce bit-identical results.
"""

import numpy as np

cdef double TAU = 1e-12
cdef double INF = float("inf")


def sq_dists(const double[:, ::1] X, const double[:, ::1] Y):
    cdef Py_ssize_t n = X.shape[0], m = Y.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double s, diff
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] D = out
    with nogil:
        for i in range(n):
            for j in range(m):
                s = 0.0
                for k in range(d):
                    diff = X[i, k] - Y[j, k]
                    s = s + diff * diff
                D[i, j] = s
    return out


def smo(const double[:, ::1] Q, const double[::1] y, double C, double tol, long max_iter):
    """Maximal-violating-pair SMO on min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0.

    Returns (alpha, grad, iterations, converged).
    """
    cdef Py_ssize_t n = Q.shape[0]
    cdef Py_ssize_t t, i, j
    cdef long it = 0
    cdef bint converged = False
    cdef double gmax, gmin, v, quad, delta, diff, total
    cdef double old_ai, old_aj, ai, aj, dai, daj
    alpha_arr = np.zeros(n, dtype=np.float64)
    grad_arr = np.full(n, -1.0, dtype=np.float64)
    cdef double[::1] a = alpha_arr
    cdef double[::1] G = grad_arr

    with nogil:
        while it < max_iter:
            gmax = -INF
            gmin = INF
            i = -1
            j = -1
            for t in range(n):
                v = -y[t] * G[t]
                if (y[t] > 0 and a[t] < C) or (y[t] < 0 and a[t] > 0):
                    if v > gmax:
                        gmax = v
                        i = t
                if (y[t] > 0 and a[t] > 0) or (y[t] < 0 and a[t] < C):
                    if v < gmin:
                        gmin = v
                        j = t
            if i == -1 or j == -1 or gmax - gmin < tol:
                converged = True
                break

            old_ai = a[i]
            old_aj = a[j]
            ai = old_ai
            aj = old_aj
            if y[i] != y[j]:
                quad = Q[i, i] + Q[j, j] + 2.0 * Q[i, j]
                if quad <= 0:
                    quad = TAU
                delta = (-G[i] - G[j]) / quad
                diff = ai - aj
                ai = ai + delta
                aj = aj + delta
                if diff > 0:
                    if aj < 0:
                        aj = 0.0
                        ai = diff
                else:
                    if ai < 0:
                        ai = 0.0
                        aj = -diff
                if diff > 0:
                    if ai > C:
                        ai = C
                        aj = C - diff
                else:
                    if aj > C:
                        aj = C
                        ai = C + diff
            else:
                quad = Q[i, i] + Q[j, j] - 2.0 * Q[i, j]
                if quad <= 0:
                    quad = TAU
                delta = (G[i] - G[j]) / quad
                total = ai + aj
                ai = ai - delta
                aj = aj + delta
                if total > C:
                    if ai > C:
                        ai = C
                        aj = total - C
                else:
                    if aj < 0:
                        aj = 0.0
                        ai = total
                if total > C:
                    if aj > C:
                        aj = C
                        ai = total - C
                else:
                    if ai < 0:
                        ai = 0.0
                        aj = total
            a[i] = ai
            a[j] = aj
            dai = ai - old_ai
            daj = aj - old_aj
            for t in range(n):
                G[t] = G[t] + (Q[i, t] * dai + Q[j, t] * daj)
            it += 1

    return alpha_arr, grad_arr, it, converged
