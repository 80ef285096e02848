"""Pure-numpy versions of the compiled inner loops in ``_ext.pyx``.

Used when the extension is not built or when ``SVMELM_PURE=1`` is set.
The arithmetic order matches the compiled loops exactly.
"""

import numpy as np

TAU = 1e-12


def sq_dists(X, Y):
    n, d = X.shape
    out = np.zeros((n, Y.shape[0]))
    # accumulate one coordinate at a time: same summation order as the C loop
    for k in range(d):
        diff = X[:, k, None] - Y[None, :, k]
        out += diff * diff
    return out


def smo(Q, y, C, tol, max_iter):
    n = Q.shape[0]
    a = np.zeros(n)
    G = np.full(n, -1.0)
    pos = y > 0
    neg = ~pos
    it = 0
    converged = False
    while it < max_iter:
        v = -y * G
        up = (pos & (a < C)) | (neg & (a > 0))
        low = (pos & (a > 0)) | (neg & (a < C))
        if not up.any() or not low.any():
            converged = True
            break
        i = int(np.argmax(np.where(up, v, -np.inf)))
        j = int(np.argmin(np.where(low, v, np.inf)))
        if v[i] - v[j] < tol:
            converged = True
            break

        old_ai = float(a[i])
        old_aj = float(a[j])
        ai, aj = old_ai, old_aj
        Qi, Qj = Q[i], Q[j]
        if y[i] != y[j]:
            quad = float(Qi[i]) + float(Qj[j]) + 2.0 * float(Qi[j])
            if quad <= 0:
                quad = TAU
            delta = (-float(G[i]) - float(G[j])) / quad
            diff = ai - aj
            ai += delta
            aj += delta
            if diff > 0:
                if aj < 0:
                    aj, ai = 0.0, diff
            elif ai < 0:
                ai, aj = 0.0, -diff
            if diff > 0:
                if ai > C:
                    ai, aj = C, C - diff
            elif aj > C:
                aj, ai = C, C + diff
        else:
            quad = float(Qi[i]) + float(Qj[j]) - 2.0 * float(Qi[j])
            if quad <= 0:
                quad = TAU
            delta = (float(G[i]) - float(G[j])) / quad
            total = ai + aj
            ai -= delta
            aj += delta
            if total > C:
                if ai > C:
                    ai, aj = C, total - C
            elif aj < 0:
                aj, ai = 0.0, total
            if total > C:
                if aj > C:
                    aj, ai = C, total - C
            elif ai < 0:
                ai, aj = 0.0, total
        a[i] = ai
        a[j] = aj
        G += Qi * (ai - old_ai) + Qj * (aj - old_aj)
        it += 1
    return a, G, it, converged
