# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled truncated sparse convolution (same contract as ``_pykernel``)."""

from libc.stdlib cimport malloc, free

BACKEND = "cython"

cdef long long _PACK_LIMIT = 1LL << 60
cdef long long _DENSE_LIMIT = 1LL << 21


def mul_terms(dict a, dict b, tuple lo, tuple hi, tuple weights, prec):
    if not a or not b:
        return {}
    cdef Py_ssize_t nv = len(lo)
    if nv == 0:
        c = a[()] * b[()]
        return {(): c} if c != 0 else {}

    cdef Py_ssize_t na = len(a), nb = len(b)
    cdef Py_ssize_t i, j, v, k
    cdef long long *A = <long long *> malloc(na * nv * sizeof(long long))
    cdef long long *B = <long long *> malloc(nb * nv * sizeof(long long))
    cdef long long *WA = <long long *> malloc(na * sizeof(long long))
    cdef long long *WB = <long long *> malloc(nb * sizeof(long long))
    cdef long long *elo = <long long *> malloc(nv * sizeof(long long))
    cdef long long *ehi = <long long *> malloc(nv * sizeof(long long))
    cdef long long *stride = <long long *> malloc(nv * sizeof(long long))
    cdef long long *width = <long long *> malloc(nv * sizeof(long long))
    cdef long long *wt = <long long *> malloc(nv * sizeof(long long))
    cdef long long x, key, total, wa, cap = 0
    cdef long long amin, amax, bmin, bmax
    cdef bint use_prec = prec is not None
    cdef bint ok
    if use_prec:
        cap = prec
    try:
        for v in range(nv):
            wt[v] = weights[v]

        ca = list(a.values())
        bitems = sorted(b.items(), key=lambda r: sum(w * e for w, e in zip(weights, r[0])))
        cb = [r[1] for r in bitems]
        i = 0
        for e in a:
            for v in range(nv):
                A[i * nv + v] = e[v]
            i += 1
        j = 0
        for e, _ in bitems:
            for v in range(nv):
                B[j * nv + v] = e[v]
            j += 1
        for i in range(na):
            WA[i] = 0
            for v in range(nv):
                WA[i] += wt[v] * A[i * nv + v]
        for j in range(nb):
            WB[j] = 0
            for v in range(nv):
                WB[j] += wt[v] * B[j * nv + v]

        total = 1
        for v in range(nv):
            amin = A[v]; amax = A[v]
            for i in range(na):
                x = A[i * nv + v]
                if x < amin: amin = x
                if x > amax: amax = x
            bmin = B[v]; bmax = B[v]
            for j in range(nb):
                x = B[j * nv + v]
                if x < bmin: bmin = x
                if x > bmax: bmax = x
            elo[v] = amin + bmin
            ehi[v] = amax + bmax
            if lo[v] is not None and lo[v] > elo[v]:
                elo[v] = lo[v]
            if hi[v] is not None and hi[v] < ehi[v]:
                ehi[v] = hi[v]
            if elo[v] > ehi[v]:
                return {}
            width[v] = ehi[v] - elo[v] + 1
            stride[v] = total
            if width[v] > _PACK_LIMIT // total:
                raise OverflowError("exponent window too large to pack")
            total *= width[v]

        dense = total <= _DENSE_LIMIT and total <= 4 * na * nb
        if dense:
            acc = [None] * total
        else:
            acc = {}

        for i in range(na):
            wa = WA[i]
            ai = ca[i]
            for j in range(nb):
                if use_prec and wa + WB[j] > cap:
                    break
                key = 0
                ok = True
                for v in range(nv):
                    x = A[i * nv + v] + B[j * nv + v]
                    if x < elo[v] or x > ehi[v]:
                        ok = False
                        break
                    key += (x - elo[v]) * stride[v]
                if not ok:
                    continue
                if dense:
                    prev = acc[key]
                    if prev is None:
                        acc[key] = ai * cb[j]
                    else:
                        acc[key] = prev + ai * cb[j]
                else:
                    prev = acc.get(key)
                    if prev is None:
                        acc[key] = ai * cb[j]
                    else:
                        acc[key] = prev + ai * cb[j]

        res = {}
        if dense:
            for key in range(total):
                c = acc[key]
                if c is None or c == 0:
                    continue
                res[tuple([(key // stride[v]) % width[v] + elo[v] for v in range(nv)])] = c
        else:
            for pkey, c in acc.items():
                if c == 0:
                    continue
                key = pkey
                res[tuple([(key // stride[v]) % width[v] + elo[v] for v in range(nv)])] = c
        return res
    finally:
        free(A); free(B); free(WA); free(WB)
        free(elo); free(ehi); free(stride); free(width); free(wt)
