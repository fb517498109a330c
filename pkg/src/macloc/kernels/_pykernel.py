"""Pure-Python truncated sparse convolution.

Reference implementation of the hot loop.  ``_ckernel.pyx`` implements the
same contract; the two are compared term-for-term in the test-suite and by
``benchmarks/bench_kernels.py``.

Terms are dictionaries mapping exponent tuples to coefficients.  The
coefficients can be any objects supporting ``+`` and ``*`` (ints,
``Fraction``, ``PolyFrac``); zero results are dropped.
"""

BACKEND = "python"


def _bounds(a, b, lo, hi):
    nv = len(lo)
    elo = []
    ehi = []
    for v in range(nv):
        amin = min(e[v] for e in a)
        amax = max(e[v] for e in a)
        bmin = min(e[v] for e in b)
        bmax = max(e[v] for e in b)
        low = amin + bmin
        high = amax + bmax
        if lo[v] is not None and lo[v] > low:
            low = lo[v]
        if hi[v] is not None and hi[v] < high:
            high = hi[v]
        if low > high:
            return None
        elo.append(low)
        ehi.append(high)
    return elo, ehi


def mul_terms(a, b, lo, hi, weights, prec):
    """Product of two term maps, clipped to a window.

    ``lo``/``hi`` give per-variable exponent bounds (``None`` = unbounded);
    ``prec`` (or ``None``) bounds the weighted degree ``sum(w_v * e_v)``.
    """
    if not a or not b:
        return {}
    nv = len(lo)
    if nv == 0:
        c = a[()] * b[()]
        return {(): c} if c != 0 else {}
    bounds = _bounds(a, b, lo, hi)
    if bounds is None:
        return {}
    elo, ehi = bounds
    widths = [ehi[v] - elo[v] + 1 for v in range(nv)]
    strides = []
    s = 1
    for v in range(nv):
        strides.append(s)
        s *= widths[v]

    bl = [(sum(w * x for w, x in zip(weights, e)), e, c) for e, c in b.items()]
    bl.sort(key=lambda r: r[0])
    out = {}
    get = out.get
    rng = range(nv)
    for ea, ca in a.items():
        wa = sum(w * x for w, x in zip(weights, ea))
        for wb, eb, cb in bl:
            if prec is not None and wa + wb > prec:
                break
            key = 0
            for v in rng:
                x = ea[v] + eb[v]
                if x < elo[v] or x > ehi[v]:
                    key = -1
                    break
                key += (x - elo[v]) * strides[v]
            if key < 0:
                continue
            prev = get(key)
            out[key] = ca * cb if prev is None else prev + ca * cb

    res = {}
    for key, c in out.items():
        if c == 0:
            continue
        res[tuple((key // strides[v]) % widths[v] + elo[v] for v in rng)] = c
    return res
