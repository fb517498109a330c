"""Compare the compiled and pure-Python truncated multiplication kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each workload is multiplied by both backends; the products must agree term
for term before any timing is reported.
"""

import argparse
import random
import sys
import timeit
from fractions import Fraction

from macloc.ctprod import KernelSpec, delta_M
from macloc.kernels import Context, Series
from macloc.kernels import _pykernel

try:
    from macloc.kernels import _ckernel
except ImportError:
    _ckernel = None


def _random_terms(rng, nv, size, lo, hi, coeff=int):
    out = {}
    for _ in range(size):
        e = tuple(rng.randint(lo, hi) for _ in range(nv))
        out[e] = coeff(rng.randint(-9, 9)) or coeff(1)
    return out


def workloads():
    rng = random.Random(7)
    z = Context(("z",), lo=(-64,), hi=(40,))
    yield "1 var, dense, int", z, _random_terms(rng, 1, 40, -10, 30), _random_terms(rng, 1, 40, -10, 30)
    qt = Context(("q", "t"), weights=(1, 1), prec=12)
    yield "q,t total degree 12, int", qt, _random_terms(rng, 2, 60, 0, 10), _random_terms(rng, 2, 60, 0, 10)
    yield ("q,t total degree 12, Fraction", qt,
           _random_terms(rng, 2, 40, 0, 10, lambda c: Fraction(c, 3)),
           _random_terms(rng, 2, 40, 0, 10, lambda c: Fraction(c, 7)))
    ctx = Context(("q", "t"), weights=(1, 1), prec=6)
    d = delta_M(KernelSpec.macdonald(ctx, 3), ctx).series
    yield "Delta_M(q,t) n=3 squared", d.ctx, d.terms, d.terms


def run(repeat):
    if _ckernel is None:
        print("compiled kernel not built; only the Python backend is available")
    print(f"{'workload':34} {'terms':>7} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    ok = True
    for name, ctx, a, b in workloads():
        args = (a, b, ctx.lo, ctx.hi, ctx.weights, ctx.prec)
        ref = _pykernel.mul_terms(*args)
        tp = min(timeit.repeat(lambda: _pykernel.mul_terms(*args), number=1, repeat=repeat))
        if _ckernel is not None:
            got = _ckernel.mul_terms(*args)
            same = got == ref and Series(ctx, got) == Series(ctx, ref)
            ok = ok and same
            tc = min(timeit.repeat(lambda: _ckernel.mul_terms(*args), number=1, repeat=repeat))
            flag = "" if same else "  MISMATCH"
            print(f"{name:34} {len(ref):7d} {tp * 1e3:10.2f} {tc * 1e3:10.2f} {tp / tc:7.1f}x{flag}")
        else:
            print(f"{name:34} {len(ref):7d} {tp * 1e3:10.2f} {'-':>10} {'-':>8}")
    return ok


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    return 0 if run(args.repeat) else 1


if __name__ == "__main__":
    sys.exit(main())
