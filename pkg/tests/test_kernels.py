import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from macloc.kernels import (
    BACKEND,
    Context,
    ContextMismatch,
    FactoredChar,
    PolyFrac,
    Series,
    factored_mul,
    factored_to_series,
    frac_eq,
    series_add,
    series_invert,
    series_mul,
)
from macloc.kernels import _pykernel

D = 16
Z = Context.default(("z",))
QT = Context.default(("q", "t"))
q, t = PolyFrac.var("q"), PolyFrac.var("t")


def zs(*coeffs, start=0):
    return Series(Z, {(start + i,): c for i, c in enumerate(coeffs) if c})


def geom(ctx=Z, start=0):
    return Series(ctx, {(i,): 1 for i in range(start, D + 1)})


def test_add_examples():
    assert series_add(zs(1, 1), zs(1, -1)) == Series.const(Z, 2)
    s = zs(3, 0, -1)
    assert series_add(Series.zero(Z), s) == s
    top = Series.monomial(Z, (D,))
    assert series_add(top, top) == Series.monomial(Z, (D,), 2)


def test_mul_examples():
    assert series_mul(zs(1, -1), geom()) == Series.const(Z, 1)
    assert series_mul(Series.monomial(Z, (-1,)), Series.var(Z, "z")) == Series.const(Z, 1)
    one = Series.const(QT, 1)
    prod = series_mul(one + Series.var(QT, "q"), one + Series.var(QT, "t"))
    assert prod == Series(QT, {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1})


def test_invert_examples():
    assert series_invert(zs(1, -1)) == geom()
    inv = series_invert(Series(Z, {(0,): 1, (-1,): -1}))
    assert inv == -geom(start=1)
    assert series_invert(Series.const(Z, 2)) == Series.const(Z, Fraction(1, 2))


def test_invert_errors():
    with pytest.raises(ZeroDivisionError):
        series_invert(Series.zero(Z))
    tight = Context(("z",), lo=(0,), hi=(D,))
    with pytest.raises(ValueError):
        series_invert(Series.var(tight, "z"))


def test_context_mismatch():
    with pytest.raises(ContextMismatch):
        zs(1) + Series.const(QT, 1)


def test_factored_examples():
    f1 = FactoredChar(1, 0, {1: 1})
    assert factored_mul(f1, f1.inverse()) == FactoredChar.one()
    a = FactoredChar(-1, 1, {1: -1})
    b = FactoredChar(-1, -1)
    assert factored_mul(a, b) == FactoredChar(1, 0, {1: -1})
    c = FactoredChar(1, 0, {1: 1, 2: 1})
    assert factored_mul(c, FactoredChar(1, 0, {2: -1})) == f1


def test_factored_to_series_examples():
    assert factored_to_series(FactoredChar(1, 0, {1: -1}), Z) == geom()
    got = factored_to_series(FactoredChar(-1, 2, {1: -2}), Z)
    assert got == Series(Z, {(k,): -(k - 1) for k in range(2, D + 1)})
    assert factored_to_series(FactoredChar.one(), Z) == Series.const(Z, 1)
    with pytest.raises(ValueError):
        factored_to_series(FactoredChar(1, -5), Context(("z",), lo=(0,), hi=(D,)))


def test_frac_eq_examples():
    assert frac_eq((1 - q ** 2) / (1 - q), 1 + q)
    assert not frac_eq(q / t, t / q)
    assert frac_eq(PolyFrac(0), PolyFrac(0) / (1 - q * t))


def test_polyfrac_reduced_and_expanded_agree():
    unreduced = (1 - q ** 3) * (1 - t) / ((1 - q) * (1 - t * q))
    reduced = (1 + q + q ** 2) * (1 - t) / (1 - q * t)
    assert unreduced == reduced
    assert unreduced.to_series(QT) == reduced.to_series(QT)


def test_fmpz_backend_is_exact_on_large_coefficients():
    big = PolyFrac(10 ** 40) * q
    assert (big / PolyFrac(10 ** 40)) == q


small = st.dictionaries(st.tuples(st.integers(-3, 6), st.integers(0, 4)), st.integers(-5, 5), max_size=8)
CTX2 = Context(("z", "q"), lo=(-8, 0), hi=(10, 6))


def mk(terms):
    return Series(CTX2, terms)


@given(small, small, small)
def test_ring_axioms(a, b, c):
    # nonnegative supports only clip from above, so the laws hold on the window
    A, B, C = (mk({e: v for e, v in x.items() if e[0] >= 0}) for x in (a, b, c))
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A * B == B * A


@given(small)
def test_invert_is_inverse(a):
    s = mk({e: v for e, v in a.items() if e[0] >= 0 and any(e)})
    s = s + Series.const(CTX2, 1)
    assert s * s.invert() == Series.const(CTX2, 1)


factors = st.dictionaries(st.integers(1, 4), st.integers(-3, 3), max_size=3)


@given(st.sampled_from([-1, 1]), st.integers(0, 3), factors, st.sampled_from([-1, 1]), st.integers(0, 3), factors)
def test_factored_mul_matches_series(s1, h1, f1, s2, h2, f2):
    a, b = FactoredChar(s1, h1, f1), FactoredChar(s2, h2, f2)
    lhs = factored_to_series(factored_mul(a, b), Z)
    assert lhs == factored_to_series(a, Z) * factored_to_series(b, Z)


@given(small, small)
def test_backend_matches_reference(a, b):
    got = series_mul(mk(a), mk(b)).terms
    ref = _pykernel.mul_terms(mk(a).terms, mk(b).terms, CTX2.lo, CTX2.hi, CTX2.weights, CTX2.prec)
    assert got == ref


def test_backend_is_reported():
    assert BACKEND in ("cython", "python")


def test_weighted_cap():
    ctx = Context(("q", "t"), weights=(2, 1), prec=4)
    s = Series(ctx, {(1, 0): 1, (0, 1): 1})
    sq = s * s
    assert sq == Series(ctx, {(2, 0): 1, (1, 1): 2, (0, 2): 1})
    assert (s ** 3).terms == {(1, 2): 3, (0, 3): 1}


_PARITY = """
import json
from macloc.ctprod import KernelSpec, delta_M
from macloc.kernels import BACKEND, Context
ctx = Context(("q", "t"), weights=(1, 1), prec=5)
d = delta_M(KernelSpec.macdonald(ctx, 3), ctx).series
print(json.dumps({"backend": BACKEND, "terms": d.to_json()}, sort_keys=True))
"""


def _run_parity(env_value):
    env = dict(os.environ)
    env.pop("MACLOC_PURE_PYTHON", None)
    if env_value:
        env["MACLOC_PURE_PYTHON"] = env_value
    out = subprocess.run([sys.executable, "-c", _PARITY], env=env, check=True,
                         capture_output=True, text=True).stdout
    return json.loads(out)


def test_pure_python_fallback_matches_default_backend():
    pure = _run_parity("1")
    default = _run_parity(None)
    assert pure["backend"] == "python"
    assert pure["terms"] == default["terms"]
