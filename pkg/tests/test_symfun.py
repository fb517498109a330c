from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from macloc.kernels import Context, Series
from macloc.partitions import partitions_of
from macloc.symfun import (
    MAX_DEGREE,
    DegreeOverflow,
    SymFn,
    XPoly,
    dual_substitute,
    e_nvars,
    expand_nvars,
    h_nvars,
)


def test_convert_examples():
    assert SymFn.h(2).to("m") == SymFn("m", {(2,): 1, (1, 1): 1})
    assert SymFn.p(2).to("m") == SymFn.m(2)
    got = SymFn.e(2).to("p")
    assert got.coeffs == {(1, 1): Fraction(1, 2), (2,): Fraction(-1, 2)}


def test_expand_examples():
    assert expand_nvars(SymFn.e(2), 2) == XPoly.monomial(2, (1, 1))
    assert expand_nvars(SymFn.e(3), 2).is_zero()
    assert expand_nvars(SymFn.h(2), 1) == XPoly.monomial(1, (2,))


def test_mul_examples():
    assert (SymFn.e(1) * SymFn.e(1)).to("m") == SymFn.m(2) + SymFn.m(1, 1).scale(2)
    f = SymFn.m(2, 1) - SymFn.h(3)
    assert f * SymFn.one("m") == f
    assert SymFn.p(1) * SymFn.p(2) == SymFn.p(2, 1)


def test_dual_examples():
    x = XPoly.monomial(2, (1, 0)) + XPoly.monomial(2, (0, 1))
    assert dual_substitute(x) == XPoly.monomial(2, (-1, 0)) + XPoly.monomial(2, (0, -1))
    assert dual_substitute(XPoly.one(2)) == XPoly.one(2)
    assert dual_substitute(XPoly.monomial(2, (1, -1))) == XPoly.monomial(2, (-1, 1))


def test_degree_bound():
    with pytest.raises(DegreeOverflow):
        SymFn.h(MAX_DEGREE) * SymFn.h(1)


def test_p_basis_equality_across_bases():
    assert SymFn.e(1, 1) == SymFn.h(1, 1)
    assert SymFn.e(2) != SymFn.h(2)


def test_h_nvars_matches_expansion():
    for d in range(5):
        for n in range(1, 4):
            h = SymFn.h(d) if d else SymFn.one("h")
            assert h_nvars(d, n) == expand_nvars(h, n)


def test_series_coefficients():
    ctx = Context(("q",), lo=(0,), hi=(4,))
    c = Series(ctx, {(0,): 1, (1,): -1})
    f = SymFn("m", {(1,): c})
    x = expand_nvars(f, 2, ctx)
    assert x.coefficient((1, 0)) == c


elems = st.sampled_from(["m", "e", "h", "p"])


@st.composite
def symfns(draw, max_deg=3):
    basis = draw(elems)
    out = SymFn(basis)
    for _ in range(draw(st.integers(1, 3))):
        k = draw(st.integers(0, max_deg))
        lam = draw(st.sampled_from(partitions_of(k)))
        out = out + SymFn.basis_element(basis, lam, draw(st.integers(-3, 3)))
    return out


@given(symfns(), symfns())
def test_expand_is_multiplicative(f, g):
    n = 6
    assert expand_nvars(f * g, n) == expand_nvars(f, n) * expand_nvars(g, n)


@given(symfns(max_deg=5), st.permutations(["m", "e", "h", "p"]))
def test_basis_cycle(f, order):
    g = f
    for b in order:
        g = g.to(b)
    assert g.to(f.basis).coeffs == f.coeffs


@given(symfns(), st.integers(1, 3), st.integers(0, 3))
def test_en_power_is_a_shift(f, n, m):
    en = SymFn.e(n)
    lhs = expand_nvars(f * en ** m, n)
    assert lhs == expand_nvars(f, n).shift(m)
    assert expand_nvars(en, n) == e_nvars(n)
