from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from macloc.kernels import Context, FactoredChar, PolyFrac, Series
from macloc.partitions import partitions_of
from macloc.plethysm import (
    PoleError,
    character,
    dim_at,
    dim_total,
    dualize,
    eps_ut,
    eval_hom,
    eval_hom_e,
    eval_hom_frac,
    lambda_eval,
    lambda_i,
    omega_component,
    principal,
)
from macloc.symfun import SymFn, expand_nvars

Z = Context.default(("z",))
T = Context.exact(("t",))
u, t = PolyFrac.var("u"), PolyFrac.var("t")


def ch(terms, ctx=Z):
    return character(ctx, terms)


def test_dims():
    assert dim_at(ch({1: 1, 3: 2}), 3) == 2
    assert dim_at(ch({1: 1, 2: -1}), 0) == 0
    assert dim_total(ch({0: 1, 1: 1, 2: 1})) == 3


def test_lambda_i_examples():
    A = ch({-1: 2, 0: 1, 3: -1})
    assert lambda_i(A, 0) == Series.const(Z, 1)
    assert lambda_i(A, 1) == A
    assert lambda_i(ch({0: 1, 1: 1}), 2) == ch({1: 1})
    assert lambda_i(ch({0: 2}), 2) == Series.const(Z, 1)


def test_lambda_eval_examples():
    assert lambda_eval(ch({1: 1, 2: -1})) == FactoredChar(1, 0, {1: 1, 2: -1})
    assert lambda_eval(Series(Z)) == FactoredChar.one()
    got = lambda_eval(ch({-1: 1, 1: 1}))
    assert got == FactoredChar(-1, -1, {1: 2})
    assert got.to_series(Z) == ch({-1: -1, 0: 2, 1: -1})


def test_lambda_eval_zero_and_pole():
    assert lambda_eval(ch({0: 1, 1: 1})).is_zero()
    with pytest.raises(PoleError):
        lambda_eval(ch({0: -1, 1: 1}))


def test_lambda_of_multiplicity_two():
    # the product formula gives lambda^2(2x) = x^2
    x2 = ch({1: 2})
    assert lambda_i(x2, 2) == ch({2: 1})


def test_eval_hom_examples():
    assert eval_hom(SymFn.e(1), principal(Z, 3)) == ch({0: 1, 1: 1, 2: 1})
    assert eval_hom(SymFn.p(2), ch({0: 1, 1: 1})) == ch({0: 1, 2: 1})
    assert eval_hom(SymFn.h(2), ch({0: 1, 1: 1})) == ch({0: 1, 1: 1, 2: 1})


def test_omega_component_examples():
    one = Series.const(Z, 1)
    assert omega_component(one, 2) == SymFn("h", {(2,): one})
    assert omega_component(one, 0) == SymFn("h", {(): one})
    A = ch({0: 1, 1: 1})
    assert omega_component(A, 1) == SymFn("h", {(1,): A})


def test_eps_examples():
    assert eps_ut(SymFn.p(1)) == (1 - u) / (1 - t)
    assert eps_ut(SymFn.p(2)) == (1 - u ** 2) / (1 - t ** 2)


def test_dualize_examples():
    assert dualize(ch({0: 1, 1: 1})) == ch({0: 1, -1: 1})
    assert dualize(ch({1: 1, 3: -1})) == ch({-1: 1, -3: -1})


chars = st.dictionaries(st.integers(-3, 4), st.integers(-2, 2), max_size=4).map(
    lambda d: {a: c for a, c in d.items() if a != 0 and c})


@given(chars, chars)
def test_lambda_additive_to_multiplicative(a, b):
    A, B = ch(a), ch(b)
    assert lambda_eval(A + B) == lambda_eval(A) * lambda_eval(B)
    la, lb = lambda_eval(A), lambda_eval(B)
    # a product of truncations is exact only below the cap minus the negative shifts
    exact = 16 + min(la.shift, 0) + min(lb.shift, 0)
    lhs = lambda_eval(A + B).to_series(Z)
    rhs = la.to_series(Z) * lb.to_series(Z)
    assert {e: c for e, c in (lhs - rhs).terms.items() if e[0] <= exact} == {}


@given(chars)
def test_lambda_inverse(a):
    A = ch(a)
    assert lambda_eval(A) * lambda_eval(-A) == FactoredChar.one()


@st.composite
def symfns(draw, max_deg=4):
    out = SymFn("m")
    for _ in range(draw(st.integers(1, 3))):
        k = draw(st.integers(0, max_deg))
        lam = draw(st.sampled_from(partitions_of(k)))
        out = out + SymFn.basis_element("m", lam, draw(st.integers(-3, 3)))
    return out


poschars = st.dictionaries(st.integers(0, 3), st.integers(-1, 2), min_size=1, max_size=3)


@given(symfns(2), symfns(2), poschars)
def test_eval_hom_is_a_ring_map(f, g, a):
    A = ch(a)
    assert eval_hom(f * g, A) == eval_hom(f, A) * eval_hom(g, A)
    assert eval_hom(f + g, A) == eval_hom(f, A) + eval_hom(g, A)


@given(symfns(), poschars)
def test_two_evaluation_routes_agree(f, a):
    A = ch(a)
    assert eval_hom(f, A) == eval_hom_e(f, A)


def _eval_at_powers(xpoly, n):
    out = Series(Z)
    for xe, c in xpoly.by_x().items():
        deg = sum(i * e for i, e in enumerate(xe))
        out = out + Series(Z, {(deg,): c.constant_term()})
    return out


@given(symfns(), st.integers(1, 4))
def test_principal_matches_concrete_variables(f, n):
    assert eval_hom(f, principal(Z, n)) == _eval_at_powers(expand_nvars(f, n), n)


@given(poschars, poschars)
def test_omega_is_exponential(a, b):
    A, B = ch(a), ch(b)
    for k in range(4):
        lhs = omega_component(A + B, k)
        rhs = SymFn("h")
        for i in range(k + 1):
            rhs = rhs + omega_component(A, i) * omega_component(B, k - i)
        assert lhs == rhs


@given(symfns(3), st.integers(1, 4))
def test_eps_at_power_of_t_is_principal(f, n):
    assert eps_ut(f).subs(u=t ** n) == eval_hom_frac(f, principal(T, n, "t"))


def test_fraction_coefficients():
    f = SymFn.p(2).scale(Fraction(1, 2))
    assert eval_hom(f, ch({1: 1})) == Series(Z, {(2,): Fraction(1, 2)})
