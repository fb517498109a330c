"""Lambda-ring operations on virtual characters.

A virtual character is an integer-coefficient :class:`Series`; infinite
characters such as ``z + z^2 + ...`` are entered already truncated to the
window.  The evaluation ``lambda(A)`` uses the product formula
``prod_I (1 - x^I)^{a_I}`` directly, so no live ``w`` variable is needed.
"""

from fractions import Fraction

from .kernels import FactoredChar, Series
from .kernels.polyfrac import PolyFrac
from .kernels.series import binomial_power
from .partitions import partitions_of
from .symfun import SymFn

__all__ = [
    "character",
    "principal",
    "dim_at",
    "dim_total",
    "dim_zero",
    "lambda_i",
    "lambda_eval",
    "lambda_w",
    "eval_hom",
    "eval_hom_e",
    "eval_hom_frac",
    "omega_component",
    "eps_ut",
    "dualize",
    "PoleError",
]


class PoleError(ZeroDivisionError):
    """``lambda(wA)`` has a pole at ``w = 1`` (negative weight-zero multiplicity)."""


def character(ctx, terms):
    """Build a character from ``{exponent (int or tuple or name-dict): int}``."""
    out = {}
    for e, c in terms.items():
        if isinstance(e, int):
            e = (e,)
        elif isinstance(e, dict):
            v = [0] * ctx.nvars
            for nm, x in e.items():
                v[ctx.index(nm)] = x
            e = tuple(v)
        out[tuple(e)] = out.get(tuple(e), 0) + c
    return Series(ctx, out)


def principal(ctx, n, var="z"):
    """``1 + var + ... + var^(n-1)``."""
    return character(ctx, {_mono(ctx, var, i): 1 for i in range(n)})


def _mono(ctx, var, i):
    v = [0] * ctx.nvars
    v[ctx.index(var)] = i
    return tuple(v)


def _check_integral(A):
    for c in A.terms.values():
        if not (isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1)):
            raise TypeError(f"virtual characters need integer coefficients, got {c}")


def dim_at(A, a):
    """Multiplicity of the weight ``a`` (an int for one-variable characters)."""
    e = (a,) if isinstance(a, int) else tuple(a)
    if len(e) != A.ctx.nvars:
        raise ValueError(f"weight {a} does not match {A.ctx.names}")
    if not A.ctx.admits(e):
        raise ValueError(f"weight {a} lies outside the window {A.ctx!r}")
    return A.terms.get(e, 0)


def dim_total(A):
    return sum(A.terms.values())


def dim_zero(A):
    return A.terms.get((0,) * A.ctx.nvars, 0)


def lambda_i(A, i):
    """``lambda^i(A) = (-1)^i [w^i] prod (1 - w x^e)^{c_e}``."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    _check_integral(A)
    ctx = A.ctx
    zero = Series(ctx)
    # coefficients of w^0..w^i
    acc = [Series.const(ctx, 1)] + [zero] * i
    for e, c in sorted(A.terms.items()):
        mono = Series(ctx, {e: 1}, clip=False)
        powers = [Series.const(ctx, 1)]
        for _ in range(i):
            powers.append(powers[-1] * mono)
        fac = [_binom(c, k) * (-1) ** k for k in range(i + 1)]
        new = []
        for d in range(i + 1):
            s = zero
            for k in range(d + 1):
                if fac[k]:
                    s = s + (acc[d - k] * powers[k]).scale(fac[k])
            new.append(s)
        acc = new
    return acc[i] if i % 2 == 0 else -acc[i]


def _binom(a, k):
    """Generalised binomial coefficient ``C(a, k)`` for integer ``a``."""
    out = Fraction(1)
    for j in range(k):
        out = out * (a - j) / (j + 1)
    return int(out)


def _orientation(ctx, e):
    """+1 if ``x^e`` is small in ``ctx`` (expand directly), -1 if large, 0 if undecidable."""
    if ctx.prec is not None:
        w = ctx.weight(e)
        return (w > 0) - (w < 0)
    signs = {(x > 0) - (x < 0) for x in e if x}
    if signs == {1}:
        return 1
    if signs == {-1}:
        return -1
    return 0


def lambda_eval(A, as_series=False):
    """``lambda(A)`` at ``w = 1``.

    One-variable characters give a :class:`FactoredChar` (or its expansion
    when ``as_series``); multi-variable ones give a :class:`Series`.
    ``dim_0(A) > 0`` gives zero and ``dim_0(A) < 0`` raises :class:`PoleError`.
    """
    _check_integral(A)
    ctx = A.ctx
    d0 = dim_zero(A)
    if d0 < 0:
        raise PoleError(f"lambda(A) has a pole at w=1: dim_0(A) = {d0}")
    if ctx.nvars == 1:
        fc = FactoredChar.from_lambda({e[0]: int(c) for e, c in A.terms.items()}, ctx.names[0])
        return fc.to_series(ctx) if as_series else fc
    if d0 > 0:
        return Series(ctx)
    out = Series.const(ctx, 1)
    for e, c in sorted(A.terms.items()):
        c = int(c)
        if not any(e):
            continue
        out = out * _one_factor(ctx, e, c)
    return out


def _one_factor(ctx, e, c, skip=0):
    """``(1 - x^e)^c`` expanded about 0 in ``ctx``.

    The expansion direction is read off ``e[skip:]``, so leading
    (x-)variables are carried along exactly.
    """
    if c >= 0:
        return binomial_power(ctx, e, c)
    o = _orientation(ctx.drop_leading(skip), e[skip:])
    if o > 0:
        return binomial_power(ctx, e, c)
    if o < 0:
        # (1 - X)^c = (-X)^c (1 - X^{-1})^c
        neg = tuple(-x for x in e)
        sign = -1 if c % 2 else 1
        return binomial_power(ctx, neg, c).shift(tuple(c * x for x in e)).scale(sign)
    raise ValueError(f"monomial {e} has weight 0 in {ctx!r}; its expansion direction is ambiguous")


def lambda_w(A, ctx, wname="w"):
    """``lambda(w A)`` as a series in ``ctx`` (which must contain ``wname`` with a finite cap)."""
    _check_integral(A)
    if wname not in ctx:
        raise ValueError(f"context lacks {wname}")
    wi = ctx.index(wname)
    out = Series.const(ctx, 1)
    for e, c in sorted(A.terms.items()):
        full = [0] * ctx.nvars
        for nm, x in zip(A.ctx.names, e):
            full[ctx.index(nm)] = x
        full[wi] = 1
        full = tuple(full)
        if int(c) >= 0:
            out = out * binomial_power(ctx, full, int(c))
        else:
            out = out * _w_negative(ctx, full, int(c), wi)
    return out


def _w_negative(ctx, e, c, wi):
    b = -c
    hi = ctx.hi[wi]
    if hi is None:
        raise ValueError("w must be capped")
    terms = {}
    coef = 1
    for k in range(hi + 1):
        terms[tuple(k * x for x in e)] = coef
        coef = coef * (b + k) // (k + 1)
    return Series(ctx, terms)


def dualize(A):
    """Negate every exponent; raises if the negated support leaves the window."""
    out = {}
    for e, c in A.terms.items():
        ne = tuple(-x for x in e)
        if not A.ctx.admits(ne):
            raise ValueError(f"dual exponent {ne} lies outside the window {A.ctx!r}")
        out[ne] = c
    return Series(A.ctx, out)


# evaluation homomorphism ----------------------------------------------------------

def _coeff_to_series(c, ctx):
    if isinstance(c, Series):
        return c.embed(ctx)
    if isinstance(c, PolyFrac):
        return c.to_series(ctx)
    return Series.const(ctx, c)


def eval_hom(f, A):
    """``f(A)``: ``p_j`` acts by scaling exponents by ``j``."""
    ctx = A.ctx
    g = f.to("p")
    cache = {}

    def pj(j):
        if j not in cache:
            cache[j] = A.adams(j)
        return cache[j]

    out = Series(ctx)
    for rho, c in g.coeffs.items():
        term = _coeff_to_series(c, ctx)
        for j in rho:
            term = term * pj(j)
        out = out + term
    return out


def eval_hom_e(f, A):
    """``f(A)`` through ``e_i -> lambda^i(A)`` (independent route)."""
    ctx = A.ctx
    g = f.to("e")
    cache = {}
    out = Series(ctx)
    for lam, c in g.coeffs.items():
        term = _coeff_to_series(c, ctx)
        for i in lam:
            if i not in cache:
                cache[i] = lambda_i(A, i)
            term = term * cache[i]
        out = out + term
    return out


def eval_hom_frac(f, A):
    """``f(A)`` as an exact :class:`PolyFrac` for a finite character in q, t, u."""
    names = A.ctx.names
    g = f.to("p")
    cache = {}
    out = PolyFrac(0)
    for rho, c in g.coeffs.items():
        term = PolyFrac.coerce(c)
        for j in rho:
            if j not in cache:
                cache[j] = PolyFrac.from_terms(A.adams(j).terms, names) if A.terms else PolyFrac(0)
            term = term * cache[j]
        out = out + term
    return out


def omega_component(A, k):
    """Degree-``k`` part of ``Omega(A)``: ``sum_{|mu|=k} m_mu(A) h_mu`` (h-basis SymFn)."""
    coeffs = {}
    for mu in partitions_of(k):
        v = eval_hom(SymFn.m(mu), A)
        if not v.is_zero():
            coeffs[mu] = v
    return SymFn("h", coeffs)


def eps_ut(f):
    """``p_j -> (1 - u^j)/(1 - t^j)`` applied to ``f`` (result in q, t, u)."""
    u = PolyFrac.var("u")
    t = PolyFrac.var("t")
    g = f.to("p")
    cache = {}
    out = PolyFrac(0)
    for rho, c in g.coeffs.items():
        term = PolyFrac.coerce(c)
        for j in rho:
            if j not in cache:
                cache[j] = (1 - u ** j) / (1 - t ** j)
            term = term * cache[j]
        out = out + term
    return out
