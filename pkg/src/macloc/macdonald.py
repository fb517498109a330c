"""Macdonald polynomials ``P_mu`` over Q(q,t) and their norm formulas.

``P_mu`` is obtained by Gram-Schmidt over the dominance ideal below ``mu``
for the pairing ``<p_lam, p_lam> = z_lam prod_i (1 - q^lam_i)/(1 - t^lam_i)``,
processing partitions in increasing lexicographic order (a linear extension
of dominance).  Results are cached write-once.
"""

import threading
from math import comb

from .ctprod import inner_product_qt
from .kernels import Context, Series
from .kernels.polyfrac import PolyFrac
from .partitions import Partition, add_rect, dominance_leq, partitions_of, zee
from .plethysm import character, eps_ut, eval_hom_frac, lambda_eval, principal
from .symfun import SymFn, expand_nvars, m_to_p, register_P

DEFAULT_BOUND = 6

q = PolyFrac.var("q")
t = PolyFrac.var("t")
u = PolyFrac.var("u")

_lock = threading.Lock()
_P = {}  # Partition -> (p-expansion dict, gram norm)
_zqt = {}


class GramError(ArithmeticError):
    pass


def z_qt(lam):
    """``<p_lam, p_lam>_{q,t}``."""
    lam = Partition(lam)
    hit = _zqt.get(lam)
    if hit is None:
        hit = PolyFrac(zee(lam))
        for part in lam:
            hit = hit * (1 - q ** part) / (1 - t ** part)
        _zqt[lam] = hit
    return hit


def _pair_p(a, b):
    out = PolyFrac(0)
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    for rho, c in small.items():
        d = big.get(rho)
        if d is not None:
            out = out + c * d * z_qt(rho)
    return out


def qt_pairing(f, g):
    """Infinite-variable ``<f, g>_{q,t}`` for SymFn with exact coefficients."""
    a = {k: PolyFrac.coerce(v) for k, v in f.to("p").coeffs.items()}
    b = {k: PolyFrac.coerce(v) for k, v in g.to("p").coeffs.items()}
    return _pair_p(a, b)


def _m_in_p(mu):
    return {rho: PolyFrac(c) for rho, c in m_to_p(mu.size)[mu].items()}


def _build(mu):
    mu = Partition(mu)
    with _lock:
        hit = _P.get(mu)
    if hit is not None:
        return hit
    below = [lam for lam in reversed(partitions_of(mu.size)) if lam != mu and dominance_leq(lam, mu)]
    vec = _m_in_p(mu)
    target = dict(vec)
    for lam in below:
        plam, nlam = _build(lam)
        coef = _pair_p(target, plam) / nlam
        if coef.is_zero():
            continue
        for rho, c in plam.items():
            v = vec.get(rho, PolyFrac(0)) - coef * c
            if v.is_zero():
                vec.pop(rho, None)
            else:
                vec[rho] = v
    norm = _pair_p(vec, vec)
    if norm.is_zero():
        raise GramError(f"degenerate Gram system at {mu}")
    res = (vec, norm)
    with _lock:
        return _P.setdefault(mu, res)


def _check_bound(mu, bound):
    bound = DEFAULT_BOUND if bound is None else bound
    if Partition(mu).size > bound:
        raise ValueError(f"|mu| = {Partition(mu).size} exceeds the degree bound {bound}")


def macdonald_P(mu, bound=None):
    """``P_mu`` in the monomial basis with PolyFrac coefficients."""
    _check_bound(mu, bound)
    vec, _ = _build(mu)
    return SymFn("p", vec).to("m")


def gram_norm(mu, bound=None):
    """``<P_mu, P_mu>_{q,t}`` as produced by the Gram-Schmidt step."""
    _check_bound(mu, bound)
    return _build(mu)[1]


def _from_P(f):
    out = SymFn("m")
    for mu, c in f.coeffs.items():
        out = out + macdonald_P(mu, bound=mu.size).scale(c)
    return out


def _to_P(f):
    """Peel off the lexicographically largest monomial term repeatedly."""
    rem = {k: PolyFrac.coerce(v) for k, v in f.coeffs.items()}
    out = {}
    while rem:
        lam = max(rem, key=lambda p: (p.size, tuple(p)))
        c = rem[lam]
        out[lam] = c
        for nu, d in macdonald_P(lam, bound=lam.size).coeffs.items():
            v = rem.get(nu, PolyFrac(0)) - c * d
            if v.is_zero():
                rem.pop(nu, None)
            else:
                rem[nu] = v
    return SymFn("P", out)


register_P(_to_P, _from_P)


# closed formulas --------------------------------------------------------------

def c_poly(mu):
    """``prod_s (1 - q^{a(s)} t^{l(s)+1})``."""
    mu = Partition(mu)
    out = PolyFrac(1)
    for s in mu.cells():
        out = out * (1 - q ** mu.arm(s) * t ** (mu.leg(s) + 1))
    return out


def cprime_poly(mu):
    """``prod_s (1 - q^{a(s)+1} t^{l(s)})``."""
    mu = Partition(mu)
    out = PolyFrac(1)
    for s in mu.cells():
        out = out * (1 - q ** (mu.arm(s) + 1) * t ** mu.leg(s))
    return out


def norm_inf(mu):
    return cprime_poly(mu) / c_poly(mu)


def a_coeff(mu):
    """Coefficient of ``P_mu`` in ``Omega``: ``c'_mu^{-1} prod_s (t^{l'(s)} - q^{a'(s)+1})``."""
    mu = Partition(mu)
    out = PolyFrac(1)
    for s in mu.cells():
        out = out * (t ** mu.coleg(s) - q ** (mu.coarm(s) + 1))
    return out / cprime_poly(mu)


def eps_formula(mu):
    """``c_mu^{-1} prod_s (t^{l'(s)} - q^{a'(s)} u)``."""
    mu = Partition(mu)
    out = PolyFrac(1)
    for s in mu.cells():
        out = out * (t ** mu.coleg(s) - q ** mu.coarm(s) * u)
    return out / c_poly(mu)


def omega_in_P(k):
    """``h_k`` in the P-basis (the expansion oracle for :func:`a_coeff`)."""
    return SymFn.h(k).to("P") if k else SymFn.one("P")


# principal specialisation -------------------------------------------------------

_T = Context.exact(("t",))


def eval_principal(f, n):
    """``f(1 + t + ... + t^{n-1})`` as an exact PolyFrac."""
    return eval_hom_frac(f, principal(_T, n, "t"))


def eval_principal_eps(f, n):
    """Same value through ``eps_{u,t}`` at ``u = t^n``."""
    return eps_ut(f).subs(u=t ** n)


# norm formulas --------------------------------------------------------------------

def _qt_index(ctx):
    return ctx.index("q"), ctx.index("t")


def _mono(ctx, a, b):
    qi, ti = _qt_index(ctx)
    e = [0] * ctx.nvars
    e[qi] = a
    e[ti] = b
    return tuple(e)


def _q_range(ctx):
    qi = ctx.index("q")
    if ctx.prec is not None:
        top = ctx.prec // ctx.weights[qi]
        return top if ctx.hi[qi] is None else min(top, ctx.hi[qi])
    return ctx.hi[qi]


def ns_character(mu, n, ctx):
    """``(t-q)(1-t)/(1-q) sum_{i<j} q^{mu_i-mu_j} t^{j-i-1}``, truncated to ``ctx``."""
    mu = Partition(mu).as_tuple(n)
    dq = _q_range(ctx)
    terms = {}
    for i in range(n):
        for j in range(i + 1, n):
            d, s = mu[i] - mu[j], j - i - 1
            for k in range(dq + 1):
                for (a, b), c in (((1, 0), -1), ((0, 1), 1), ((1, 1), 1), ((0, 2), -1)):
                    e = _mono(ctx, d + k + a, s + b)
                    terms[e] = terms.get(e, 0) + c
    return character(ctx, terms)


def finite_norm_rhs(mu, n, ctx):
    """``lambda`` of :func:`ns_character` as a q,t-series."""
    return lambda_eval(ns_character(mu, n, ctx))


def nsa_character(n, ctx):
    """``n (t-q)/(1-q) + (q - t^n) t^{-rho}/(1-q)`` truncated to ``ctx``."""
    dq = _q_range(ctx)
    terms = {}

    def add(a, b, c):
        e = _mono(ctx, a, b)
        terms[e] = terms.get(e, 0) + c

    for k in range(dq + 1):
        add(k, 1, n)
        add(k + 1, 0, -n)
        for i in range(n):
            add(k + 1, -i, 1)
            add(k, n - i, -1)
    return character(ctx, terms)


def nsa_context(n, degree):
    """Weighted q,t context (q weight n) holding every monomial of total degree <= ``degree``."""
    return Context(("q", "t"), weights=(n, 1), prec=n * degree)


def nsa_rhs(mu, n, m, ctx):
    """``lambda(nsa_character) P_mu(t^rho) t^{m C(n,2)} / a_{mu+m^n}`` as a q,t-series.

    ``t^{m C(n,2)}`` is the ratio ``P_{mu+m^n}(t^rho) / P_mu(t^rho)``; without
    it the finite-m factor diverges like ``t^{-m C(n,2)}``.
    """
    nu = add_rect(mu, m, n)
    frac = eval_principal(macdonald_P(mu, bound=Partition(mu).size), n)
    frac = frac * t ** (m * comb(n, 2)) / a_coeff(nu)
    return lambda_eval(nsa_character(n, ctx)) * frac.to_series(ctx)


def restrict_total_degree(s, degree, names=("q", "t")):
    """Keep the terms with ordinary total degree <= ``degree`` in ``names``."""
    idx = [s.ctx.index(v) for v in names]
    return Series(s.ctx, {e: c for e, c in s.terms.items() if sum(e[i] for i in idx) <= degree}, clip=False)


def agreement_degree(a, b, cap, names=("q", "t")):
    """Largest total degree ``D <= cap`` with ``a == b`` on all degrees ``<= D`` (``-1`` if none)."""
    idx = [a.ctx.index(v) for v in names]
    diff = a - b
    bad = [sum(e[i] for i in idx) for e in diff.terms]
    bad = [d for d in bad if d <= cap]
    return cap if not bad else min(bad) - 1


def finite_norm_lhs(mu, n, ctx, bound=None):
    """``(P_mu, P_mu)'_{q,t}`` computed as a constant term."""
    P = macdonald_P(mu, bound=bound)
    return inner_product_qt(P, P, n, ctx)


def pieri_en_check(mu, n, m):
    """``e_n^m P_mu = P_{mu+m^n}`` in ``n`` variables, exactly."""
    mu = Partition(mu)
    nu = add_rect(mu, m, n)
    lhs = expand_nvars(macdonald_P(mu, bound=mu.size), n).shift(m)
    rhs = expand_nvars(macdonald_P(nu, bound=nu.size), n)
    return lhs == rhs
