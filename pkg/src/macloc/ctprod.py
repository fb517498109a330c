"""Constant-term inner products ``(f, g)'_M = <f(x) g(x^*) Delta_M(x)>``.

``Delta_M`` is expanded termwise in the small variables of ``M``; the
x-exponents are always exact.  Inner products never form the full product
``f g^* Delta_M``: the pairing ``const(F G) = sum_v F_v G_{-v}`` is used on the
small factor ``f g^*`` against a cached ``Delta_M``.
"""

import threading

from .kernels import Context, Series
from .plethysm import _one_factor
from .symfun import XPoly, expand_nvars, h_nvars, x_names

__all__ = [
    "KernelSpec",
    "delta_M",
    "delta_plain",
    "lambda_x",
    "const_term",
    "inner_product",
    "inner_product_qt",
    "pair_omega",
    "pair_omega_twisted",
    "hall_pairing",
    "kernel_identity_sides",
]


class KernelSpec:
    """Weight-function data: a character ``M`` (constant term 1) and ``n``."""

    __slots__ = ("M", "n", "label")

    def __init__(self, M, n, label=None):
        if M.constant_term() != 1:
            raise ValueError(f"kernel M must have constant term 1, got {M.constant_term()}")
        for e, c in M.terms.items():
            if not any(e):
                continue
            if not _small_direction(M.ctx, e) and c < 0:
                raise ValueError(
                    f"monomial {e} of M has weight 0 and a negative coefficient; "
                    "its x-direction expansion is ambiguous")
        self.M = M
        self.n = n
        self.label = label or f"poly:{M}"

    @classmethod
    def hall(cls, ctx, n):
        return cls(Series.const(ctx, 1), n, "hall")

    @classmethod
    def macdonald(cls, ctx, n):
        """``M = (1-t)(1 + q + ... + q^D)`` with ``D`` the largest q-power the window keeps."""
        qi, ti = ctx.index("q"), ctx.index("t")
        if ctx.prec is not None:
            dq = ctx.prec // ctx.weights[qi]
            if ctx.hi[qi] is not None:
                dq = min(dq, ctx.hi[qi])
        else:
            dq = ctx.hi[qi]
        if dq is None:
            raise ValueError("the Macdonald kernel needs a q-cap")
        terms = {}
        for k in range(dq + 1):
            e = [0] * ctx.nvars
            e[qi] = k
            terms[tuple(e)] = 1
            e[ti] = 1
            terms[tuple(e)] = -1
        return cls(Series(ctx, terms), n, "macdonald")

    def __eq__(self, other):
        return isinstance(other, KernelSpec) and self.n == other.n and self.M == other.M

    def __hash__(self):
        return hash((self.n, self.M.ctx, tuple(sorted(self.M.terms.items()))))

    def to_json(self):
        return {"label": self.label, "n": self.n, "M": self.M.to_json()}


def _small_direction(ctx, e):
    if ctx.prec is not None:
        return ctx.weight(e) != 0
    return any(e)


def lambda_x(terms, n, ctx):
    """``lambda`` of an x-dependent character ``{x-exp + small-exp: int}`` as an XPoly.

    Factors ``(1 - x^v s^I)^c`` with ``c < 0`` are expanded in the direction
    in which ``s^I`` is small; ``I = 0`` with ``c < 0`` is rejected.
    """
    full = ctx.with_leading(x_names(n))
    out = Series.const(full, 1)
    for e, c in sorted(terms.items()):
        c = int(c)
        if c == 0:
            continue
        if not any(e):
            if c > 0:
                return XPoly(n, Series(full))
            raise ZeroDivisionError("pole: negative multiplicity of the trivial weight")
        if c < 0 and not any(e[n:]):
            raise ValueError(f"factor (1 - x^{e[:n]})^{c} has no small-variable direction")
        out = out * _one_factor(full, e, c, skip=n)
    return XPoly(n, out)


def _pair_exp(n, i, j):
    v = [0] * n
    v[i] += 1
    v[j] -= 1
    return tuple(v)


_cache = {}
_lock = threading.Lock()


def delta_M(spec, ctx=None):
    """``Delta_M = prod_{i != j} prod_I (1 - s^I x_i/x_j)^{m_I}`` as an XPoly over ``ctx``."""
    ctx = ctx or spec.M.ctx
    M = spec.M.embed(ctx) if spec.M.ctx != ctx else spec.M
    key = (spec, ctx)
    with _lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    n = spec.n
    terms = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            xv = _pair_exp(n, i, j)
            for e, c in M.terms.items():
                k = xv + e
                terms[k] = terms.get(k, 0) + c
    res = lambda_x(terms, n, ctx)
    with _lock:
        _cache.setdefault(key, res)
    return res


def delta_plain(n, ctx=None):
    """``Delta = Delta_1 = prod_{i != j}(1 - x_i/x_j)``."""
    ctx = ctx or Context.exact(())
    return delta_M(KernelSpec.hall(ctx, n), ctx)


def const_term(F):
    """``<F> = [x]_1 F / n!``."""
    return F.const_term()


def _xpoly(f, n, ctx):
    if isinstance(f, XPoly):
        return f
    return expand_nvars(f, n, ctx)


def inner_product(f, g, spec, ctx=None):
    """``(f, g)'_M`` as a series in ``ctx``."""
    ctx = ctx or spec.M.ctx
    n = spec.n
    fx = _xpoly(f, n, ctx)
    gx = _xpoly(g, n, ctx).dual()
    return (fx * gx).pair_const(delta_M(spec, ctx))


def inner_product_qt(f, g, n, ctx):
    """The finite-variable Macdonald pairing with ``M`` truncated to the q-window of ``ctx``."""
    return inner_product(f, g, KernelSpec.macdonald(ctx, n), ctx)


def hall_pairing(f, g):
    """Infinite-variable Hall pairing via ``<p_lam, p_mu> = delta z_lam``."""
    from .partitions import zee

    a, b = f.to("p"), g.to("p")
    out = 0
    for lam, c in a.coeffs.items():
        d = b.coeffs.get(lam)
        if d is not None:
            out = out + c * d * zee(lam)
    return out


def pair_omega(f, spec, ctx=None, widen=None):
    """``(f, Omega)'_M``.

    By default only ``h_k`` with ``k`` a degree present in ``f`` is paired
    (every monomial of ``Delta_M`` has x-degree 0).  With ``widen=W`` every
    ``h_k`` for ``k <= deg f + W`` is summed instead, as a cross-check.
    """
    ctx = ctx or spec.M.ctx
    n = spec.n
    fx = _xpoly(f, n, ctx)
    return _pair_h(fx, spec, ctx, widen)


def pair_omega_twisted(f, m, spec, ctx=None, widen=None):
    """``(f e_n^m, Omega)'_M`` with ``e_n^m`` applied as an x-shift."""
    ctx = ctx or spec.M.ctx
    n = spec.n
    fx = _xpoly(f, n, ctx).shift(m)
    return _pair_h(fx, spec, ctx, widen)


def _pair_h(fx, spec, ctx, widen):
    n = spec.n
    degrees = {sum(e[:n]) for e in fx.terms}
    if widen is not None:
        top = max(degrees, default=0) + widen
        degrees = set(range(0, top + 1))
    delta = delta_M(spec, ctx)
    acc = Series(ctx)
    for d in sorted(degrees):
        if d < 0:
            continue
        hx = h_nvars(d, n, ctx).dual()
        acc = acc + (fx * hx).pair_const(delta)
    return acc


def kernel_identity_sides(M, n, ctx=None):
    """Both sides of ``Delta(x) lambda(C x x^*) = lambda(C)^n Delta_M(x)`` with ``C = M - 1``."""
    from .plethysm import lambda_eval

    ctx = ctx or M.ctx
    M = M.embed(ctx)
    C = M - 1
    terms = {}
    for i in range(n):
        for j in range(n):
            xv = _pair_exp(n, i, j) if i != j else (0,) * n
            for e, c in C.terms.items():
                k = xv + e
                terms[k] = terms.get(k, 0) + c
    lhs = delta_plain(n, ctx) * lambda_x(terms, n, ctx)
    lam_c = lambda_eval(C, as_series=True) if ctx.nvars == 1 else lambda_eval(C)
    rhs = delta_M(KernelSpec(M, n), ctx) * (lam_c ** n)
    return lhs, rhs
