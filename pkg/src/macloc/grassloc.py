"""Torus localization on the Grassmannian of codimension-n subspaces of ``Z``.

Characters here are one-variable (z) unless ``w`` is carried as a formal
series variable.  Two evaluations of the same Euler characteristic are
provided: :func:`chi_loc` (sum over fixed points) and :func:`chi0_ct`
(constant term with ``lambda(x^* Z)^{-1}`` expanded about ``x = infinity``).
"""

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .ctprod import KernelSpec, delta_plain, lambda_x
from .kernels import Context, FactoredChar, Series
from .kernels.series import binomial_power
from .plethysm import PoleError, _w_negative, character, eval_hom, lambda_eval, principal
from .symfun import SymFn, XPoly, expand_nvars, x_names

__all__ = [
    "Geometric",
    "BundleData",
    "FixedPoint",
    "PreconditionError",
    "weight_space",
    "fixed_points",
    "cotangent_char",
    "chi_loc",
    "chi0_ct",
    "gap_cm",
    "lemma_conditions",
    "theorem1_rhs",
    "theorem1_lhs",
    "theorem1_data",
    "z_context",
    "wz_context",
]


class PreconditionError(ValueError):
    pass


def z_context(cap, floor=-64):
    return Context(("z",), lo=(floor,), hi=(cap,))


def wz_context(wcap, zcap, floor=-64):
    return Context(("w", "z"), lo=(0, floor), hi=(wcap, zcap))


# data ----------------------------------------------------------------------

@dataclass(frozen=True)
class Geometric:
    """The infinite character ``z^start + z^(start+1) + ...``."""

    start: int = 1

    def dim_at(self, a):
        return 1 if a >= self.start else 0

    def truncate(self, cap):
        return {a: 1 for a in range(self.start, cap + 1)}

    def __str__(self):
        return f"z^{self.start}+z^{self.start + 1}+..."


def _as_dict(X):
    """A z-character as ``{exponent: int}``; ``X`` is a dict, a Series in z or None."""
    if X is None:
        return {}
    if isinstance(X, dict):
        return {a: c for a, c in X.items() if c}
    if isinstance(X, Series):
        i = X.ctx.index("z")
        return {e[i]: int(c) for e, c in X.terms.items()}
    raise TypeError(f"cannot read a character from {type(X).__name__}")


@dataclass
class BundleData:
    """``E_U = A U + B U^* + C U U^*`` with twist ``det(U)^m`` and insertion ``f``."""

    A: object = None
    B: object = None
    C: object = None
    m: int = 0
    f: SymFn = field(default_factory=lambda: SymFn.one("m"))

    def with_m(self, m):
        return BundleData(self.A, self.B, self.C, m, self.f)

    def parts(self, bcap):
        B = self.B.truncate(bcap) if isinstance(self.B, Geometric) else _as_dict(self.B)
        return _as_dict(self.A), B, _as_dict(self.C)

    def is_zero(self):
        return not (_as_dict(self.A) or self.B or _as_dict(self.C))


@dataclass(frozen=True)
class FixedPoint:
    S: tuple
    V: tuple

    @property
    def U(self):
        return {a: 1 for a in self.S}


def weight_space(k):
    """``Z = 1 + z + ... + z^k``."""
    return {a: 1 for a in range(k + 1)}


def _weights(Z):
    Z = _as_dict(Z)
    if any(c < 0 for c in Z.values()):
        raise ValueError("Z must have nonnegative multiplicities")
    if any(c > 1 for c in Z.values()):
        raise ValueError(f"Z has a repeated weight {[a for a, c in Z.items() if c > 1]}: fixed points are not isolated")
    return sorted(Z)


def fixed_points(Z, n):
    ws = _weights(Z)
    if n > len(ws):
        raise ValueError(f"n = {n} exceeds dim Z = {len(ws)}")
    return [FixedPoint(S, tuple(a for a in ws if a not in S)) for S in combinations(ws, n)]


def cotangent_char(p):
    """``U^* V`` as ``{exponent: multiplicity}``."""
    out = {}
    for a in p.S:
        for b in p.V:
            out[b - a] = out.get(b - a, 0) + 1
    return out


def _EU(data, S, bcap):
    """``E_U`` at the fixed point with weights ``S``."""
    A, B, C = data.parts(bcap)
    out = {}

    def add(e, c):
        out[e] = out.get(e, 0) + c

    for a in S:
        for x, c in A.items():
            add(x + a, c)
        for x, c in B.items():
            add(x - a, c)
        for b in S:
            for x, c in C.items():
                add(x + a - b, c)
    return {e: c for e, c in out.items() if c}


# margins ---------------------------------------------------------------------

def _internal(ctx, data, Z, n):
    """Internal context and B truncation large enough for exactness on ``ctx``."""
    zi = ctx.index("z")
    cap = ctx.hi[zi]
    k = max(_weights(Z)) if _weights(Z) else 0
    low = min(_weights(Z)) if _weights(Z) else 0
    spread = k - low
    W = ctx.hi[ctx.index("w")] if "w" in ctx else 1
    neg = _min_exponent(data, spread)
    margin = W * max(0, -neg)
    dint = cap + margin + max(0, -data.m) * n * max(abs(k), abs(low))
    bcap = dint + spread + 1
    hi = list(ctx.hi)
    hi[zi] = dint
    lo = list(ctx.lo)
    lo[zi] = None
    return ctx.replace(lo=tuple(lo), hi=tuple(hi)), bcap


def _min_exponent(data, spread):
    """Lower bound for the z-exponents of ``E_U`` over all fixed points."""
    A, _, C = data.parts(0)
    vals = [0]
    vals += [x - spread for x in A] if A else []
    if data.B is not None:
        start = data.B.start if isinstance(data.B, Geometric) else min(_as_dict(data.B), default=0)
        vals.append(start - spread)
    vals += [x - spread for x in C] if C else []
    return min(vals)


# chi by localization ---------------------------------------------------------------

def _lam_w(E, ctx):
    """``lambda(w E)`` for a z-character ``E`` into ``ctx`` (which holds w)."""
    zi, wi = ctx.index("z"), ctx.index("w")
    out = Series.const(ctx, 1)
    for a, c in sorted(E.items()):
        e = [0] * ctx.nvars
        e[zi] = a
        e[wi] = 1
        e = tuple(e)
        out = out * (binomial_power(ctx, e, c) if c >= 0 else _w_negative(ctx, e, c, wi))
    return out


def _z_series(ctx, terms):
    zi = ctx.index("z")
    out = {}
    for a, c in terms.items():
        e = [0] * ctx.nvars
        e[zi] = a
        out[tuple(e)] = c
    return Series(ctx, out)


def _shift_z(s, a):
    e = [0] * s.ctx.nvars
    e[s.ctx.index("z")] = a
    return s.shift(e)


def chi_loc_summand(data, p, ctx, bcap):
    """``e_n(U)^m f(U) lambda(w E_U) / lambda(T^*_U)`` (before the final shift)."""
    inv_t = FactoredChar.from_lambda(cotangent_char(p)).inverse()
    s = inv_t.to_series(ctx)
    U = _z_series(ctx, p.U)
    s = s * eval_hom(data.f, U)
    E = _EU(data, p.S, bcap)
    if E:
        if "w" in ctx:
            s = s * _lam_w(E, ctx)
        else:
            try:
                s = s * lambda_eval(character(Context(("z",), hi=(ctx.hi[ctx.index("z")],)), E)).to_series(ctx)
            except PoleError as exc:
                raise PoleError(f"lambda(E_U) has a pole at w=1 for U with weights {p.S}: {exc}") from None
    return _shift_z(s, data.m * sum(p.S))


def chi_loc(data, Z, n, ctx):
    """``sum_U e_n(U)^m f(U) lambda(w E_U) lambda(U^* V)^{-1}`` on the window of ``ctx``."""
    ictx, bcap = _internal(ctx, data, Z, n)
    acc = Series(ictx)
    for p in fixed_points(Z, n):
        acc = acc + chi_loc_summand(data, p, ictx, bcap)
    return Series(ctx, acc.terms)


# chi0 by constant term ---------------------------------------------------------------

def _E_x_terms(data, n, bcap):
    """``E_x`` as ``{x-exp + (z,) : int}`` with ``U -> x_1 + ... + x_n``."""
    A, B, C = data.parts(bcap)
    out = {}

    def add(xv, a, c):
        k = tuple(xv) + (a,)
        out[k] = out.get(k, 0) + c

    for i in range(n):
        ei = [0] * n
        ei[i] = 1
        for a, c in A.items():
            add(ei, a, c)
        ei[i] = -1
        for a, c in B.items():
            add(ei, a, c)
        for j in range(n):
            v = [0] * n
            v[i] += 1
            v[j] -= 1
            for a, c in C.items():
                add(v, a, c)
    return {k: c for k, c in out.items() if c}


def _lam_wx(terms, n, ctx):
    """``lambda(w E_x)`` as an XPoly over ``ctx`` (w, z)."""
    full = ctx.with_leading(x_names(n))
    zi, wi = full.index("z"), full.index("w")
    out = Series.const(full, 1)
    for k, c in sorted(terms.items()):
        e = [0] * full.nvars
        e[:n] = k[:n]
        e[zi] = k[n]
        e[wi] = 1
        e = tuple(e)
        out = out * (binomial_power(full, e, c) if c >= 0 else _w_negative(full, e, c, wi))
    return XPoly(n, out)


def _lam_x_plain(terms, n, ctx):
    full_terms = {}
    zi = ctx.index("z")
    for k, c in terms.items():
        e = [0] * ctx.nvars
        e[zi] = k[n]
        full_terms[k[:n] + tuple(e)] = c
    return lambda_x(full_terms, n, ctx)


def chi0_ct(data, Z, n, ctx):
    """``<e_n^m f(x) lambda(w E_x) lambda(x^* Z)^{-1} Delta(x)>`` on the window of ``ctx``."""
    ictx, bcap = _internal(ctx, data, Z, n)
    rest = expand_nvars(data.f, n, ictx).shift(data.m)
    if not data.is_zero():
        terms = _E_x_terms(data, n, bcap)
        lam = _lam_wx(terms, n, ictx) if "w" in ictx else _lam_x_plain(terms, n, ictx)
        rest = rest * lam
    rest = rest * _delta(n, ictx)
    if rest.is_zero():
        return Series(ctx)
    # lambda(x^* Z)^{-1} = prod_i sum_r h_r(Z) x_i^{-r}; only r <= max x_i-degree of rest matters
    degs = [rest.max_degree(i) for i in range(n)]
    if any(R is None or R < 0 for R in degs):
        return Series(ctx)
    hz = complete_values(Z, max(degs), ictx)
    H = XPoly.one(n, ictx)
    for i, R in enumerate(degs):
        terms = {}
        for r in range(R + 1):
            v = [0] * n
            v[i] = -r
            terms[tuple(v)] = hz[r]
        H = H * XPoly.from_terms(n, ictx, terms)
    return Series(ctx, rest.pair_const(H).terms)


def complete_values(Z, R, ctx):
    """``[h_0(Z), ..., h_R(Z)]`` via ``prod_a (1 - z^a y)^{-1}``, one weight at a time."""
    zi = ctx.index("z")
    one = Series.const(ctx, 1)
    H = [one] + [Series(ctx)] * R
    for a, c in sorted(_as_dict(Z).items()):
        e = [0] * ctx.nvars
        e[zi] = a
        for _ in range(c):
            for r in range(1, R + 1):
                H[r] = H[r] + H[r - 1].shift(e)
    return H


def _delta(n, ctx):
    d = delta_plain(n)
    full = ctx.with_leading(x_names(n))
    pad = (0,) * ctx.nvars
    return XPoly(n, Series(full, {e + pad: c for e, c in d.terms.items()}))


# gap ---------------------------------------------------------------------------------

def gap_cm(data, Z, n, ctx):
    """``chi - chi0`` with the least z-exponent of each ``w``-coefficient.

    Returns ``(gap series, {i: min exponent or None})``; ``None`` means the
    coefficient vanishes throughout the window.
    """
    g = chi_loc(data, Z, n, ctx) - chi0_ct(data, Z, n, ctx)
    zi = ctx.index("z")
    if "w" in ctx:
        wi = ctx.index("w")
        W = ctx.hi[wi]
        lead = {}
        for i in range(W + 1):
            exps = [e[zi] for e in g.terms if e[wi] == i]
            lead[i] = min(exps) if exps else None
    else:
        exps = [e[zi] for e in g.terms]
        lead = {0: min(exps) if exps else None}
    return g, lead


def lemma_conditions(data, Z, window=None):
    """Check conditions (a)-(d) on ``A, B, C, Z``; ``window`` bounds B for finite B data."""
    A = _as_dict(data.A)
    C = _as_dict(data.C)
    Zd = _as_dict(Z)
    report = {}
    bad = sorted(a for a, c in A.items() if c < 0)
    report["a"] = {"pass": not bad, "witnesses": bad}
    if isinstance(data.B, Geometric):
        Bdim = data.B.dim_at
        bneg = []
        bnote = "B geometric: coefficients 1, growth polynomial"
        Bknown = lambda e: True  # noqa: E731
    else:
        Bd = _as_dict(data.B)
        Bdim = lambda e: Bd.get(e, 0)  # noqa: E731
        bneg = sorted(a for a, c in Bd.items() if c < 0)
        bnote = "polynomial growth assumed (not verifiable on a truncation)"
        Bknown = (lambda e: True) if window is None else (lambda e: e <= window)  # noqa: E731
    report["b"] = {"pass": not bneg, "witnesses": bneg, "note": bnote}
    cbad = sorted(a for a, c in C.items() if a <= 0)
    report["c"] = {"pass": not cbad, "witnesses": cbad}
    dbad, flagged = [], []
    for a, za in sorted(Zd.items()):
        if za <= 0:
            continue
        for b, cb in sorted(C.items()):
            if cb >= 0:
                continue
            if not Bknown(a + b):
                flagged.append([a, b])
                continue
            need = za - cb - 1
            if Bdim(a + b) < need:
                dbad.append({"a": a, "b": b, "dim_B": Bdim(a + b), "needed": need})
    report["d"] = {"pass": not dbad, "witnesses": dbad, "outside_window": flagged}
    report["all"] = all(report[c]["pass"] for c in "abcd")
    return report


# large-twist limit ----------------------------------------------------------------------------

def theorem1_data(M, k, m=0, f=None):
    """``A = 0, B = z + z^2 + ..., C = M - 1``."""
    Md = _as_dict(M)
    C = dict(Md)
    C[0] = C.get(0, 0) - 1
    return BundleData(None, Geometric(1), {a: c for a, c in C.items() if c}, m, f or SymFn.one("m"))


def _check_M(M, n):
    Md = _as_dict(M)
    if Md.get(0, 0) != 1:
        raise PreconditionError(f"M must have constant term 1, got {Md.get(0, 0)}")
    if any(a < 0 for a in Md):
        raise PreconditionError("M must be a polynomial in z")
    low = {a: c for a, c in Md.items() if c < -1}
    if low:
        raise PreconditionError(f"dim_a(M) >= -1 fails at {low}")
    E = theorem1_E(Md, n)
    d0 = E.get(0, 0)
    if d0 != 0:
        raise PreconditionError(f"dim_0(E) = {d0}, expected 0")
    return Md, E


def theorem1_E(M, n):
    """``E = M U_n U_n^* - U_n^*``."""
    Md = _as_dict(M)
    out = {}
    for a, c in Md.items():
        for i in range(n):
            for j in range(n):
                out[a + i - j] = out.get(a + i - j, 0) + c
    for j in range(n):
        out[-j] = out.get(-j, 0) - 1
    return {e: c for e, c in out.items() if c}


def theorem1_rhs(f, M, n, ctx):
    """``lambda(1 - M)^n f(U_n) lambda(E)``."""
    Md, E = _check_M(M, n)
    one_minus = {a: -c for a, c in Md.items() if a != 0}
    fc = FactoredChar.from_lambda(one_minus) ** n * FactoredChar.from_lambda(E)
    return fc.to_series(ctx) * eval_hom(f, principal(ctx, n, "z"))


def theorem1_lhs(f, M, n, m, ctx):
    """``z^{-m C(n,2)} (f e_n^m, Omega)'_M`` on the window of ``ctx``."""
    from .ctprod import pair_omega_twisted

    Md, _ = _check_M(M, n)
    sh = m * comb(n, 2)
    zi = ctx.index("z")
    hi = list(ctx.hi)
    hi[zi] += sh
    lo = list(ctx.lo)
    lo[zi] = None if lo[zi] is None else lo[zi] + sh
    ictx = ctx.replace(lo=tuple(lo), hi=tuple(hi))
    spec = KernelSpec(_z_series(ictx, Md), n)
    raw = pair_omega_twisted(f, m, spec, ictx)
    return Series(ctx, {e[:zi] + (e[zi] - sh,) + e[zi + 1:]: c for e, c in raw.terms.items()})
