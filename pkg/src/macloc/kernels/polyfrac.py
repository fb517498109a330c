"""Reduced fractions of integer polynomials in q, t, u.

Numerator and denominator are ``flint.fmpz_mpoly`` elements; every result
is reduced by their gcd (which includes the integer content) and normalised
so the denominator's leading coefficient under deglex is positive.
"""

from fractions import Fraction

import flint

from .series import Context, Series

VARS = ("q", "t", "u")
_CTX = flint.fmpz_mpoly_ctx.get(VARS, "deglex")
_GENS = dict(zip(VARS, _CTX.gens()))


def _const(c):
    return _CTX.from_dict({(0, 0, 0): c}) if c else _CTX.from_dict({})


class PolyFrac:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if isinstance(num, Fraction):
            num, den0 = num.numerator, num.denominator
            den = den0 if den is None else den * den0
        if isinstance(num, int):
            num = _const(num)
        if den is None:
            den = _const(1)
        elif isinstance(den, int):
            den = _const(den)
        if den.is_zero():
            raise ZeroDivisionError("PolyFrac with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = _const(1)
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num / g
                    den = den / g
            if den.leading_coefficient() < 0:
                num, den = -num, -den
        self.num = num
        self.den = den

    # construction --------------------------------------------------------
    @classmethod
    def var(cls, name):
        return cls(_GENS[name])

    @classmethod
    def coerce(cls, x):
        if isinstance(x, PolyFrac):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to PolyFrac")

    @classmethod
    def from_terms(cls, terms, names):
        """Exact Laurent polynomial ``{exps: coeff}`` in ``names`` as a fraction."""
        pos = [VARS.index(n) for n in names]
        shift = [0, 0, 0]
        for e in terms:
            for p, x in zip(pos, e):
                shift[p] = min(shift[p], x)
        num = {}
        den_l = 1
        for c in terms.values():
            if isinstance(c, Fraction):
                den_l = den_l * c.denominator // _gcd(den_l, c.denominator)
        for e, c in terms.items():
            v = [-s for s in shift]
            for p, x in zip(pos, e):
                v[p] += x
            cc = c * den_l
            num[tuple(v)] = int(cc)
        den = {tuple(-s for s in shift): den_l}
        return cls(_CTX.from_dict(num), _CTX.from_dict(den))

    @classmethod
    def from_series(cls, s):
        if not s.ctx.is_exact:
            raise ValueError("only exact (untruncated) series convert to PolyFrac")
        return cls.from_terms(s.terms, s.ctx.names)

    # protocol -------------------------------------------------------------
    def __repr__(self):
        return f"PolyFrac({self!s})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PolyFrac(other)
        if not isinstance(other, PolyFrac):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    def __add__(self, other):
        if not isinstance(other, PolyFrac):
            if isinstance(other, (int, Fraction)):
                other = PolyFrac(other)
            else:
                return NotImplemented
        if self.den == other.den:
            return PolyFrac(self.num + other.num, self.den)
        return PolyFrac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return PolyFrac(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-PolyFrac.coerce(other))

    def __rsub__(self, other):
        return PolyFrac.coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, PolyFrac):
            if isinstance(other, (int, Fraction)):
                other = PolyFrac(other)
            else:
                return NotImplemented
        # cross-cancel before multiplying
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n = (self.num / g1) * (other.num / g2)
        if n.is_zero():
            return PolyFrac(0)
        d = (self.den / g2) * (other.den / g1)
        return PolyFrac(n, d, _reduced=d.leading_coefficient() > 0)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero PolyFrac")
        return PolyFrac(self.den, self.num, _reduced=False)

    def __truediv__(self, other):
        return self * PolyFrac.coerce(other).inverse()

    def __rtruediv__(self, other):
        return PolyFrac.coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return PolyFrac(self.num ** k, self.den ** k, _reduced=True)

    # evaluation -----------------------------------------------------------
    def subs(self, **values):
        """Substitute values for variables, e.g. ``f.subs(u=PolyFrac.var('t')**2)``."""
        vals = [PolyFrac.coerce(values[v]) if v in values else PolyFrac(_GENS[v]) for v in VARS]
        return _eval_poly(self.num, vals) / _eval_poly(self.den, vals)

    def numer_terms(self):
        return dict(self.num.to_dict())

    def denom_terms(self):
        return dict(self.den.to_dict())

    def to_series(self, ctx):
        """Expand about 0 in ``ctx``; exact on the window.

        The lowest-weight monomials of numerator and denominator are split
        off first and the residual quotient is computed with enough extra
        precision to absorb a negative net shift.
        """
        names = ctx.names
        for v in VARS:
            if v not in names and (
                self.num.degrees()[VARS.index(v)] > 0 or self.den.degrees()[VARS.index(v)] > 0
            ):
                raise ValueError(f"context lacks variable {v}")
        num = _to_ctx_terms(self.num, ctx)
        den = _to_ctx_terms(self.den, ctx)
        ectx = Context.exact(names).replace(weights=ctx.weights)
        n_ex = Series(ectx, num)
        d_ex = Series(ectx, den)
        if n_ex.is_zero():
            return Series(ctx)
        m0 = d_ex.min_monomial()
        try:
            n0 = n_ex.min_monomial()
        except ValueError:
            n0 = (0,) * ctx.nvars
        net = tuple(a - b for a, b in zip(n0, m0))
        rn = {tuple(a - b for a, b in zip(e, n0)): c for e, c in num.items()}
        rd = {tuple(a - b for a, b in zip(e, m0)): c for e, c in den.items()}
        hi = tuple(None if h is None else h - x for h, x in zip(ctx.hi, net))
        if ctx.prec is not None:
            lo = (None,) * ctx.nvars
        else:
            lo = tuple(None if l is None else min(l - x, 0) for l, x in zip(ctx.lo, net))
        prec = None if ctx.prec is None else ctx.prec - ctx.weight(net)
        wctx = Context(names, lo, hi, ctx.weights, prec)
        q = Series(wctx, rn) * Series(wctx, rd).invert()
        return Series(ctx, {tuple(a + b for a, b in zip(e, net)): c for e, c in q.terms.items()})

    def to_json(self):
        return {"num": str(self.num), "den": str(self.den)}


def frac_eq(a, b):
    """Cross-multiplication equality of two fractions."""
    a = PolyFrac.coerce(a)
    b = PolyFrac.coerce(b)
    return a.num * b.den == b.num * a.den


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _to_ctx_terms(p, ctx):
    pos = [ctx.index(v) if v in ctx else None for v in VARS]
    out = {}
    for e, c in p.to_dict().items():
        v = [0] * ctx.nvars
        for i, x in enumerate(e):
            if pos[i] is not None:
                v[pos[i]] = x
        out[tuple(v)] = int(c)
    return out


def _eval_poly(p, vals):
    out = PolyFrac(0)
    for e, c in p.to_dict().items():
        term = PolyFrac(int(c))
        for val, x in zip(vals, e):
            if x:
                term = term * val ** x
        out = out + term
    return out
