"""Truncated multivariate Laurent series with exact rational coefficients.

A :class:`Context` fixes the variable names, a per-variable exponent window
``[lo_v, hi_v]`` (``None`` = unbounded) and optionally a cap ``prec`` on the
weighted degree ``sum(w_v * e_v)``.  Every operation clips its result to the
window, so results are exact only on retained exponents, and only when the
inputs were exact there too.  For products this holds whenever both factors
have support of nonnegative weight (weighted cap) or nonnegative exponents
in every capped variable (per-variable caps).
"""

from fractions import Fraction
from math import comb

from ._backend import mul_terms

DEFAULT_CAP = 16
DEFAULT_Z_FLOOR = -64


class ContextMismatch(ValueError):
    pass


class Context:
    """Truncation context (the ordered set of small variables and their windows)."""

    __slots__ = ("names", "lo", "hi", "weights", "prec", "_index", "_key")

    def __init__(self, names, lo=None, hi=None, weights=None, prec=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        nv = len(names)
        self.names = names
        self.lo = tuple(lo) if lo is not None else (None,) * nv
        self.hi = tuple(hi) if hi is not None else (None,) * nv
        self.weights = tuple(weights) if weights is not None else (1,) * nv
        if not (len(self.lo) == len(self.hi) == len(self.weights) == nv):
            raise ValueError("window arrays must match the variable list")
        for a, b in zip(self.lo, self.hi):
            if a is not None and b is not None and a > b:
                raise ValueError(f"empty window [{a}, {b}]")
        self.prec = prec
        self._index = {nm: i for i, nm in enumerate(names)}
        self._key = (self.names, self.lo, self.hi, self.weights, self.prec)

    @classmethod
    def default(cls, names, cap=DEFAULT_CAP, z_floor=DEFAULT_Z_FLOOR, prec=None, weights=None):
        names = tuple(names)
        lo = tuple(z_floor if nm == "z" else 0 for nm in names)
        return cls(names, lo, (cap,) * len(names), weights, prec)

    @classmethod
    def exact(cls, names):
        """Context without truncation (exact Laurent polynomials)."""
        return cls(names)

    def __eq__(self, other):
        return isinstance(other, Context) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        parts = []
        for nm, a, b, w in zip(self.names, self.lo, self.hi, self.weights):
            win = f"[{'-inf' if a is None else a},{'inf' if b is None else b}]"
            parts.append(f"{nm}{win}" + (f"w{w}" if w != 1 else ""))
        s = ", ".join(parts)
        if self.prec is not None:
            s += f"; prec={self.prec}"
        return f"Context({s})"

    def index(self, name):
        return self._index[name]

    def __contains__(self, name):
        return name in self._index

    @property
    def nvars(self):
        return len(self.names)

    @property
    def is_exact(self):
        return self.prec is None and all(b is None for b in self.hi) and all(
            a is None for a in self.lo
        )

    def weight(self, e):
        return sum(w * x for w, x in zip(self.weights, e))

    def admits(self, e):
        for x, a, b in zip(e, self.lo, self.hi):
            if (a is not None and x < a) or (b is not None and x > b):
                return False
        return self.prec is None or self.weight(e) <= self.prec

    def clip(self, terms):
        return {e: c for e, c in terms.items() if c != 0 and self.admits(e)}

    def replace(self, **changes):
        args = dict(names=self.names, lo=self.lo, hi=self.hi, weights=self.weights, prec=self.prec)
        args.update(changes)
        return Context(**args)

    def widened(self, margin):
        """Raise every finite cap (and ``prec``) by ``margin``."""
        hi = tuple(None if b is None else b + margin for b in self.hi)
        prec = None if self.prec is None else self.prec + margin * max(self.weights)
        return self.replace(hi=hi, prec=prec)

    def with_leading(self, names, weight=0):
        """Prepend unbounded variables (used for the x-variables of ``XPoly``)."""
        k = len(names)
        return Context(
            tuple(names) + self.names,
            (None,) * k + self.lo,
            (None,) * k + self.hi,
            (weight,) * k + self.weights,
            self.prec,
        )

    def drop_leading(self, k):
        return Context(self.names[k:], self.lo[k:], self.hi[k:], self.weights[k:], self.prec)

    def to_json(self):
        return {
            "vars": list(self.names),
            "lo": list(self.lo),
            "hi": list(self.hi),
            "weights": list(self.weights),
            "prec": self.prec,
        }


def _is_series(x):
    return isinstance(x, Series)


def fmt_coeff(c):
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


class Series:
    """Element of the truncated series ring over a :class:`Context`."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None, clip=True):
        self.ctx = ctx
        terms = dict(terms) if terms else {}
        self.terms = ctx.clip(terms) if clip else {e: c for e, c in terms.items() if c != 0}

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, ctx):
        return cls(ctx)

    @classmethod
    def const(cls, ctx, c=1):
        return cls(ctx, {(0,) * ctx.nvars: c})

    one = const

    @classmethod
    def monomial(cls, ctx, exps, c=1):
        """``exps`` is a dict ``name -> exponent`` or a full exponent tuple."""
        if isinstance(exps, dict):
            e = [0] * ctx.nvars
            for nm, x in exps.items():
                e[ctx.index(nm)] = x
            exps = tuple(e)
        return cls(ctx, {tuple(exps): c})

    @classmethod
    def var(cls, ctx, name, power=1):
        return cls.monomial(ctx, {name: power})

    # basic protocol -----------------------------------------------------
    def __repr__(self):
        return f"Series({self!s})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                nm if x == 1 else f"{nm}^{x}" for nm, x in zip(self.ctx.names, e) if x != 0
            )
            cs = fmt_coeff(c)
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            elif cs == "-1":
                body = "-" + mono
            else:
                body = f"{cs}*{mono}"
            out.append(body)
        s = " + ".join(out)
        return s.replace("+ -", "- ")

    def sorted_terms(self):
        w = self.ctx.weight
        return sorted(self.terms.items(), key=lambda r: (w(r[0]), r[0]))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if _is_series(other):
            return self.ctx == other.ctx and self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == Series.const(self.ctx, other).terms

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def _check(self, other):
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not _is_series(other):
            other = Series.const(self.ctx, other)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return Series(self.ctx, t, clip=False)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.ctx, {e: -c for e, c in self.terms.items()}, clip=False)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if c == 0:
            return Series(self.ctx)
        return Series(self.ctx, {e: c * v for e, v in self.terms.items()}, clip=False)

    def __mul__(self, other):
        if not _is_series(other):
            return self.scale(other)
        self._check(other)
        ctx = self.ctx
        return Series(ctx, mul_terms(self.terms, other.terms, ctx.lo, ctx.hi, ctx.weights, ctx.prec), clip=False)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if _is_series(other):
            return self * other.invert()
        return self.scale(Fraction(1) / other if isinstance(other, int) else 1 / other)

    def __pow__(self, k):
        if k < 0:
            return self.invert() ** (-k)
        result = Series.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, e):
        """Multiply by the monomial with exponent vector (or name dict) ``e``."""
        if isinstance(e, dict):
            v = [0] * self.ctx.nvars
            for nm, x in e.items():
                v[self.ctx.index(nm)] = x
            e = v
        e = tuple(e)
        return Series(self.ctx, {tuple(a + b for a, b in zip(k, e)): c for k, c in self.terms.items()})

    def min_monomial(self):
        """The unique monomial of least weighted degree (``ValueError`` if tied)."""
        if not self.terms:
            raise ZeroDivisionError("zero series has no leading monomial")
        w = self.ctx.weight
        best = min(w(e) for e in self.terms)
        lead = [e for e in self.terms if w(e) == best]
        if len(lead) != 1:
            raise ValueError(f"no unique lowest-weight monomial among {sorted(lead)}")
        return lead[0]

    def invert(self):
        """Multiplicative inverse within the window (Newton iteration)."""
        if not self.terms:
            raise ZeroDivisionError("series is zero")
        ctx = self.ctx
        e0 = self.min_monomial()
        c0 = self.terms[e0]
        inv_c0 = Fraction(1, c0) if isinstance(c0, int) else 1 / c0
        for nm, x, a in zip(ctx.names, e0, ctx.lo):
            if a is not None and -x < a:
                raise ValueError(f"inverse needs {nm}^{-x}, below the window floor {a}")
        if len(self.terms) == 1:
            return Series(ctx, {tuple(-x for x in e0): inv_c0})
        residual = Series(
            ctx, {tuple(a - b for a, b in zip(e, e0)): c for e, c in self.terms.items()}, clip=False
        )
        if ctx.prec is None and all(b is None for b in ctx.hi):
            raise ValueError("cannot invert a non-monomial in an untruncated context")
        for v, b in enumerate(ctx.hi):
            if b is None and ctx.prec is None and any(e[v] != 0 for e in residual.terms):
                raise ValueError(f"variable {ctx.names[v]} is uncapped; inverse is infinite")
        one = Series.const(ctx, 1)
        s = Series.const(ctx, inv_c0)
        for _ in range(80):
            err = residual * s
            if err == one:
                break
            s = s * (2 - err)
        else:  # pragma: no cover - guarded by the window checks above
            raise ArithmeticError("Newton inversion did not stabilize")
        return s.shift(tuple(-x for x in e0))

    def adams(self, j):
        """The Adams operation ``p_j``: every exponent multiplied by ``j``."""
        return Series(self.ctx, {tuple(j * x for x in e): c for e, c in self.terms.items()})

    def dual(self, names=None):
        """Negate exponents of ``names`` (default: all variables)."""
        idx = range(self.ctx.nvars) if names is None else [self.ctx.index(n) for n in names]
        idx = set(idx)
        return Series(
            self.ctx,
            {tuple(-x if v in idx else x for v, x in enumerate(e)): c for e, c in self.terms.items()},
        )

    # inspection -------------------------------------------------------
    def coeff(self, e=None, **named):
        if e is None:
            v = [0] * self.ctx.nvars
            for nm, x in named.items():
                v[self.ctx.index(nm)] = x
            e = v
        return self.terms.get(tuple(e), 0)

    def constant_term(self):
        return self.terms.get((0,) * self.ctx.nvars, 0)

    def valuation(self, name=None):
        """Least exponent of ``name`` (least weighted degree if omitted); ``None`` for 0."""
        if not self.terms:
            return None
        if name is None:
            return min(self.ctx.weight(e) for e in self.terms)
        v = self.ctx.index(name)
        return min(e[v] for e in self.terms)

    def embed(self, ctx):
        """Re-express in ``ctx``; absent variables must occur with exponent 0."""
        if ctx == self.ctx:
            return self
        pos = []
        for nm in self.ctx.names:
            pos.append(ctx.index(nm) if nm in ctx else None)
        out = {}
        for e, c in self.terms.items():
            v = [0] * ctx.nvars
            for i, x in enumerate(e):
                if pos[i] is None:
                    if x != 0:
                        raise ContextMismatch(f"variable {self.ctx.names[i]} not in target context")
                else:
                    v[pos[i]] = x
            out[tuple(v)] = c
        return Series(ctx, out)

    def map_coeffs(self, fn):
        return Series(self.ctx, {e: fn(c) for e, c in self.terms.items()})

    def to_json(self):
        return [[list(e), fmt_coeff(c)] for e, c in self.sorted_terms()]


def geometric(ctx, name, start=0, stop=None, step=1):
    """``sum_{k>=0} name^(start + k*step)`` truncated to the window (or to ``stop``)."""
    v = ctx.index(name)
    hi = ctx.hi[v] if stop is None else stop
    if hi is None:
        raise ValueError(f"variable {name} is uncapped")
    terms = {}
    k = start
    while k <= hi:
        e = [0] * ctx.nvars
        e[v] = k
        terms[tuple(e)] = 1
        k += step
    return Series(ctx, terms)


def binomial_power(ctx, e, a):
    """``(1 - x^e)^a`` for a monomial exponent ``e`` and integer ``a``.

    Negative ``a`` gives the expansion in nonnegative powers of ``x^e``,
    which must lie in a truncating direction of ``ctx``.
    """
    e = tuple(e)
    if a >= 0:
        return Series(ctx, {tuple(k * x for x in e): (-1) ** k * comb(a, k) for k in range(a + 1)})
    kmax = _power_bound(ctx, e)
    terms = {}
    for k in range(kmax + 1):
        # (1 - X)^a with a = -b: sum_k C(b+k-1, k) X^k
        terms[tuple(k * x for x in e)] = comb(-a + k - 1, k)
    return Series(ctx, terms)


def _power_bound(ctx, e):
    """Largest k such that X^k can still lie in the window (X = x^e)."""
    bounds = []
    if ctx.prec is not None:
        w = ctx.weight(e)
        if w > 0:
            bounds.append(ctx.prec // w)
    for x, lo, hi in zip(e, ctx.lo, ctx.hi):
        if x > 0 and hi is not None:
            bounds.append(hi // x if hi >= 0 else -1)
        elif x < 0 and lo is not None:
            bounds.append(lo // x if lo <= 0 else -1)
    if not bounds:
        raise ValueError(f"monomial {e} has no truncating direction in {ctx!r}")
    return max(min(bounds), 0)
