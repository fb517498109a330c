"""Closed-form one-variable characters ``sign * z^shift * prod_c (1 - z^c)^k_c``."""

from .series import Series


class FactoredChar:
    """Exact rational function of one variable in product form.

    ``sign == 0`` encodes the zero function (``lambda(A)`` with ``dim_0(A) > 0``).
    """

    __slots__ = ("sign", "shift", "factors", "var")

    def __init__(self, sign=1, shift=0, factors=None, var="z"):
        if sign not in (-1, 0, 1):
            raise ValueError("sign must be -1, 0 or +1")
        fac = {}
        if sign != 0:
            for c, k in (factors or {}).items():
                if c < 1:
                    raise ValueError(f"factor base must be >= 1, got {c}")
                if k:
                    fac[c] = fac.get(c, 0) + k
        self.sign = sign
        self.shift = shift if sign else 0
        self.factors = tuple(sorted((c, k) for c, k in fac.items() if k))
        self.var = var

    @classmethod
    def one(cls, var="z"):
        return cls(1, 0, None, var)

    @classmethod
    def zero(cls, var="z"):
        return cls(0, 0, None, var)

    @classmethod
    def from_lambda(cls, char, var="z"):
        """``lambda(sum_a n_a z^a) = prod_a (1 - z^a)^{n_a}`` from ``{a: n_a}``.

        Negative weights are normalised with ``1 - z^-c = -z^-c (1 - z^c)``.
        A positive multiplicity at weight 0 gives zero; a negative one is a
        pole and raises ``ZeroDivisionError``.
        """
        n0 = char.get(0, 0)
        if n0 < 0:
            raise ZeroDivisionError(f"pole at w=1: dim_0 = {n0}")
        if n0 > 0:
            return cls.zero(var)
        sign, shift, fac = 1, 0, {}
        for a, n in char.items():
            if a == 0 or n == 0:
                continue
            if a > 0:
                fac[a] = fac.get(a, 0) + n
            else:
                c = -a
                if n % 2:
                    sign = -sign
                shift += -c * n
                fac[c] = fac.get(c, 0) + n
        return cls(sign, shift, fac, var)

    def is_zero(self):
        return self.sign == 0

    def __eq__(self, other):
        if not isinstance(other, FactoredChar):
            return NotImplemented
        return (self.sign, self.shift, self.factors, self.var) == (
            other.sign, other.shift, other.factors, other.var)

    def __hash__(self):
        return hash((self.sign, self.shift, self.factors, self.var))

    def __repr__(self):
        return f"FactoredChar({self!s})"

    def __str__(self):
        if self.sign == 0:
            return "0"
        parts = []
        if self.shift:
            parts.append(f"{self.var}^{self.shift}")
        for c, k in self.factors:
            base = f"(1-{self.var})" if c == 1 else f"(1-{self.var}^{c})"
            parts.append(base if k == 1 else f"{base}^{k}")
        body = "*".join(parts) or "1"
        return ("-" if self.sign < 0 else "") + body

    def __mul__(self, other):
        if not isinstance(other, FactoredChar):
            return NotImplemented
        if other.var != self.var:
            raise ValueError("variable mismatch")
        if self.sign == 0 or other.sign == 0:
            return FactoredChar.zero(self.var)
        fac = dict(self.factors)
        for c, k in other.factors:
            fac[c] = fac.get(c, 0) + k
        return FactoredChar(self.sign * other.sign, self.shift + other.shift, fac, self.var)

    def inverse(self):
        if self.sign == 0:
            raise ZeroDivisionError("inverse of zero")
        return FactoredChar(self.sign, -self.shift, {c: -k for c, k in self.factors}, self.var)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        if self.sign == 0:
            return FactoredChar.one(self.var) if k == 0 else self
        return FactoredChar(
            self.sign ** k, self.shift * k, {c: e * k for c, e in self.factors}, self.var)

    def to_series(self, ctx):
        """Expand about ``var = 0`` into ``ctx`` (other variables get exponent 0)."""
        if self.var not in ctx:
            raise ValueError(f"context lacks variable {self.var}")
        if self.sign == 0:
            return Series(ctx)
        v = ctx.index(self.var)
        lo, hi = ctx.lo[v], ctx.hi[v]
        if lo is not None and self.shift < lo:
            raise ValueError(f"window floor {lo} cannot hold the shift z^{self.shift}")
        if hi is None:
            if any(k < 0 for _, k in self.factors):
                raise ValueError(f"variable {self.var} is uncapped; expansion is infinite")
            top = self.shift + sum(c * k for c, k in self.factors)
        else:
            top = hi
        n = top - self.shift
        if ctx.prec is not None and ctx.weights[v] > 0:
            n = min(n, (ctx.prec // ctx.weights[v]) - self.shift)
        if n < 0:
            return Series(ctx)
        coeffs = expand_dense(self.factors, n)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * ctx.nvars
                e[v] = i + self.shift
                terms[tuple(e)] = self.sign * c
        return Series(ctx, terms)


def expand_dense(factors, n):
    """Coefficients 0..n of ``prod (1 - z^c)^k`` as a list of ints."""
    a = [0] * (n + 1)
    a[0] = 1
    for c, k in factors:
        if c > n:
            continue
        if k > 0:
            for _ in range(k):
                for i in range(n, c - 1, -1):
                    a[i] -= a[i - c]
        else:
            for _ in range(-k):
                for i in range(c, n + 1):
                    a[i] += a[i - c]
    return a
