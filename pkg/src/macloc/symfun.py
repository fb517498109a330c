"""Symmetric functions in the m, e, h, p bases and their images in n variables.

The power sums are the conversion hub.  ``p_rho`` is expanded in the
monomial basis combinatorially; the other transition matrices are exact
rational inverses, cached per degree.  The Macdonald basis ``P`` is handled
by :mod:`macloc.macdonald`, which registers itself here on import.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
import threading

from .kernels import Context, Series
from .kernels.polyfrac import PolyFrac
from .partitions import Partition, partitions_of, zee

BASES = ("m", "e", "h", "p", "P")
MAX_DEGREE = 12

_lock = threading.Lock()
_P_HOOKS = {}


class DegreeOverflow(ValueError):
    pass


def _check_degree(k):
    if k > MAX_DEGREE:
        raise DegreeOverflow(f"degree {k} exceeds the configured bound {MAX_DEGREE}")


# transition matrices --------------------------------------------------------

def _count_maps(rho, lam):
    """Number of maps parts(rho) -> rows(lam) whose fibres sum to the rows."""
    @lru_cache(maxsize=None)
    def go(i, remaining):
        if i == len(rho):
            return 1 if not any(remaining) else 0
        total = 0
        part = rho[i]
        seen = list(remaining)
        for r, cap in enumerate(remaining):
            if cap >= part:
                seen[r] = cap - part
                total += go(i + 1, tuple(seen))
                seen[r] = cap
        return total

    return go(0, tuple(lam))


@lru_cache(maxsize=None)
def p_to_m(k):
    """``p_rho = sum_lam L[rho][lam] m_lam`` for ``|rho| = k``."""
    _check_degree(k)
    parts = partitions_of(k)
    return {rho: {lam: c for lam in parts if (c := _count_maps(rho, lam))} for rho in parts}


def _invert(mat, parts):
    """Inverse of a square matrix given as nested dicts over ``parts``."""
    n = len(parts)
    idx = {p: i for i, p in enumerate(parts)}
    a = [[Fraction(0)] * n + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for r, row in mat.items():
        for c, v in row.items():
            a[idx[r]][idx[c]] = Fraction(v)
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return {
        parts[i]: {parts[j]: a[i][n + j] for j in range(n) if a[i][n + j] != 0}
        for i in range(n)
    }


@lru_cache(maxsize=None)
def m_to_p(k):
    with _lock:
        return _invert(p_to_m(k), partitions_of(k))


def _eh_single(k, signed):
    out = {}
    for rho in partitions_of(k):
        c = 1 / zee(rho)
        if signed and (k - len(rho)) % 2:
            c = -c
        out[rho] = c
    return out


def _concat_mul(a, b):
    """Product of two p-expansions (partition concatenation)."""
    out = {}
    for r1, c1 in a.items():
        for r2, c2 in b.items():
            key = Partition(sorted(r1 + r2, reverse=True))
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


@lru_cache(maxsize=None)
def _mult_to_p(basis, k):
    _check_degree(k)
    out = {}
    for lam in partitions_of(k):
        acc = {Partition(): Fraction(1)}
        for part in lam:
            acc = _concat_mul(acc, _eh_single(part, basis == "e"))
        out[lam] = acc
    return out


@lru_cache(maxsize=None)
def _p_to_mult(basis, k):
    with _lock:
        return _invert(_mult_to_p(basis, k), partitions_of(k))


def to_p_matrix(basis, k):
    """Rows: basis elements of degree k; values: their p-expansions."""
    if basis == "p":
        return {rho: {rho: Fraction(1)} for rho in partitions_of(k)}
    if basis == "m":
        return m_to_p(k)
    if basis in ("e", "h"):
        return _mult_to_p(basis, k)
    raise ValueError(f"unsupported basis {basis!r}")


def from_p_matrix(basis, k):
    """Rows: p_rho; values: their expansions in ``basis``."""
    if basis == "p":
        return to_p_matrix("p", k)
    if basis == "m":
        return p_to_m(k)
    if basis in ("e", "h"):
        return _p_to_mult(basis, k)
    raise ValueError(f"unsupported basis {basis!r}")


# symmetric functions ----------------------------------------------------------

def _is_zero(c):
    return c == 0


class SymFn:
    """A symmetric function: basis tag plus ``{Partition: coefficient}``.

    Coefficients may be ints, Fractions, :class:`PolyFrac` or :class:`Series`
    (all sharing one context).
    """

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis, coeffs=None):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.basis = basis
        self.coeffs = {}
        for lam, c in (coeffs or {}).items():
            if not _is_zero(c):
                lam = Partition(lam)
                _check_degree(lam.size)
                self.coeffs[lam] = c

    @classmethod
    def basis_element(cls, basis, lam, c=1):
        if isinstance(lam, int):
            lam = (lam,) if lam else ()
        return cls(basis, {Partition(lam): c})

    @classmethod
    def m(cls, *lam):
        return cls.basis_element("m", _flat(lam))

    @classmethod
    def e(cls, *lam):
        return cls.basis_element("e", _flat(lam))

    @classmethod
    def h(cls, *lam):
        return cls.basis_element("h", _flat(lam))

    @classmethod
    def p(cls, *lam):
        return cls.basis_element("p", _flat(lam))

    @classmethod
    def one(cls, basis="m", c=1):
        return cls(basis, {Partition(): c})

    def __repr__(self):
        return f"SymFn({self!s})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        items = sorted(self.coeffs.items(), key=lambda r: (-r[0].size, tuple(-x for x in r[0])))
        return " + ".join(f"({c})*{self.basis}{list(lam)}" for lam, c in items)

    @property
    def degree(self):
        return max((lam.size for lam in self.coeffs), default=0)

    def is_zero(self):
        return not self.coeffs

    def is_homogeneous(self):
        return len({lam.size for lam in self.coeffs}) <= 1

    def components(self):
        out = {}
        for lam, c in self.coeffs.items():
            out.setdefault(lam.size, {})[lam] = c
        return {d: SymFn(self.basis, v) for d, v in sorted(out.items())}

    def map_coeffs(self, fn):
        return SymFn(self.basis, {lam: fn(c) for lam, c in self.coeffs.items()})

    def scale(self, c):
        return self.map_coeffs(lambda x: x * c)

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        if not isinstance(other, SymFn):
            other = SymFn.one(self.basis, other)
        if other.basis != self.basis:
            other = other.to(self.basis)
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            out[lam] = out[lam] + c if lam in out else c
        return SymFn(self.basis, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, SymFn) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SymFn):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        out = SymFn.one(self.basis)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, SymFn):
            other = SymFn.one("p", other)
        a = self.to("p") if self.basis != "p" else self
        b = other.to("p") if other.basis != "p" else other
        return set(a.coeffs) == set(b.coeffs) and all(_is_zero(a.coeffs[k] - b.coeffs[k]) for k in a.coeffs)

    __hash__ = None

    def to(self, basis):
        return convert(self, basis)


def _flat(lam):
    if len(lam) == 1 and isinstance(lam[0], (tuple, list)):
        return tuple(lam[0])
    return tuple(lam)


def _combine(rows, coeffs):
    """``sum_lam c_lam * rows[lam]`` with rational rows."""
    out = {}
    for lam, c in coeffs.items():
        for key, r in rows[lam].items():
            term = c * r
            out[key] = out[key] + term if key in out else term
    return out


def convert(f, basis):
    """Express ``f`` in ``basis`` (via the power sums)."""
    if basis == f.basis:
        return f
    if basis == "P" or f.basis == "P":
        if "P" not in _P_HOOKS:
            import importlib

            importlib.import_module(".macdonald", __package__)  # registers the hooks
        if f.basis == "P":
            g = _P_HOOKS["from_P"](f)
            return g if basis == "m" else convert(g, basis)
        return _P_HOOKS["to_P"](convert(f, "m"))
    pcoeffs = {}
    for d, comp in f.components().items():
        pcoeffs.update(_combine(to_p_matrix(f.basis, d), comp.coeffs))
    g = SymFn("p", pcoeffs)
    if basis == "p":
        return g
    out = {}
    for d, comp in g.components().items():
        out.update(_combine(from_p_matrix(basis, d), comp.coeffs))
    return SymFn(basis, out)


def register_P(to_P, from_P):
    _P_HOOKS["to_P"] = to_P
    _P_HOOKS["from_P"] = from_P


def mul(f, g):
    """Product in Lambda.  Multiplicative bases concatenate; ``m`` goes via ``p``."""
    basis = f.basis
    if basis in ("m", "P"):
        a, b, work = f.to("p"), g.to("p"), "p"
    else:
        a, b, work = f, g.to(basis), basis
    out = {}
    for l1, c1 in a.coeffs.items():
        for l2, c2 in b.coeffs.items():
            key = Partition(sorted(l1 + l2, reverse=True))
            _check_degree(key.size)
            term = c1 * c2
            out[key] = out[key] + term if key in out else term
    res = SymFn(work, out)
    return res if work == basis else res.to(basis)


# n-variable images -------------------------------------------------------------

def x_names(n):
    return tuple(f"x{i}" for i in range(1, n + 1))


class XPoly:
    """Laurent polynomial in ``x_1..x_n`` with coefficients in a small-variable context.

    Stored flat: a :class:`Series` over ``x_1..x_n`` (unbounded, weight 0)
    followed by the small variables of ``ctx``.
    """

    __slots__ = ("n", "series")

    def __init__(self, n, series):
        self.n = n
        self.series = series

    @classmethod
    def from_terms(cls, n, ctx, terms):
        """``terms``: ``{x-exponent tuple: coefficient}``; Series coefficients must live in ``ctx``."""
        full = ctx.with_leading(x_names(n))
        flat = {}
        zero_small = (0,) * ctx.nvars
        for xe, c in terms.items():
            xe = tuple(xe)
            if len(xe) != n:
                raise ValueError(f"x-exponent {xe} does not have length {n}")
            if isinstance(c, Series):
                if c.ctx != ctx:
                    c = c.embed(ctx)
                for se, v in c.terms.items():
                    k = xe + se
                    flat[k] = flat[k] + v if k in flat else v
            else:
                k = xe + zero_small
                flat[k] = flat[k] + c if k in flat else c
        return cls(n, Series(full, flat))

    @classmethod
    def one(cls, n, ctx=None):
        ctx = ctx or Context.exact(())
        return cls.from_terms(n, ctx, {(0,) * n: 1})

    @classmethod
    def monomial(cls, n, xexp, ctx=None, c=1):
        ctx = ctx or Context.exact(())
        return cls.from_terms(n, ctx, {tuple(xexp): c})

    @property
    def ctx(self):
        return self.series.ctx.drop_leading(self.n)

    @property
    def terms(self):
        return self.series.terms

    def __repr__(self):
        return f"XPoly(n={self.n}, {self.series})"

    def __str__(self):
        return str(self.series)

    def _wrap(self, s):
        return XPoly(self.n, s)

    def __eq__(self, other):
        return isinstance(other, XPoly) and self.n == other.n and self.series == other.series

    __hash__ = None

    def is_zero(self):
        return self.series.is_zero()

    def __add__(self, other):
        return self._wrap(self.series + self._lift(other).series)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.series)

    def __sub__(self, other):
        return self._wrap(self.series - self._lift(other).series)

    def __mul__(self, other):
        return self._wrap(self.series * self._lift(other).series)

    __rmul__ = __mul__

    def __pow__(self, k):
        return self._wrap(self.series ** k)

    def _lift(self, other):
        if isinstance(other, XPoly):
            if other.n != self.n:
                raise ValueError("different numbers of x-variables")
            return other
        return XPoly.from_terms(self.n, self.ctx, {(0,) * self.n: other})

    def dual(self):
        """``x -> x^{-1}``: negate every x-exponent."""
        return self._wrap(self.series.dual(x_names(self.n)))

    def shift(self, xexp):
        """Multiply by ``x^xexp`` (an int means ``(x_1...x_n)^xexp``)."""
        if isinstance(xexp, int):
            xexp = (xexp,) * self.n
        full = tuple(xexp) + (0,) * self.ctx.nvars
        return self._wrap(self.series.shift(full))

    def by_x(self):
        """``{x-exponent: Series}`` view (the map from exponents to coefficients)."""
        ctx = self.ctx
        groups = {}
        n = self.n
        for e, c in self.series.terms.items():
            groups.setdefault(e[:n], {})[e[n:]] = c
        return {xe: Series(ctx, t, clip=False) for xe, t in groups.items()}

    def coefficient(self, xexp):
        ctx = self.ctx
        n = self.n
        xexp = tuple(xexp)
        return Series(ctx, {e[n:]: c for e, c in self.series.terms.items() if e[:n] == xexp}, clip=False)

    def max_degree(self, i):
        """Largest exponent of ``x_{i+1}`` (0-based ``i``); ``None`` when zero."""
        if not self.series.terms:
            return None
        return max(e[i] for e in self.series.terms)

    def const_term(self, normalize=True):
        """Coefficient of ``x^0``, divided by ``n!`` unless ``normalize`` is false."""
        s = self.coefficient((0,) * self.n)
        return s.scale(Fraction(1, factorial(self.n))) if normalize else s

    def pair_const(self, other, normalize=True):
        """Constant term of ``self * other`` without forming the product."""
        a = self.by_x()
        b = other.by_x()
        ctx = self.ctx
        acc = Series(ctx)
        for xe, s in a.items():
            t = b.get(tuple(-x for x in xe))
            if t is not None:
                acc = acc + s * t
        return acc.scale(Fraction(1, factorial(self.n))) if normalize else acc


def _coerce_coeff(c, ctx):
    if ctx is None:
        return c
    if isinstance(c, Series):
        return c.embed(ctx)
    if isinstance(c, PolyFrac):
        return c.to_series(ctx)
    return Series.const(ctx, c)


def monomial_exponents(lam, n):
    """Distinct exponent vectors of ``m_lam`` in ``n`` variables (empty if too long)."""
    lam = Partition(lam)
    if len(lam) > n:
        return []
    return sorted(set(permutations(lam.as_tuple(n))), reverse=True)


def expand_nvars(f, n, ctx=None):
    """Image of ``f`` in ``Lambda_n`` as an :class:`XPoly` (``m_lam -> 0`` beyond ``n`` parts)."""
    g = f.to("m")
    if ctx is None:
        ctx = _common_ctx(g)
    terms = {}
    for lam, c in g.coeffs.items():
        exps = monomial_exponents(lam, n)
        if not exps:
            continue
        cc = _coerce_coeff(c, ctx) if not isinstance(c, (int, Fraction, PolyFrac)) or ctx.nvars else c
        for xe in exps:
            terms[xe] = terms[xe] + cc if xe in terms else cc
    return XPoly.from_terms(n, ctx, terms)


def _common_ctx(f):
    for c in f.coeffs.values():
        if isinstance(c, Series):
            return c.ctx
    return Context.exact(())


def h_nvars(d, n, ctx=None):
    """``h_d(x_1..x_n)`` built directly: every exponent vector of total degree ``d``."""
    ctx = ctx or Context.exact(())

    def vecs(total, k):
        if k == 1:
            yield (total,)
            return
        for a in range(total, -1, -1):
            for rest in vecs(total - a, k - 1):
                yield (a,) + rest

    if n == 0:
        return XPoly.from_terms(0, ctx, {(): 1} if d == 0 else {})
    return XPoly.from_terms(n, ctx, {v: 1 for v in vecs(d, n)})


def e_nvars(n, ctx=None):
    return XPoly.monomial(n, (1,) * n, ctx)


def dual_substitute(p):
    return p.dual()
