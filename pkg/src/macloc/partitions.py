"""Integer partitions and cell statistics (English convention, rows from 1)."""

from collections import Counter, namedtuple
from fractions import Fraction
from functools import lru_cache
from math import factorial

Cell = namedtuple("Cell", "row col")


class Partition(tuple):
    """Weakly decreasing tuple of positive parts (trailing zeros dropped)."""

    def __new__(cls, parts=()):
        parts = [int(p) for p in parts]
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts not weakly decreasing: {parts}")
        while parts and parts[-1] == 0:
            parts.pop()
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text):
        """Read ``"2,1"`` (also ``"[2,1]"``, ``"()"`` or ``""`` for the empty partition)."""
        body = text.strip().strip("[]()").strip()
        if not body:
            return cls()
        return cls(int(x) for x in body.split(","))

    def __repr__(self):
        return f"Partition({list(self)})"

    def __str__(self):
        return "(" + ",".join(map(str, self)) + ")"

    @property
    def size(self):
        return sum(self)

    @property
    def length(self):
        return len(self)

    def part(self, i):
        """``mu_i`` with 1-based ``i``; 0 beyond the length."""
        return self[i - 1] if 1 <= i <= len(self) else 0

    def as_tuple(self, n):
        if len(self) > n:
            raise ValueError(f"{self} has more than {n} parts")
        return tuple(self) + (0,) * (n - len(self))

    def conjugate(self):
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p >= j) for j in range(1, self[0] + 1))

    def cells(self):
        return [Cell(i, j) for i, p in enumerate(self, 1) for j in range(1, p + 1)]

    def __contains__(self, s):
        if isinstance(s, tuple) and len(s) == 2 and not isinstance(s, Partition):
            i, j = s
            return 1 <= i <= len(self) and 1 <= j <= self[i - 1]
        return tuple.__contains__(self, s)

    def _check(self, s):
        if s not in self:
            raise ValueError(f"cell {tuple(s)} is not in the diagram of {self}")

    def arm(self, s):
        self._check(s)
        return self[s[0] - 1] - s[1]

    def leg(self, s):
        self._check(s)
        return sum(1 for r in self[s[0]:] if r >= s[1])

    def coarm(self, s):
        self._check(s)
        return s[1] - 1

    def coleg(self, s):
        self._check(s)
        return s[0] - 1

    def n(self):
        """``n(mu) = sum (i-1) mu_i``."""
        return sum(i * p for i, p in enumerate(self))

    def multiplicities(self):
        return Counter(self)


def arm(mu, s):
    return Partition(mu).arm(s)


def leg(mu, s):
    return Partition(mu).leg(s)


def coarm(mu, s):
    return Partition(mu).coarm(s)


def coleg(mu, s):
    return Partition(mu).coleg(s)


def dominance_leq(lam, mu):
    lam, mu = Partition(lam), Partition(mu)
    if lam.size != mu.size:
        raise ValueError(f"dominance compares equal sizes, got {lam} and {mu}")
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam.part(i + 1)
        b += mu.part(i + 1)
        if a > b:
            return False
    return True


def dominance_less(lam, mu):
    """Strict dominance ``lam < mu``."""
    return Partition(lam) != Partition(mu) and dominance_leq(lam, mu)


def add_rect(mu, m, n):
    """``mu + m^n``: add ``m`` to each of the ``n`` entries of ``mu``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return Partition(p + m for p in Partition(mu).as_tuple(n))


def zee(lam):
    """``z_lam = prod_i i^{m_i} m_i!`` as an exact rational."""
    out = 1
    for i, m in Partition(lam).multiplicities().items():
        out *= i ** m * factorial(m)
    return Fraction(out)


@lru_cache(maxsize=None)
def partitions_of(k, max_part=None):
    """All partitions of ``k`` in reverse lexicographic order (largest first)."""
    if max_part is None:
        max_part = k
    if k == 0:
        return (Partition(),)
    out = []
    for first in range(min(k, max_part), 0, -1):
        for rest in partitions_of(k - first, first):
            out.append(Partition((first,) + tuple(rest)))
    return tuple(out)


def partitions_upto(k):
    return [lam for d in range(k + 1) for lam in partitions_of(d)]
