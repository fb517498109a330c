"""Literal parsers for the CLI: characters, symmetric functions, kernels, bundle data."""

import re

from ..kernels import Context, Series
from ..partitions import Partition
from ..symfun import SymFn

POLY_VARS = ("z", "q", "t", "u")

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


class ParseError(ValueError):
    def __init__(self, msg, text, pos):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.pos = pos


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        if m.group(1):
            out.append(("int", int(m.group(1)), start))
        elif m.group(2):
            out.append(("name", m.group(2), start))
        else:
            out.append(("op", m.group(3), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    """Shared recursive-descent skeleton; subclasses supply atoms and the ring."""

    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.fail(f"expected {op!r}", tok)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            self.unexpected(self.peek())
        return v

    def unexpected(self, tok):
        self.fail("unexpected end of input" if tok[0] == "end" else f"unexpected {tok[1]!r}", tok)

    def expr(self):
        v = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            w = self.term()
            v = self.add(v, w) if op == "+" else self.add(v, self.neg(w))
        return v

    def term(self):
        v = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            if tok[1] == "/":
                self.fail("division is not supported", tok)
            v = self.mul(v, self.unary())
        return v

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            v = self.unary()
            return v if tok[1] == "+" else self.neg(v)
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] in "+-":
                sign = -1 if self.take()[1] == "-" else 1
            tok = self.take()
            if tok[0] != "int":
                self.fail("expected an integer exponent", tok)
            v = self.pow(v, sign * tok[1], tok)
        return v


# characters ----------------------------------------------------------------------

class _PolyParser(_Parser):
    def atom(self):
        tok = self.take()
        if tok[0] == "int":
            return {(0,) * 4: tok[1]}
        if tok[0] == "name":
            if tok[1] not in POLY_VARS:
                self.fail(f"unknown variable {tok[1]!r}", tok)
            e = [0] * 4
            e[POLY_VARS.index(tok[1])] = 1
            return {tuple(e): 1}
        if tok[0] == "op" and tok[1] == "(":
            v = self.expr()
            self.expect(")")
            return v
        self.unexpected(tok)

    def add(self, a, b):
        out = dict(a)
        for e, c in b.items():
            out[e] = out.get(e, 0) + c
        return {e: c for e, c in out.items() if c}

    def neg(self, a):
        return {e: -c for e, c in a.items()}

    def mul(self, a, b):
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return {e: c for e, c in out.items() if c}

    def pow(self, a, k, tok):
        if k < 0:
            if len(a) != 1:
                self.fail("negative powers are only allowed on monomials", tok)
            (e, c), = a.items()
            if abs(c) != 1:
                self.fail("negative powers are only allowed on monomials", tok)
            return {tuple(k * x for x in e): 1 if k % 2 == 0 else c}
        out = {(0,) * 4: 1}
        for _ in range(k):
            out = self.mul(out, a)
        return out


def parse_poly(text, names=None):
    """Integer Laurent polynomial in z, q, t, u as an exact :class:`Series`.

    ``names`` fixes the variable order; by default the variables that occur,
    in the order z, q, t, u.
    """
    terms = _PolyParser(text).parse()
    used = [v for i, v in enumerate(POLY_VARS) if any(e[i] for e in terms)]
    names = tuple(names) if names is not None else tuple(used)
    for v in used:
        if v not in names:
            raise ValueError(f"variable {v} not among {names}")
    idx = [POLY_VARS.index(v) for v in names]
    ctx = Context.exact(names)
    return Series(ctx, {tuple(e[i] for i in idx): c for e, c in terms.items()})


def format_poly(s):
    return str(s)


def poly_dict(text):
    """One-variable z-character ``{exponent: int}`` from text."""
    s = parse_poly(text, names=("z",))
    return {e[0]: int(c) for e, c in s.terms.items()}


# symmetric functions -------------------------------------------------------------------

class _SymParser(_Parser):
    def atom(self):
        tok = self.take()
        if tok[0] == "int":
            return tok[1]
        if tok[0] == "name":
            if tok[1] not in ("m", "e", "h", "p", "P"):
                self.fail(f"unknown basis {tok[1]!r}", tok)
            self.expect("[")
            parts = []
            while not (self.peek()[0] == "op" and self.peek()[1] == "]"):
                t = self.take()
                if t[0] != "int":
                    self.fail("expected a part", t)
                parts.append(t[1])
                if self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.take()
            self.expect("]")
            try:
                lam = Partition(sorted(parts, reverse=True)) if tok[1] in "ehp" else Partition(parts)
            except ValueError as exc:
                self.fail(str(exc), tok)
            return SymFn(tok[1], {lam: 1})
        if tok[0] == "op" and tok[1] == "(":
            v = self.expr()
            self.expect(")")
            return v
        self.unexpected(tok)

    def add(self, a, b):
        if isinstance(a, int) and isinstance(b, int):
            return a + b
        if isinstance(a, int):
            a, b = b, a
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        if isinstance(a, int) and isinstance(b, int):
            return a * b
        if isinstance(a, int):
            return b.scale(a)
        if isinstance(b, int):
            return a.scale(b)
        return a * b

    def pow(self, a, k, tok):
        if k < 0:
            self.fail("negative powers are not allowed", tok)
        return a ** k


def parse_symfn(text):
    v = _SymParser(text).parse()
    if isinstance(v, int):
        return SymFn.one("m", v)
    return v


# kernels and bundle data -------------------------------------------------------------------

def parse_kernel(text):
    """``"hall"``, ``"macdonald"`` or ``"poly: <expr>"`` -> (kind, Series or None)."""
    s = text.strip()
    if s == "hall":
        return "hall", None
    if s == "macdonald":
        return "macdonald", None
    if s.startswith("poly:"):
        return "poly", parse_poly(s[5:])
    raise ValueError(f"unknown kernel {text!r} (expected hall, macdonald or 'poly: ...')")


def parse_Z(text):
    """``"k=3"`` for ``1 + ... + z^3`` or an explicit z-character."""
    s = text.strip()
    if s.startswith("k="):
        k = int(s[2:])
        if k < 0:
            raise ValueError("k must be nonnegative")
        return {a: 1 for a in range(k + 1)}
    return poly_dict(s)


def parse_E(text):
    """``"A=0;B=geom;C=-z"`` -> dict of A, B, C (B may be ``"geom"``)."""
    out = {"A": None, "B": None, "C": None}
    if not text.strip():
        return out
    for item in text.split(";"):
        if not item.strip():
            continue
        if "=" not in item:
            raise ValueError(f"expected NAME=value in {item!r}")
        key, val = (x.strip() for x in item.split("=", 1))
        if key not in out:
            raise ValueError(f"unknown bundle component {key!r}")
        if key == "B" and val.startswith("geom"):
            start = val[4:].strip("() ") or "1"
            out["B"] = ("geom", int(start))
        else:
            out[key] = poly_dict(val) or None
    return out
