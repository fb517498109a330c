"""Exact arithmetic foundations: truncated series, factored characters, fractions."""

from ._backend import BACKEND, mul_terms
from .factored import FactoredChar
from .polyfrac import PolyFrac, frac_eq
from .series import Context, ContextMismatch, Series, binomial_power, geometric


def series_add(a, b):
    return a + b


def series_mul(a, b):
    return a * b


def series_invert(s):
    return s.invert()


def factored_mul(a, b):
    return a * b


def factored_to_series(f, ctx):
    return f.to_series(ctx)


__all__ = [
    "BACKEND", "Context", "ContextMismatch", "FactoredChar", "PolyFrac", "Series",
    "binomial_power", "factored_mul", "factored_to_series", "frac_eq", "geometric",
    "mul_terms", "series_add", "series_invert", "series_mul",
]
