"""Exact computations around a generalized Macdonald inner product.

Subpackages and modules:

``macloc.kernels``
    exact rationals, truncated Laurent series, factored characters, fractions
``macloc.partitions``, ``macloc.symfun``
    partitions and symmetric functions in the m, e, h, p bases
``macloc.plethysm``
    lambda-ring operations on torus characters
``macloc.ctprod``
    the constant-term inner product and its kernels
``macloc.macdonald``
    Macdonald polynomials and their norms
``macloc.grassloc``
    Grassmannian fixed-point localization
``macloc.limitlab``
    experiment runner and CLI
"""

__version__ = "0.1.0"
