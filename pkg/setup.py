"""Build script for the optional compiled kernel.

The package works without the extension: ``macloc.kernels`` falls back to
the pure-Python implementation when ``_ckernel`` cannot be imported.
"""
import os
import warnings

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MACLOC_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not found; installing pure-Python kernels only.")
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "macloc.kernels._ckernel",
                    ["src/macloc/kernels/_ckernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
