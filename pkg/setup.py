"""Builds the optional compiled row-reduction kernel.

Without Cython (or a C compiler) the package still installs; the numpy
fallback in ``modvar.exactlin._rref_py`` is selected at import.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("modvar.exactlin._rref", ["src/modvar/exactlin/_rref.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
