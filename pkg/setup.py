"""Build script: compiles the optional Cython match kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed or skipped compilation is not fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("pegrec._speedups", ["src/pegrec/_speedups.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
