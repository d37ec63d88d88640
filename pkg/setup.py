"""Build hook for the optional compiled word-reduction kernel.

The package is pure Python plus one Cython extension, burnside._speedups.
If Cython or a C compiler is unavailable (or BURNSIDE_NO_EXTENSION=1 is
set) the build proceeds without it and burnside.kernels falls back to the
pure implementation at import time.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("BURNSIDE_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("burnside._speedups", ["src/burnside/_speedups.pyx"])],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
