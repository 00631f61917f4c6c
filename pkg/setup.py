"""Build hook for the optional compiled trial kernel.

The package is fully functional without the extension (a numpy fallback with
identical semantics is selected at import time); set LIGHTROLL_NO_EXT=1 to
skip compilation entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("LIGHTROLL_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/lightroll/_speedups.pyx"],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
