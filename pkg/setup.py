"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a missing Cython toolchain must not break installation.
Set SEDFUSE_SKIP_EXT=1 to force a pure-Python build.
"""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("SEDFUSE_SKIP_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "sedfuse.kernels._native",
        sources=["src/sedfuse/kernels/_native.pyx"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions())
