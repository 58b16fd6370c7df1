"""Build script: compiles the optional Cython ALS kernel.

The package works without the extension (a pure-Python backend is selected
at import time), so any build failure here is downgraded to a warning.
"""

import os
import warnings

from setuptools import Extension, setup


def extensions():
    if not os.path.exists("src/pencilranks/_als.pyx"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        warnings.warn(f"Cython/numpy unavailable, skipping ALS kernel: {exc}")
        return []
    ext = Extension(
        "pencilranks._als",
        sources=["src/pencilranks/_als.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions())
