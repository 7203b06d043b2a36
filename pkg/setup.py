"""Build script: compiles the optional selection kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so a failed compile only costs speed.
"""

import warnings

from setuptools import Extension, setup


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        warnings.warn(f"skipping compiled kernel build: {exc}")
        return []
    ext = Extension(
        "fasisac._gains_cy",
        sources=["src/fasisac/_gains_cy.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    try:
        return cythonize([ext], language_level=3)
    except Exception as exc:  # missing compiler, cython failure, ...
        warnings.warn(f"skipping compiled kernel build: {exc}")
        return []


setup(ext_modules=extensions())
