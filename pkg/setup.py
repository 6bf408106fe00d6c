"""Build script: compiles the ascent kernel extension when Cython is available.

The package is fully functional without the extension; kernels.py falls
back to the pure numpy implementation at import time.
"""

import os

from setuptools import setup

extensions = []
_pyx = os.path.join("src", "solvgeo", "_ascent.pyx")
if os.path.exists(_pyx):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        extensions = cythonize(
            [
                Extension(
                    "solvgeo._ascent",
                    [_pyx],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        extensions = []

setup(ext_modules=extensions)
