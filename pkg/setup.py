"""Build script for the optional compiled training kernel.

The package works without the extension: philotope._kernels falls back to
the pure-Python kernel when the compiled module is missing.
"""

import sys

from setuptools import Extension, setup


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        print("philotope: Cython/numpy unavailable, skipping compiled kernel",
              file=sys.stderr)
        return []
    ext = Extension(
        "philotope._sgns_c",
        sources=["src/philotope/_sgns_c.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions())
