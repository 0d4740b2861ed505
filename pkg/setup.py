import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # no Cython: install the pure-Python package only
    cythonize = None


def extensions():
    if cythonize is None or os.environ.get("FLATSPHERE_NO_EXT"):
        return []
    ext = Extension(
        "flatsphere._ckernels",
        ["src/flatsphere/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions())
