"""Build script for the compiled sampling kernel.

The package works without the extension (a pure-Python backend is selected at
import time), so a failed compile degrades gracefully rather than blocking the
install.
"""

import os
from os.path import join

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


def extensions():
    if cythonize is None or os.environ.get("PANELSPEC_SKIP_EXT"):
        return []
    ext = Extension(
        "panelspec._pg_cython",
        ["src/panelspec/_pg_cython.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[join(np.get_include(), "..", "..", "random", "lib")],
        libraries=["npyrandom"],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())
