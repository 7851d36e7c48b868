"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure-Python backend is selected
at import time), so a missing compiler or missing Cython only costs speed.
"""

import os

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    pass
else:
    npyrandom_dir = os.path.join(os.path.dirname(np.random.__file__), "lib")
    ext = Extension(
        "rydjam._kernels._core",
        ["src/rydjam/_kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[npyrandom_dir],
        libraries=["npyrandom"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        # keep float arithmetic bit-identical with the numpy-based fallback
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)
