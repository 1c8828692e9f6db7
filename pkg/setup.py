"""Build script: compiles the optional Cython kernel extension.

If Cython or a C compiler is unavailable the build falls back to a
pure-Python wheel; the package selects the numpy kernels at import time.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "valsweep._kernels._cykernels",
                sources=["src/valsweep/_kernels/_cykernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
