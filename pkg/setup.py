# Build script for the optional compiled kernels.
#
# The package is fully functional without the extension: rectmm._kernels
# falls back to pure-Python implementations at import time.  Build in place
# with `python setup.py build_ext --inplace` or via `pip install -e .`.
from setuptools import setup, Extension

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("rectmm._kernels._core", ["src/rectmm/_kernels/_core.pyx"])],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
