import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("ERRCALC_SKIP_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "errcalc._kernels._evalcore",
                ["src/errcalc/_kernels/_evalcore.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
