import os

from setuptools import setup
from setuptools.extension import Extension

ext_modules = []
if os.environ.get("KSORT_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "ksort._kernels",
                    sources=["src/ksort/_kernels.pyx"],
                    libraries=["m"],
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
