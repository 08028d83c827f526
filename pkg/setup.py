"""Build the compiled kernel extension.

The package works without it (a numpy fallback is selected at import time);
build with `pip install -e . --no-build-isolation` or
`python setup.py build_ext --inplace`.
"""

from setuptools import setup
from setuptools.extension import Extension

from Cython.Build import cythonize

extensions = [
    Extension(
        "lpcodec._kernels",
        ["src/lpcodec/_kernels.pyx"],
        extra_compile_args=["-O3"],
    ),
]

setup(ext_modules=cythonize(extensions, language_level=3))
