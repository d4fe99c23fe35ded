"""Build script: compiles the optional C kernel extension.

The package works without the extension (a pure-Python twin is selected
at import time), so a failed compile only costs speed, not features.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext = Extension(
        "layerforge._kernels_c",
        ["src/layerforge/_kernels_c.pyx"],
        extra_compile_args=["-O3"],
        optional=True,
    )
    ext_modules = cythonize(
        [ext],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        quiet=True,
    )

setup(ext_modules=ext_modules)
