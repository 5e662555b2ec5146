"""Build script: compiles the optional Cython kernel for the split-step hot loop.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); the build is therefore marked optional so that a
missing compiler does not break installation.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    import numpy

    extensions = cythonize(
        [
            Extension(
                "dppdc._kernels._nonlinear",
                ["src/dppdc/_kernels/_nonlinear.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
    for ext in extensions:
        ext.optional = True
except ImportError:
    extensions = []

setup(ext_modules=extensions)
