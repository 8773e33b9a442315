"""Build script for the optional compiled gain kernels.

The package is fully functional without the extension (a numpy fallback is
selected at import time); building it just makes the per-bin gain evaluation
faster.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("riskshrink._gains", ["src/riskshrink/_gains.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
