"""Build script: compiles the optional fast-math extension.

The package works without the extension (a NumPy fallback with the same
interface is selected at import time), so any compilation failure is
downgraded to a warning.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "reglab._fastmath",
                ["src/reglab/_fastmath.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    sys.stderr.write(f"warning: building without the fast-math extension ({exc})\n")

setup(ext_modules=ext_modules)
