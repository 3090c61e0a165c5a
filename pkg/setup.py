"""Build script for the optional compiled geometry kernels.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time); set FACEARTIFACTS_PURE=1 to skip
compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("FACEARTIFACTS_PURE"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "faceartifacts.geometry._ckernels",
                    ["src/faceartifacts/geometry/_ckernels.pyx"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
