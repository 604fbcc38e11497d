"""Build script: compiles the optional C kernel extension.

Set LFRORDER_PURE_PYTHON=1 to skip the extension entirely; the package
falls back to the NumPy kernels at import time when the extension is
missing, so a failed compile is not fatal (``optional=True``).
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("LFRORDER_PURE_PYTHON") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "lfrorder._kernels._ckern",
                    ["src/lfrorder/_kernels/_ckern.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
