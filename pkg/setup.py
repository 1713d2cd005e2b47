"""Build script for the optional compiled kernels.

The Cython extension is optional: when it cannot be built the package falls
back to ``fusionscale._pykernels`` at import time.
"""

import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("FUSIONSCALE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "fusionscale._ckernels",
                    ["src/fusionscale/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
