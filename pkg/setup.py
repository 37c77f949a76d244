"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a missing Cython or a failed compile only costs speed.
Set PHASEGROVER_SKIP_EXT=1 to force a pure-Python build.
"""

import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("PHASEGROVER_SKIP_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "phasegrover._kernels._core",
                ["src/phasegrover/_kernels/_core.pyx"],
                # -ffp-contract=off: the numpy backend must produce
                # bit-identical sums, so fused multiply-add is disabled.
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
