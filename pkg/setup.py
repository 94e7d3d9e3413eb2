"""Build script: compiles the optional C extension for the tree kernels.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so any failure to build it is demoted to a warning
rather than aborting the install.  Set GAZELAB_SKIP_BUILD_EXT=1 to skip the
compile step entirely.
"""

import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("GAZELAB_SKIP_BUILD_EXT", "") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "gazelab._kernel",
                    ["src/gazelab/_kernel.pyx"],
                )
            ],
            language_level=3,
        )
    except Exception as exc:  # pragma: no cover - build-environment dependent
        sys.stderr.write(
            "warning: C extension will not be built (%s); "
            "the pure NumPy kernels will be used instead\n" % exc
        )
        ext_modules = []

setup(ext_modules=ext_modules)
