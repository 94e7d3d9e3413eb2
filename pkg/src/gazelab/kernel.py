"""Kernel selection: compiled extension when available, NumPy otherwise.

The forest imports ``best_split`` and ``apply_tree`` from here.  At import
time we try the compiled extension (``gazelab._kernel``) and fall back to
the NumPy implementation (``gazelab._kernel_py``) when it is missing —
e.g. when the package was installed without a C compiler.  Because both
implementations are bit-identical, the choice never changes results, only
speed.

Set the environment variable ``GAZELAB_FORCE_PYTHON_KERNEL=1`` before import
to use the NumPy kernels even when the extension is present (useful for
benchmarking and parity tests).
"""

from __future__ import annotations

import os

from . import _kernel_py as python_kernel

compiled_kernel = None
if os.environ.get("GAZELAB_FORCE_PYTHON_KERNEL", "") != "1":
    try:
        from . import _kernel as compiled_kernel  # type: ignore[no-redef]
    except ImportError:
        compiled_kernel = None

#: True when the compiled extension is the active backend.
USING_COMPILED = compiled_kernel is not None

_active = compiled_kernel if USING_COMPILED else python_kernel

best_split = _active.best_split
apply_tree = _active.apply_tree

__all__ = ["best_split", "apply_tree", "USING_COMPILED", "python_kernel", "compiled_kernel"]
