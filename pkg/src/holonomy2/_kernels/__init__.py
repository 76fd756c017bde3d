"""Hot kernels: compiled extension when available, numpy fallback otherwise.

Set ``HOLONOMY2_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels as pykernels

BACKEND = "python"
ckernels = None

if os.environ.get("HOLONOMY2_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as ckernels  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        ckernels = None

_impl = ckernels if ckernels is not None else pykernels

expm_batch = _impl.expm_batch
cf4_step_left = _impl.cf4_step_left
cf4_step_right = _impl.cf4_step_right
cf4_sequence_left = _impl.cf4_sequence_left
cf4_sequence_right = _impl.cf4_sequence_right

__all__ = [
    "BACKEND",
    "ckernels",
    "pykernels",
    "expm_batch",
    "cf4_step_left",
    "cf4_step_right",
    "cf4_sequence_left",
    "cf4_sequence_right",
]
