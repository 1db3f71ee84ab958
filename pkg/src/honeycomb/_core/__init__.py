"""Numerical core: compiled kernels with a pure numpy fallback.

The compiled module is used when it was built and ``HONEYCOMB_PURE_PYTHON``
is unset or ``0``. ``BACKEND`` names the active implementation.
"""

import os

from . import _pykernels as pykernels

EXPONENTIAL = pykernels.EXPONENTIAL
RIESZ_POWER = pykernels.RIESZ_POWER
FRACTIONAL = pykernels.FRACTIONAL
INTERIOR = pykernels.INTERIOR
EXTERIOR = pykernels.EXTERIOR

ckernels = None
if os.environ.get("HONEYCOMB_PURE_PYTHON", "0") in ("", "0"):
    try:
        from . import _ckernels as ckernels
    except ImportError:  # extension not built
        ckernels = None

_impl = ckernels if ckernels is not None else pykernels
BACKEND = "cython" if ckernels is not None else "python"

radial_potentials = _impl.radial_potentials
ray_exit = _impl.ray_exit
hausdorff = _impl.hausdorff
radial_profile = pykernels.radial_profile

__all__ = [
    "BACKEND",
    "EXPONENTIAL",
    "RIESZ_POWER",
    "FRACTIONAL",
    "INTERIOR",
    "EXTERIOR",
    "radial_potentials",
    "radial_profile",
    "ray_exit",
    "hausdorff",
    "ckernels",
    "pykernels",
]
