"""Hot numerical kernels with backend selection at import.

The compiled Cython core is preferred when built; otherwise the numpy
fallback is used. Set UAVCELL_BACKEND=numpy (or =cython) to force one;
``backend()`` reports the active choice.
"""

import os

import numpy as np

from . import _fallback

_choice = os.environ.get("UAVCELL_BACKEND", "auto").strip().lower()

if _choice in ("auto", "", "cython"):
    try:
        from . import _core as _impl

        _BACKEND = "cython"
    except ImportError:
        if _choice == "cython":
            raise
        _impl = _fallback
        _BACKEND = "numpy"
elif _choice == "numpy":
    _impl = _fallback
    _BACKEND = "numpy"
else:
    raise ValueError(
        f"UAVCELL_BACKEND={_choice!r} not recognized; use 'cython' or 'numpy'"
    )


def backend():
    """Name of the active kernel backend: 'cython' or 'numpy'."""
    return _BACKEND


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def mean_loss_map(px, py, ux, uy, h, c, d, eta, alpha):
    """Mean path loss at each (px, py) for a transmitter at (ux, uy, h)."""
    return _impl.mean_loss_map(_c(px), _c(py), float(ux), float(uy), float(h),
                               float(c), float(d), float(eta), float(alpha))


def weighted_loss_sum(px, py, w, ux, uy, h, c, d, eta, alpha):
    """Sum of w * mean path loss over the given points."""
    return float(_impl.weighted_loss_sum(_c(px), _c(py), _c(w), float(ux),
                                         float(uy), float(h), float(c),
                                         float(d), float(eta), float(alpha)))


def candidate_loss_sums(px, py, w, cx, cy, h, c, d, eta, alpha):
    """weighted_loss_sum evaluated for every candidate (cx[k], cy[k])."""
    return _impl.candidate_loss_sums(_c(px), _c(py), _c(w), _c(cx), _c(cy),
                                     float(h), float(c), float(d), float(eta),
                                     float(alpha))
