"""Numpy implementations of the hot kernels.

Used when the compiled extension is unavailable (or explicitly requested via
UAVCELL_BACKEND=numpy). Same semantics as ``_core``; summation order may
differ in the last few ulps.
"""

import numpy as np


def mean_loss_map(px, py, ux, uy, h, c, d, eta, alpha):
    """Mean path loss at each point for a transmitter at (ux, uy, h)."""
    d2 = (px - ux) ** 2 + (py - uy) ** 2 + h * h
    dist = np.sqrt(d2)
    theta = np.degrees(np.arcsin(h / dist))
    p = 1.0 / (1.0 + c * np.exp(-d * (theta - c)))
    amp = d2 if alpha == 2.0 else dist**alpha
    return (p + eta * (1.0 - p)) * amp


def weighted_loss_sum(px, py, w, ux, uy, h, c, d, eta, alpha):
    """Sum of w * mean path loss over the points."""
    return float(np.dot(w, mean_loss_map(px, py, ux, uy, h, c, d, eta, alpha)))


def candidate_loss_sums(px, py, w, cx, cy, h, c, d, eta, alpha):
    """weighted_loss_sum for every candidate position (cx[k], cy[k])."""
    out = np.empty(cx.shape[0])
    for k in range(cx.shape[0]):
        out[k] = np.dot(w, mean_loss_map(px, py, cx[k], cy[k], h, c, d, eta, alpha))
    return out
