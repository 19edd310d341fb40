"""Quadrature weights, chirp-z sums and FFT worker selection."""
from __future__ import annotations

import os

import numpy as np
from scipy import fft as sfft
from scipy.signal import CZT


def fft_workers() -> int:
    """Worker count for scipy.fft, capped by HYPERSCHROD_THREADS."""
    raw = os.environ.get("HYPERSCHROD_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def simpson_weights(n: int, h: float) -> np.ndarray:
    """Composite Simpson weights for n equispaced nodes.

    For an even node count the last three intervals use the 3/8 rule, so the
    rule stays fourth order either way.
    """
    if n < 3:
        raise ValueError("Simpson needs at least three nodes")
    w = np.zeros(n)
    m = n if n % 2 == 1 else n - 3
    if m >= 3:
        w[:m:2] = 2.0
        w[1:m:2] = 4.0
        w[0] = 1.0
        w[m - 1] = 1.0
        w[:m] *= h / 3.0
    if m != n:
        w[n - 4:] += np.array([1.0, 3.0, 3.0, 1.0]) * 3.0 * h / 8.0
    return w


def radial_weights(radii: np.ndarray, dr: float) -> np.ndarray:
    """Simpson weights on a radial grid, adding a virtual node at r = 0 when absent.

    The integrand at the virtual node is taken to be zero (all radial measures
    here carry a factor vanishing at the origin).
    """
    if abs(radii[0]) < 0.5 * dr:
        return simpson_weights(radii.size, dr)
    return simpson_weights(radii.size + 1, dr)[1:]


def exp_sum(values, x0: float, dx: float, k0: float, dk: float, m: int, sign: int = -1, axis: int = -1):
    """S_j = sum_k values_k exp(sign*i*(k0 + j dk)(x0 + k dx)), j = 0..m-1.

    Evaluated with Bluestein's chirp-z algorithm, so the output frequencies
    are arbitrary (not tied to the FFT grid) at O((n+m) log(n+m)) cost.
    """
    values = np.moveaxis(np.asarray(values, dtype=complex), axis, -1)
    n = values.shape[-1]
    x = x0 + dx * np.arange(n)
    pre = values * np.exp(sign * 1j * k0 * x)
    w = np.exp(sign * 1j * dk * dx)
    with sfft.set_workers(fft_workers()):
        raw = CZT(n, m, w=w, a=1.0)(pre, axis=-1)
    k = k0 + dk * np.arange(m)
    out = raw * np.exp(sign * 1j * (k - k0) * x0)
    return np.moveaxis(out, -1, axis)
