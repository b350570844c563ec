"""Spatial kernels and the single centered filtering primitive used by every layer.

Conventions fixed here and relied on everywhere else:

* Fields are 2-D float arrays indexed ``[y, x]`` (row, column); x grows
  rightward, y grows downward.  Angles are measured from +x toward +y,
  so a rightward-moving pattern has direction 0 and a downward-moving
  one pi/2.
* ``correlate`` is centered cross-correlation (no kernel flip):
  ``out[y, x] = sum_{i,j} field[y+j, x+i] * kernel[j+r, i+r]`` with
  replicate-edge padding.  Zero padding would fabricate contrast at the
  frame border that the approach detector reads as looming.
* Kernels are evaluated on integer offsets from the center and are not
  renormalized after truncation to their support.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import correlate as _direct_correlate
from scipy.signal import fftconvolve

__all__ = [
    "correlate",
    "kernel_grid",
    "make_center_surround",
    "make_dog",
    "make_gabor",
    "make_gaussian",
]


def kernel_grid(size: int):
    """Integer offset grids (x, y) from the kernel center; size must be odd."""
    if size < 1 or size % 2 == 0:
        raise ValueError(f"kernel size must be odd and positive, got {size}")
    r = size // 2
    y, x = np.mgrid[-r : r + 1, -r : r + 1]
    return x.astype(float), y.astype(float)


def make_dog(gain: float, sigma1: float, sigma2: float, size: int) -> np.ndarray:
    """Difference-of-Gaussians bandpass kernel.

    weight(x, y) = gain/(sqrt(2 pi) sigma1) exp(-(x^2+y^2)/2 sigma1^2)
                 - gain/(sqrt(2 pi) sigma2) exp(-(x^2+y^2)/2 sigma2^2)

    The 1-D Gaussian normalization in a 2-D kernel is intentional (kept
    exactly as published, not corrected to 1/(2 pi sigma^2)).
    """
    if sigma1 > sigma2:
        raise ValueError(f"invalid sigma ordering: sigma1={sigma1} > sigma2={sigma2}")
    if sigma1 <= 0.0:
        raise ValueError("sigma1 must be positive")
    x, y = kernel_grid(size)
    rr = x * x + y * y
    c1 = gain / (math.sqrt(2.0 * math.pi) * sigma1)
    c2 = gain / (math.sqrt(2.0 * math.pi) * sigma2)
    return c1 * np.exp(-rr / (2.0 * sigma1 * sigma1)) - c2 * np.exp(-rr / (2.0 * sigma2 * sigma2))


def make_gabor(theta: float, psi: float, lam: float, sigma: float, size: int) -> np.ndarray:
    """Oriented Gabor kernel; sigma is the envelope width in pixels.

    weight(x, y) = exp(-(x'^2+y'^2)/2 sigma^2) cos(2 pi x'/lam + psi)
    with x' = x cos(theta) + y sin(theta), y' = -x sin(theta) + y cos(theta).
    """
    if lam <= 0.0 or sigma <= 0.0:
        raise ValueError("lam and sigma must be positive")
    x, y = kernel_grid(size)
    xp = x * math.cos(theta) + y * math.sin(theta)
    yp = -x * math.sin(theta) + y * math.cos(theta)
    env = np.exp(-(xp * xp + yp * yp) / (2.0 * sigma * sigma))
    return env * np.cos(2.0 * math.pi * xp / lam + psi)


def make_center_surround(lam: float, sigma: float, psi: float, size: int) -> np.ndarray:
    """Antagonistic center-surround kernel: zero center, boosted surround ring.

    weight(x, y) = 1 - exp(-(x^2+y^2)/2 sigma^2) cos(2 pi (x^2+y^2)/lam + psi)
    """
    if lam <= 0.0 or sigma <= 0.0:
        raise ValueError("lam and sigma must be positive")
    x, y = kernel_grid(size)
    rr = x * x + y * y
    return 1.0 - np.exp(-rr / (2.0 * sigma * sigma)) * np.cos(2.0 * math.pi * rr / lam + psi)


def make_gaussian(sigma: float, size: int) -> np.ndarray:
    """Isotropic Gaussian blur kernel, 1/(2 pi sigma^2) exp(-(x^2+y^2)/2 sigma^2)."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    x, y = kernel_grid(size)
    rr = x * x + y * y
    return np.exp(-rr / (2.0 * sigma * sigma)) / (2.0 * math.pi * sigma * sigma)


# direct summation up to this kernel size, padded FFT beyond; the two paths
# agree to ~1e-13 relative, far inside the documented 1e-9 compatibility bound
_DIRECT_SIZE_LIMIT = 9


def correlate(field: np.ndarray, kernel: np.ndarray, border_policy: str = "replicate") -> np.ndarray:
    """Centered cross-correlation with replicate-edge padding, same-size output."""
    if border_policy != "replicate":
        raise ValueError(f"unsupported border policy: {border_policy!r}")
    field = np.asarray(field, dtype=float)
    kernel = np.asarray(kernel, dtype=float)
    if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1] or kernel.shape[0] % 2 == 0:
        raise ValueError(f"kernel must be square with odd size, got {kernel.shape}")
    if not np.isfinite(field).all():
        raise ValueError("field contains non-finite values")
    if not np.isfinite(kernel).all():
        raise ValueError("kernel contains non-finite values")
    r = kernel.shape[0] // 2
    if r == 0:
        return field * kernel[0, 0]
    if kernel.shape[0] <= _DIRECT_SIZE_LIMIT:
        return _direct_correlate(field, kernel, mode="nearest")
    padded = np.pad(field, r, mode="edge")
    # convolution with the point-reflected kernel is cross-correlation
    return fftconvolve(padded, kernel[::-1, ::-1], mode="valid")
