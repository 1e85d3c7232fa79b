"""Chebyshev interpolation/differentiation and fixed-order quadrature helpers.

Smooth data on an interval is represented by the interpolant through the
Chebyshev points of the first kind; differentiating the coefficient series
gives spectrally accurate derivatives of analytic data.  Composite Simpson
integration is used where a quadrature of a *known fixed order* is wanted,
so that refinement studies measure the scheme order rather than rounding
noise.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial.chebyshev import Chebyshev, chebpts1
from scipy.fft import dct


def cheb_points(n: int, a: float = -1.0, b: float = 1.0) -> np.ndarray:
    """First-kind Chebyshev points mapped to (a, b), ascending and strictly interior."""
    if n < 2:
        raise ValueError(f"need at least 2 points, got {n}")
    return 0.5 * (a + b) + 0.5 * (b - a) * chebpts1(n)


def cheb_coeffs(samples) -> np.ndarray:
    """Chebyshev coefficients of the interpolant through samples at cheb_points(n).

    Uses the DCT-II identity for first-kind nodes; O(n log n) and exact to
    rounding (cross-checked against the least-squares fit in the tests).
    """
    f = np.asarray(samples, dtype=float)
    n = f.size
    c = dct(f[::-1], type=2) / (2.0 * n)
    c[1:] *= 2.0
    return c


def cheb_interpolant(samples, a: float = -1.0, b: float = 1.0) -> Chebyshev:
    """Chebyshev series through samples given at cheb_points(len(samples), a, b)."""
    return Chebyshev(cheb_coeffs(samples), domain=[a, b])


def cheb_fit(fn, n: int, a: float = -1.0, b: float = 1.0) -> Chebyshev:
    """Interpolant of a callable through n first-kind points on (a, b)."""
    return cheb_interpolant(fn(cheb_points(n, a, b)), a, b)
