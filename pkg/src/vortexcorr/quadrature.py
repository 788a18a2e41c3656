"""Quadrature grids used throughout the library.

Gauss-Legendre rules handle the Gaussian-weighted radial/Cartesian integrals;
equally spaced (periodic trapezoid) grids handle angular integrals, where they
are exact for the low-order trigonometric polynomials produced by two-mode
states.
"""

import numpy as np

from .errors import QuadratureError

# Mode functions are numerically zero beyond this box (exp(-18) ~ 1.5e-8 on
# the amplitude, squared in any density), so [-EXTENT, EXTENT]^2 is the
# integration domain for Cartesian quadratures.
EXTENT = 6.0

# Order used for mode overlaps; orthonormality holds to better than 1e-10.
DEFAULT_ORDER = 64


def gauss_legendre(order, lo, hi):
    """Nodes and weights of the Gauss-Legendre rule mapped to [lo, hi]."""
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def plane_grid(order=DEFAULT_ORDER, extent=EXTENT):
    """Tensor Gauss-Legendre grid on [-extent, extent]^2.

    Returns flat arrays (x, y, w) with len == order**2.
    """
    x1, w1 = gauss_legendre(order, -extent, extent)
    xx, yy = np.meshgrid(x1, x1, indexing="ij")
    ww = np.outer(w1, w1)
    return xx.ravel(), yy.ravel(), ww.ravel()


def periodic_angles(count):
    """Equally spaced angles on [0, 2*pi) with uniform weights.

    The periodic trapezoid rule integrates trigonometric polynomials of
    degree < count exactly, which covers every angular integrand produced by
    two-mode states (degree <= 4).
    """
    theta = np.arange(count) * (2.0 * np.pi / count)
    w = np.full(count, 2.0 * np.pi / count)
    return theta, w


def integrate_plane(fn, order=DEFAULT_ORDER, extent=EXTENT, check=False,
                    tol=1e-10):
    """Integrate fn(x, y) over the plane box, optionally with a convergence
    check against a lower-order rule."""
    x, y, w = plane_grid(order, extent)
    value = np.sum(fn(x, y) * w)
    if check:
        order2 = max(8, order - 16)
        x2, y2, w2 = plane_grid(order2, extent)
        ref = np.sum(fn(x2, y2) * w2)
        residual = abs(value - ref)
        if residual > tol * max(1.0, abs(value)):
            raise QuadratureError(
                f"plane integral did not converge (order {order2}->{order} "
                f"moved by {residual:.3e})", residual=float(residual))
    return value
