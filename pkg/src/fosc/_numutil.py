"""Small shared numeric helpers."""

from __future__ import annotations

import numpy as np


def simpson_weights(n_points: int) -> np.ndarray:
    """Composite Simpson weights for a uniform grid (unit spacing).

    An odd interval count gets a trapezoid patch on the last interval.
    Multiply by the grid spacing to integrate.
    """
    if n_points < 3:
        raise ValueError("Simpson quadrature needs at least 3 points")
    w = np.zeros(n_points)
    n_int = n_points - 1
    end = n_points if n_int % 2 == 0 else n_points - 1
    if end >= 3:
        w[0:end:2] += 2.0 / 3.0
        w[1:end:2] += 4.0 / 3.0
        w[0] = 1.0 / 3.0
        w[end - 1] -= 1.0 / 3.0
    if n_int % 2 == 1:
        w[-2] += 0.5
        w[-1] += 0.5
    return w
