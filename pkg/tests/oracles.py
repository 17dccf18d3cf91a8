"""Independent double-precision oracles shared by the tests."""

import numpy as np
from scipy.special import spence

TWO_PI_I = 2j * np.pi


def _li2(w):
    return spence(1 - w)


def re_phi_wl_deformed(s, z1, z2):
    """Re of the deformed Whitehead potential, written out term by term."""
    e = lambda w: np.exp(TWO_PI_I * w)  # noqa: E731
    v = (_li2(e(s - 1 - z1 - z2)) - _li2(e(s - 1 - z2)) + _li2(e(z2))
         - _li2(e(z1 + z2)) + _li2(e(z1))) / TWO_PI_I
    v = v - TWO_PI_I * (s - 1) * (z1 + z2)
    return v.real


def _zoom(f, center, half, levels=11, n=7, shrink=0.35, maximize=True):
    c = np.asarray(center, dtype=float)
    best = None
    for _ in range(levels):
        ax = np.linspace(-half, half, n)
        A, B = np.meshgrid(c[0] + ax, c[1] + ax, indexing="ij")
        vals = f(A, B)
        idx = np.unravel_index(np.argmax(vals) if maximize else np.argmin(vals), vals.shape)
        c = np.array([A[idx], B[idx]])
        best = vals[idx]
        half *= shrink
    return best, c


def deformed_volume_grid(s, center=(0.5, 0.25), half=0.05):
    """2 pi min_y max_x Re Phi(x + i y) by nested zooming grids.

    The critical point is a saddle of Re Phi: a maximum along real shifts
    and a minimum along imaginary ones, so the min-max recovers its value.
    """
    def inner(y1, y2):
        val, _ = _zoom(lambda a, b: re_phi_wl_deformed(s, a + 1j * y1, b + 1j * y2), center, half)
        return val

    vinner = np.vectorize(inner)
    val, _ = _zoom(vinner, (0.0, 0.0), half, maximize=False)
    return 2 * np.pi * val
