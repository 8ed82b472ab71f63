"""In-cell reconstructions and the finite differences derived from them.

A cell is described by a triple (left interface value, middle value, right
interface value).  For state reconstructions the middle value is the cell
average; for flux reconstructions it is the cell-center value.  Everything is
elementwise, so triples of shape ``(n, m)`` are handled component by
component.
"""
from __future__ import annotations

import numpy as np

# Power-law branch is only used for ratios inside this window.
R_MIN = 1.0 / 50.0
R_MAX = 50.0


def parabola_from_average(left, avg, right, dx=1.0):
    """Coefficients (c0, c1, c2) of c0 + c1*s + c2*s**2, with s = x - x_i.

    The quadratic takes the values ``left``/``right`` at s = -dx/2, +dx/2 and
    has cell average ``avg``.
    """
    left, avg, right = (np.asarray(q, dtype=float) for q in (left, avg, right))
    c2 = -3.0 * (2.0 * avg - left - right) / dx**2
    c1 = (right - left) / dx
    c0 = 0.25 * (6.0 * avg - left - right)
    return c0, c1, c2


def deriv_plus_average(left, avg, right, dx):
    """Derivative at the right interface of the average-matching parabola."""
    return (2.0 * left - 6.0 * avg + 4.0 * right) / dx


def deriv_minus_average(left, avg, right, dx):
    """Derivative at the left interface of the average-matching parabola."""
    return (-4.0 * left + 6.0 * avg - 2.0 * right) / dx


def cell_center_from_simpson(left, avg, right):
    return 0.25 * (6.0 * avg - left - right)


def simpson_average(left, center, right):
    return (left + 4.0 * center + right) / 6.0


def flux_deriv_plus(left, center, right, dx):
    """Derivative at the right interface of the parabola through three point values."""
    return (left - 4.0 * center + 3.0 * right) / dx


def flux_deriv_minus(left, center, right, dx):
    """Derivative at the left interface of the parabola through three point values."""
    return (-3.0 * left + 4.0 * center - right) / dx


def flux_triple_for_power_law(f_left, f_center, f_right):
    """Turn point-value flux data into a (left, average, right) triple."""
    return f_left, simpson_average(f_left, f_center, f_right), f_right


def power_law_ratio(left, avg, right):
    """Return (r, valid) where r = (right - avg) / (avg - left).

    ``valid`` is False where the denominator vanishes; such cells always fall
    back to the parabola.
    """
    left, avg, right = np.broadcast_arrays(*(np.asarray(q, dtype=float) for q in (left, avg, right)))
    den = avg - left
    valid = den != 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(valid, (right - avg) / np.where(valid, den, 1.0), np.inf)
    return r, valid


def power_law_branch(left, avg, right):
    """Masks (steep_right, steep_left) selecting the two power-law shapes.

    ``steep_right`` is the r > 2 case (profile flat at the left end),
    ``steep_left`` the 0 < r < 1/2 case.
    """
    r, valid = power_law_ratio(left, avg, right)
    use = valid & (r >= R_MIN) & (r <= R_MAX)
    return r, use & (r > 2.0), use & (r < 0.5)


def power_law_derivs(left, avg, right, dx):
    """Interface derivatives (d_left, d_right) with the power-law switch.

    Where the parabola is monotone, where the average lies outside the range
    of the point values, or where the ratio leaves [1/50, 50], the parabolic
    derivatives are returned.
    """
    left, avg, right = np.broadcast_arrays(*(np.asarray(q, dtype=float) for q in (left, avg, right)))
    d_left = deriv_minus_average(left, avg, right, dx)
    d_right = deriv_plus_average(left, avg, right, dx)
    r, hi, lo = power_law_branch(left, avg, right)
    slope = (right - left) / dx
    d_left = np.where(hi, 0.0, d_left)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        d_right = np.where(hi, slope * r, d_right)
        d_left = np.where(lo, slope / r, d_left)
    d_right = np.where(lo, 0.0, d_right)
    return d_left, d_right


def power_law_eval(left, avg, right, xi):
    """Evaluate the limited reconstruction at local coordinates xi in [0, 1].

    Falls back to the parabola outside the power-law branches.  The triple
    broadcasts against ``xi``, so ``left[:, None]`` with a row of ``xi``
    samples many cells at once.
    """
    left, avg, right, xi = np.broadcast_arrays(*(np.asarray(q, dtype=float) for q in (left, avg, right, xi)))
    r, hi, lo = power_law_branch(left, avg, right)
    c0, c1, c2 = parabola_from_average(left, avg, right)
    s = xi - 0.5
    out = c0 + c1 * s + c2 * s * s
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(hi, left + (right - left) * xi**r, out)
        out = np.where(lo, right - (right - left) * (1.0 - xi) ** (1.0 / r), out)
    return out
