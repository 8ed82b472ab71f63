"""Scaling limiter for the point-value update.

The forward-Euler point update is blended with a first-order Rusanov update
on the staggered mesh whose cells are centred on the interfaces.
"""
from __future__ import annotations

import numpy as np

from .equations import Euler

EPS_FLOOR = 1e-13


def staggered_alpha(kind, P):
    """alpha_i = max spectral radius of the two point values bounding cell i."""
    s = kind.max_speed(P)
    return np.maximum(s[:-1], s[1:])


def llf_point_update(kind, Pm, Pc, Pp, dx_left, dx_right, dt, fluxes=None, speeds=None):
    """First-order update of Pc from its neighbours Pm (left) and Pp (right).

    Returns (U_low, alpha_left, alpha_right); the two alphas are the
    staggered-cell bounds entering the time-step restriction.  ``fluxes``
    and ``speeds`` may carry precomputed (left, center, right) triples.
    """
    sm, sc, sp = speeds or (kind.max_speed(Pm), kind.max_speed(Pc), kind.max_speed(Pp))
    a_left = np.maximum(sm, sc)
    a_right = np.maximum(sc, sp)
    Fm, Fc, Fp = fluxes or (kind.flux(Pm), kind.flux(Pc), kind.flux(Pp))
    h_left = 0.5 * (Fm + Fc) - 0.5 * a_left[..., None] * (Pc - Pm)
    h_right = 0.5 * (Fc + Fp) - 0.5 * a_right[..., None] * (Pp - Pc)
    mu = 2.0 * dt / (np.asarray(dx_left) + np.asarray(dx_right))
    return Pc - np.asarray(mu)[..., None] * (h_right - h_left), a_left, a_right


def point_dt_limit(dx_left, dx_right, a_left, a_right):
    return (dx_left + dx_right) / (4.0 * np.maximum(a_left, a_right))


def blend_scalar_point(u_high, u_low, lo, hi):
    """Scale u_high toward u_low until it lies in [lo, hi]; returns (u_lim, theta)."""
    u_high = np.asarray(u_high, dtype=float)
    u_low = np.asarray(u_low, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        theta = np.where(
            u_high < lo, (u_low - lo) / (u_low - u_high),
            np.where(u_high > hi, (hi - u_low) / (u_high - u_low), 1.0),
        )
    theta = np.clip(np.nan_to_num(theta, nan=0.0), 0.0, 1.0)
    # the blend lands exactly on the violated bound; write it as such
    u_lim = np.where(u_high > hi, np.where(u_low <= hi, hi, u_low), u_high)
    u_lim = np.where(u_high < lo, np.where(u_low >= lo, lo, u_low), u_lim)
    u_lim = np.broadcast_to(u_lim, theta.shape).astype(float)
    return u_lim, theta


def blend_euler_point(U_high, U_low, gamma):
    """Two-step positivity blend; returns (U_lim, theta_rho, theta_p).

    Entries whose density and pressure already reach the floor keep theta = 1
    and are returned untouched; only the remaining ones are blended.
    """
    U_high = np.asarray(U_high, dtype=float)
    U_low = np.asarray(U_low, dtype=float)
    g1 = gamma - 1.0
    rho_h = U_high[..., 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        p_h = g1 * (U_high[..., 2] - 0.5 * U_high[..., 1] ** 2 / rho_h)
    need = ~((rho_h >= EPS_FLOOR) & (p_h >= EPS_FLOOR))
    t1 = np.ones(rho_h.shape)
    t2 = np.ones(rho_h.shape)
    if not need.any():
        return U_high, t1, t2
    U_lim = U_high.copy()
    U_lim[need], t1[need], t2[need] = _blend_euler(U_high[need], np.broadcast_to(U_low, U_high.shape)[need], gamma)
    return U_lim, t1, t2


def _theta(num, den, violated):
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(violated, num / den, 1.0)
    # a nan ratio only arises from a degenerate blend; fall back fully
    return np.clip(np.where(t == t, t, 0.0), 0.0, 1.0)


def _blend_euler(U_high, U_low, gamma):
    kind = Euler(gamma)
    g1 = gamma - 1.0
    rho_h, rho_l = U_high[..., 0], U_low[..., 0]
    eps_rho = np.minimum(EPS_FLOOR, rho_l)
    t1 = _theta(rho_l - eps_rho, rho_l - rho_h, rho_h < eps_rho)
    U_star = U_high.copy()
    U_star[..., 0] = np.where(t1 == 1.0, rho_h, t1 * rho_h + (1.0 - t1) * rho_l)

    with np.errstate(divide="ignore", invalid="ignore"):
        p_star = g1 * (U_star[..., 2] - 0.5 * U_star[..., 1] ** 2 / U_star[..., 0])
        p_low = g1 * (U_low[..., 2] - 0.5 * U_low[..., 1] ** 2 / U_low[..., 0])
    eps_p = np.minimum(EPS_FLOOR, p_low)
    t2 = _theta(p_low - eps_p, p_low - p_star, p_star < eps_p)
    U_lim = np.where((t2 == 1.0)[..., None], U_star,
                     t2[..., None] * U_star + (1.0 - t2[..., None]) * U_low)
    # roundoff guard: fall back to the low-order state
    bad = ~kind.admissible_mask(U_lim)
    if np.any(bad):
        U_lim = np.where(bad[..., None], U_low, U_lim)
        t2 = np.where(bad, 0.0, t2)
    return U_lim, t1, t2


def repair_cell_center(kind, U_center, U_average):
    """Blend a cell-center value toward the cell average until it is admissible."""
    if kind.is_scalar:
        if kind.bounds is None:
            return U_center
        lo, hi = kind.bounds
        return blend_scalar_point(U_center[..., 0], U_average[..., 0], lo, hi)[0][..., None]
    return blend_euler_point(U_center, U_average, kind.gamma)[0]
