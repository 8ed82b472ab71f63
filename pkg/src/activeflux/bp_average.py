"""Convex limiting of the cell-average update.

The high-order interface flux F(U_{i+1/2}) is blended with the first-order
Rusanov flux so that both limited intermediate states of every interface stay
in the admissible set.  For scalar laws the bounds are a global or local
maximum principle; for the Euler equations density is limited first and
pressure second.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .equations import Euler

EPS_FLOOR = 1e-13
_MAX_ALPHA_DOUBLINGS = 60


def alpha_bound(kind, UL, UR):
    """Wave-speed bound for the Riemann problem between two averages."""
    return np.maximum(kind.max_speed(UL), kind.max_speed(UR))


def low_order_flux(kind, UL, UR, alpha, FL=None, FR=None):
    FL = kind.flux(UL) if FL is None else FL
    FR = kind.flux(UR) if FR is None else FR
    return 0.5 * (FL + FR) - 0.5 * np.asarray(alpha)[..., None] * (UR - UL)


def intermediate_states(kind, UL, UR, alpha, FL=None, FR=None):
    FL = kind.flux(UL) if FL is None else FL
    FR = kind.flux(UR) if FR is None else FR
    return 0.5 * (UL + UR) + (FL - FR) / (2.0 * np.asarray(alpha)[..., None])


def safe_alpha(kind, UL, UR, FL=None, FR=None, alpha=None):
    """Wave-speed bound, enlarged where needed so the intermediate state is admissible.

    Returns (alpha, U_tilde, n_enlarged).  The intermediate state tends to the
    arithmetic mean of two admissible states as alpha grows, so doubling
    terminates for admissible input.
    """
    alpha, Ut, n_enlarged, _ = _safe_alpha(kind, UL, UR, FL, FR, alpha)
    return alpha, Ut, n_enlarged


def _safe_alpha(kind, UL, UR, FL, FR, alpha):
    FL = kind.flux(UL) if FL is None else FL
    FR = kind.flux(UR) if FR is None else FR
    alpha = alpha_bound(kind, UL, UR) if alpha is None else alpha
    Ut = intermediate_states(kind, UL, UR, alpha, FL, FR)
    if kind.is_scalar:
        # exactly a convex combination of the two states; undo roundoff
        Ut = np.clip(Ut, np.minimum(UL, UR), np.maximum(UL, UR))
        return alpha, Ut, 0, kind.admissible_mask(Ut)
    bad = ~kind.admissible_mask(Ut)
    n_enlarged = int(bad.sum())
    for _ in range(_MAX_ALPHA_DOUBLINGS):
        if not bad.any():
            break
        alpha = np.where(bad, 2.0 * alpha, alpha)
        Ut[bad] = intermediate_states(kind, UL[bad], UR[bad], alpha[bad], FL[bad], FR[bad])
        bad = ~kind.admissible_mask(Ut)
    return alpha, Ut, n_enlarged, ~bad


def limit_scalar(f_low, f_high, u_tilde, alpha, lo_left, hi_left, lo_right=None, hi_right=None):
    """Limited flux for a scalar law.

    ``lo_left``/``hi_left`` bound the state left of the interface,
    ``lo_right``/``hi_right`` the state right of it (defaulting to the left
    bounds, i.e. a global maximum principle).  Where the intermediate state
    itself violates the bounds the anti-diffusive flux is dropped.
    """
    lo_right = lo_left if lo_right is None else lo_right
    hi_right = hi_left if hi_right is None else hi_right
    a = alpha
    df = f_high - f_low
    pos = np.minimum(np.minimum(df, a * (u_tilde - lo_left)), a * (hi_right - u_tilde))
    neg = np.maximum(np.maximum(df, a * (lo_right - u_tilde)), a * (u_tilde - hi_left))
    df_lim = np.where(df >= 0.0, np.maximum(pos, 0.0), np.minimum(neg, 0.0))
    # untouched interfaces keep the high-order flux bit for bit
    return np.where(df_lim == df, f_high, f_low + df_lim)


def limit_euler_density(f_low, f_high, U_tilde, alpha):
    """Anti-diffusive flux with its density row clipped; other rows untouched."""
    dF = f_high - f_low
    rho_t = U_tilde[..., 0]
    eps = np.minimum(EPS_FLOOR, rho_t)
    d = dF[..., 0]
    d_lim = np.where(
        d >= 0.0,
        np.minimum(d, alpha * (rho_t - eps)),
        np.maximum(d, alpha * (eps - rho_t)),
    )
    dF_star = dF.copy()
    dF_star[..., 0] = d_lim
    return dF_star


def pressure_theta(dF_star, U_tilde, alpha, gamma):
    """Largest theta from the linear sufficient condition of the pressure constraint."""
    rho, m, E = U_tilde[..., 0], U_tilde[..., 1], U_tilde[..., 2]
    dr, dm, dE = dF_star[..., 0], dF_star[..., 1], dF_star[..., 2]
    p_t = (gamma - 1.0) * (E - 0.5 * m * m / rho)
    eps_t = np.minimum(EPS_FLOOR, p_t) / (gamma - 1.0)
    A = 0.5 * dm * dm - dr * dE
    B = alpha * (dr * E + rho * dE - dm * m - eps_t * dr)
    C = alpha * alpha * (rho * E - 0.5 * m * m - eps_t * rho)
    den = np.maximum(0.0, A) + np.abs(B)
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = np.where(den > 0.0, np.minimum(1.0, C / den), 1.0)
    theta = np.where(C > 0.0, theta, 0.0)
    return np.clip(theta, 0.0, 1.0)


def limit_euler_pressure(f_low, dF_star, U_tilde, alpha, gamma):
    """Final limited flux and its theta.

    A roundoff guard drops theta to zero where a limited intermediate state
    still comes out inadmissible.
    """
    theta = pressure_theta(dF_star, U_tilde, alpha, gamma)
    kind = Euler(gamma)
    step = theta[..., None] * dF_star / alpha[..., None]
    ok = kind.admissible_mask(U_tilde + step) & kind.admissible_mask(U_tilde - step)
    theta = np.where(ok, theta, 0.0)
    return f_low + theta[..., None] * dF_star, theta


@dataclass
class AverageLimitResult:
    flux: np.ndarray           # limited flux at interfaces 0..N
    alpha: np.ndarray          # wave-speed bounds at interfaces 0..N
    tilde_ok: np.ndarray       # intermediate state admissible, per interface
    active: np.ndarray         # limiting changed the high-order flux, per interface
    theta: np.ndarray          # effective blending coefficient, per interface
    n_alpha_enlarged: int = 0


def limit_average_fluxes(kind, A, f_high, mode: str) -> AverageLimitResult:
    """Limit interface fluxes given averages ``A`` extended by two ghost cells.

    ``f_high`` holds F(U_{j}) at the N + 1 interfaces; ``mode`` is ``"global"``
    or ``"local"`` (scalar laws) or any non-off value for the Euler equations.
    """
    UL, UR = A[:-1], A[1:]
    FA, SA = kind.flux_and_speed(A)
    FL, FR = FA[:-1], FA[1:]
    alpha_all, Ut_all, n_enl, ok_all = _safe_alpha(kind, UL, UR, FL, FR, np.maximum(SA[:-1], SA[1:]))
    inner = slice(1, A.shape[0] - 2)
    alpha = alpha_all[inner]
    Ut = Ut_all[inner]
    f_low = low_order_flux(kind, UL[inner], UR[inner], alpha, FL[inner], FR[inner])
    tilde_ok = ok_all[inner]

    if kind.is_scalar:
        u_t = Ut[..., 0]
        if mode == "local":
            cells = A[1:-1, 0]
            umin = np.minimum(cells, np.minimum(Ut_all[:-1, 0], Ut_all[1:, 0]))
            umax = np.maximum(cells, np.maximum(Ut_all[:-1, 0], Ut_all[1:, 0]))
            f_lim = limit_scalar(f_low[:, 0], f_high[:, 0], u_t, alpha,
                                 umin[:-1], umax[:-1], umin[1:], umax[1:])
        else:
            lo, hi = kind.bounds
            f_lim = limit_scalar(f_low[:, 0], f_high[:, 0], u_t, alpha, lo, hi)
        f_lim = f_lim[:, None]
        df = f_high - f_low
        with np.errstate(divide="ignore", invalid="ignore"):
            theta = np.where(df[:, 0] != 0.0, (f_lim - f_low)[:, 0] / df[:, 0], 1.0)
        active = f_lim[:, 0] != f_high[:, 0]
        return AverageLimitResult(f_lim, alpha, tilde_ok, active, theta, n_enl)

    dF_star = limit_euler_density(f_low, f_high, Ut, alpha)
    f_lim, theta_p = limit_euler_pressure(f_low, dF_star, Ut, alpha, kind.gamma)
    dF = f_high - f_low
    keep = (theta_p == 1.0) & (dF_star[:, 0] == dF[:, 0])
    f_lim = np.where(keep[:, None], f_high, f_lim)
    active = ~keep
    with np.errstate(divide="ignore", invalid="ignore"):
        theta_rho = np.where(dF[:, 0] != 0.0, dF_star[:, 0] / dF[:, 0], 1.0)
    return AverageLimitResult(f_lim, alpha, tilde_ok, active, np.minimum(theta_rho, 1.0) * theta_p, n_enl)
