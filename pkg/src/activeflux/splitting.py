"""Point-value right-hand sides: Jacobian splitting and flux vector splittings.

A point value at interface i+1/2 sees a five-entry window

    PL = U_{i-1/2},  AL = mean U_i,  PC = U_{i+1/2},  AR = mean U_{i+1},  PR = U_{i+3/2}

and each function below is vectorised over a leading axis of interfaces.
"""
from __future__ import annotations

import enum

import numpy as np

from . import reconstruction as rec
from .equations import Euler, split_jacobian


class SplittingKind(str, enum.Enum):
    JS = "js"
    LLF = "llf"
    SW = "sw"
    VH = "vh"


def split_llf(kind, U, alpha):
    """Rusanov splitting F+- = (F(U) +- alpha U) / 2."""
    U = np.asarray(U, dtype=float)
    F = kind.flux(U)
    aU = np.asarray(alpha, dtype=float)[..., None] * U
    return 0.5 * (F + aU), 0.5 * (F - aU)


def split_sw(kind, U):
    """Steger-Warming splitting F+- = (F(U) +- |J| U) / 2.

    For the Euler equations the closed form is used; for scalar laws |J| is
    just |f'(u)|.
    """
    U = np.asarray(U, dtype=float)
    if not isinstance(kind, Euler):
        F = kind.flux(U)
        aU = np.abs(kind.eigenvalues(U)) * U
        return 0.5 * (F + aU), 0.5 * (F - aU)

    g = kind.gamma
    rho, v, p = kind._checked_primitive(U)
    a = np.sqrt(g * p / rho)
    lam = (v, v + a, v - a)
    out = []
    for part in (lambda x: np.maximum(x, 0.0), lambda x: np.minimum(x, 0.0)):
        l1, l2, l3 = (part(q) for q in lam)
        alpha = 2.0 * (g - 1.0) * l1 + l2 + l3
        c = rho / (2.0 * g)
        out.append(np.stack([
            c * alpha,
            c * (alpha * v + a * (l2 - l3)),
            c * (0.5 * alpha * v * v + a * v * (l2 - l3) + a * a / (g - 1.0) * (l2 + l3)),
        ], axis=-1))
    return out[0], out[1]


def split_vh(kind, U):
    """Van Leer-Haenel Mach-number splitting; fully upwind once |M| >= 1."""
    if not isinstance(kind, Euler):
        raise ValueError("the van Leer-Haenel splitting is defined for the Euler equations only")
    U = np.asarray(U, dtype=float)
    g = kind.gamma
    rho, v, p = kind._checked_primitive(U)
    a = np.sqrt(g * p / rho)
    M = v / a
    H = (U[..., 2] + p) / rho
    parts = []
    for s in (1.0, -1.0):
        mass = s * 0.25 * rho * a * (M + s) ** 2
        ps = 0.5 * (1.0 + s * g * M) * p
        parts.append(np.stack([mass, mass * v + ps, mass * H], axis=-1))
    Fp, Fm = parts
    F = kind.flux(U)
    sup = (M >= 1.0)[..., None]
    sub = (M <= -1.0)[..., None]
    Fp = np.where(sup, F, np.where(sub, 0.0, Fp))
    Fm = np.where(sup, 0.0, np.where(sub, F, Fm))
    return Fp, Fm


def split_flux(kind, splitting, U, alpha=None):
    splitting = SplittingKind(splitting)
    if splitting is SplittingKind.LLF:
        return split_llf(kind, U, alpha)
    if splitting is SplittingKind.SW:
        return split_sw(kind, U)
    if splitting is SplittingKind.VH:
        return split_vh(kind, U)
    raise ValueError("the Jacobian splitting has no split flux")


def llf_alpha_stencil(kind, *states):
    """Largest characteristic speed over the given states (one value per interface)."""
    return np.max(np.stack([kind.max_speed(s) for s in states], axis=0), axis=0)


def point_rhs_js(kind, PL, AL, PC, AR, PR, dx, power_law=False):
    """-(J+ D+ + J- D-) evaluated at the interface states PC."""
    if power_law:
        _, Dp = rec.power_law_derivs(PL, AL, PC, dx)
        Dm, _ = rec.power_law_derivs(PC, AR, PR, dx)
    else:
        Dp = rec.deriv_plus_average(PL, AL, PC, dx)
        Dm = rec.deriv_minus_average(PC, AR, PR, dx)
    Jp, Jm = split_jacobian(kind, PC)
    return -(np.einsum("...ij,...j->...i", Jp, Dp) + np.einsum("...ij,...j->...i", Jm, Dm))


def cell_centers(PL, AL, PC, AR, PR):
    """Simpson cell-center values of the cells left and right of the interface."""
    return rec.cell_center_from_simpson(PL, AL, PC), rec.cell_center_from_simpson(PC, AR, PR)


def point_rhs_fvs(kind, splitting, PL, CL, PC, CR, PR, dx, power_law=False):
    """-(D~+ F+ + D~- F-) at the interface from point and cell-center states.

    ``CL`` and ``CR`` are the (already admissible) cell-center values of the
    two neighbouring cells.  For the Rusanov splitting one alpha per interface
    is taken over all five states and reused at every location.
    """
    splitting = SplittingKind(splitting)
    alpha = None
    if splitting is SplittingKind.LLF:
        alpha = llf_alpha_stencil(kind, PL, CL, PC, CR, PR)
    n = PC.shape[0]
    # one batched splitting call over the five locations
    stacked = np.concatenate([PL, CL, PC, CR, PR], axis=0)
    a5 = None if alpha is None else np.tile(alpha, 5)
    Fp, Fm = split_flux(kind, splitting, stacked, a5)
    fpL, fpCL, fpC = Fp[:n], Fp[n:2 * n], Fp[2 * n:3 * n]
    fmC, fmCR, fmR = Fm[2 * n:3 * n], Fm[3 * n:4 * n], Fm[4 * n:]
    if power_law:
        _, Dp = rec.power_law_derivs(*rec.flux_triple_for_power_law(fpL, fpCL, fpC), dx)
        Dm, _ = rec.power_law_derivs(*rec.flux_triple_for_power_law(fmC, fmCR, fmR), dx)
    else:
        Dp = rec.flux_deriv_plus(fpL, fpCL, fpC, dx)
        Dm = rec.flux_deriv_minus(fmC, fmCR, fmR, dx)
    return -(Dp + Dm)


def point_rhs(kind, splitting, PL, AL, PC, AR, PR, dx, power_law=False, repair=None):
    """Dispatch to the Jacobian or flux-vector-splitting point update.

    ``repair(center, average)`` is applied to the Simpson cell-center values
    before they enter a flux vector splitting.
    """
    splitting = SplittingKind(splitting)
    if splitting is SplittingKind.JS:
        return point_rhs_js(kind, PL, AL, PC, AR, PR, dx, power_law)
    CL, CR = cell_centers(PL, AL, PC, AR, PR)
    if repair is not None:
        CL = repair(CL, AL)
        CR = repair(CR, AR)
    return point_rhs_fvs(kind, splitting, PL, CL, PC, CR, PR, dx, power_law)


def point_rhs_extended(kind, splitting, Pe, Ae, dx, power_law=False, repair=None):
    """Point right-hand sides at every interface from halo-2 extended arrays.

    Same result as :func:`point_rhs` on the five-entry windows, but each
    cell-center value, flux and wave speed is evaluated once per location
    instead of once per window entry.
    """
    splitting = SplittingKind(splitting)
    n1 = Pe.shape[0] - 4
    PL, PC, PR = Pe[1:n1 + 1], Pe[2:n1 + 2], Pe[3:n1 + 3]
    if splitting is SplittingKind.JS:
        return point_rhs_js(kind, PL, Ae[1:n1 + 1], PC, Ae[2:n1 + 2], PR, dx, power_law)
    C = rec.cell_center_from_simpson(Pe[1:n1 + 2], Ae[1:n1 + 2], Pe[2:n1 + 3])
    if repair is not None:
        C = repair(C, Ae[1:n1 + 2])
    pts = Pe[1:n1 + 3]
    if splitting is SplittingKind.LLF:
        Fp_all, sp = kind.flux_and_speed(pts)
        Fc, sc = kind.flux_and_speed(C)
        alpha = np.maximum.reduce([sp[:-2], sc[:-1], sp[1:-1], sc[1:], sp[2:]])[:, None]
        fpL = 0.5 * (Fp_all[:-2] + alpha * PL)
        fpCL = 0.5 * (Fc[:-1] + alpha * C[:-1])
        fpC = 0.5 * (Fp_all[1:-1] + alpha * PC)
        fmC = 0.5 * (Fp_all[1:-1] - alpha * PC)
        fmCR = 0.5 * (Fc[1:] - alpha * C[1:])
        fmR = 0.5 * (Fp_all[2:] - alpha * PR)
    else:
        Fp_pts, Fm_pts = split_flux(kind, splitting, pts)
        Fp_c, Fm_c = split_flux(kind, splitting, C)
        fpL, fpCL, fpC = Fp_pts[:-2], Fp_c[:-1], Fp_pts[1:-1]
        fmC, fmCR, fmR = Fm_pts[1:-1], Fm_c[1:], Fm_pts[2:]
    if power_law:
        _, Dp = rec.power_law_derivs(*rec.flux_triple_for_power_law(fpL, fpCL, fpC), dx)
        Dm, _ = rec.power_law_derivs(*rec.flux_triple_for_power_law(fmC, fmCR, fmR), dx)
    else:
        Dp = rec.flux_deriv_plus(fpL, fpCL, fpC, dx)
        Dm = rec.flux_deriv_minus(fmC, fmCR, fmR, dx)
    return -(Dp + Dm)
