"""Exact solution of the Riemann problem for the Euler equations with ideal gas."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StarState:
    p: float
    v: float
    vacuum: bool = False


def _wave(p, rho, pk, ak, g):
    """Pressure function f_K(p) and its derivative for one side."""
    if p > pk:
        A = 2.0 / ((g + 1.0) * rho)
        B = (g - 1.0) / (g + 1.0) * pk
        q = np.sqrt(A / (p + B))
        return (p - pk) * q, q * (1.0 - 0.5 * (p - pk) / (p + B))
    ratio = p / pk
    f = 2.0 * ak / (g - 1.0) * (ratio ** ((g - 1.0) / (2.0 * g)) - 1.0)
    if p <= 0.0:
        return f, np.inf
    df = 1.0 / (rho * ak) * ratio ** (-(g + 1.0) / (2.0 * g))
    return f, df


def star_state(left, right, gamma, tol=1e-12, max_iter=200) -> StarState:
    """Star-region pressure and velocity from primitive states (rho, v, p).

    Safeguarded Newton iteration on the pressure function: Newton steps that
    leave the current bracket are replaced by bisection.  When the data
    generate a vacuum the returned state is flagged and p = 0.
    """
    g = gamma
    rl, vl, pl = left
    rr, vr, pr = right
    al, ar = np.sqrt(g * pl / rl), np.sqrt(g * pr / rr)
    dv = vr - vl
    if 2.0 * (al + ar) / (g - 1.0) <= dv:
        return StarState(0.0, np.nan, vacuum=True)

    def fun(p):
        fl, dfl = _wave(p, rl, pl, al, g)
        fr, dfr = _wave(p, rr, pr, ar, g)
        return fl + fr + dv, dfl + dfr

    lo, hi = 0.0, max(pl, pr)
    while fun(hi)[0] < 0.0:
        lo, hi = hi, 2.0 * hi
    # two-rarefaction guess, exact when both waves are rarefactions
    z = (g - 1.0) / (2.0 * g)
    p = ((al + ar - 0.5 * (g - 1.0) * dv) / (al / pl ** z + ar / pr ** z)) ** (1.0 / z)
    p = min(max(p, lo), hi)
    if not p > 0.0:
        p = 0.5 * (lo + hi)
    for _ in range(max_iter):
        f, df = fun(p)
        if f < 0.0:
            lo = p
        else:
            hi = p
        p_new = p - f / df
        if not lo < p_new < hi:
            p_new = 0.5 * (lo + hi)
        if abs(p_new - p) <= tol * 0.5 * (p_new + p) or hi - lo <= tol * hi:
            p = p_new
            break
        p = p_new
    else:
        raise RuntimeError("star pressure iteration did not converge")
    fl, _ = _wave(p, rl, pl, al, g)
    fr, _ = _wave(p, rr, pr, ar, g)
    return StarState(p, 0.5 * (vl + vr) + 0.5 * (fr - fl))


def sample(left, right, gamma, xi):
    """Primitive solution (rho, v, p) at self-similar coordinates xi = x/t."""
    g = gamma
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    rl, vl, pl = left
    rr, vr, pr = right
    al, ar = np.sqrt(g * pl / rl), np.sqrt(g * pr / rr)
    star = star_state(left, right, gamma)
    rho = np.empty_like(xi)
    v = np.empty_like(xi)
    p = np.empty_like(xi)
    gm, gp = g - 1.0, g + 1.0

    def left_fan(m):
        c = 2.0 / gp + gm / (gp * al) * (vl - xi[m])
        rho[m] = rl * c ** (2.0 / gm)
        v[m] = 2.0 / gp * (al + 0.5 * gm * vl + xi[m])
        p[m] = pl * c ** (2.0 * g / gm)

    def right_fan(m):
        c = 2.0 / gp - gm / (gp * ar) * (vr - xi[m])
        rho[m] = rr * c ** (2.0 / gm)
        v[m] = 2.0 / gp * (-ar + 0.5 * gm * vr + xi[m])
        p[m] = pr * c ** (2.0 * g / gm)

    def fill(m, state):
        rho[m], v[m], p[m] = state

    if star.vacuum:
        head_l, tail_l = vl - al, vl + 2.0 * al / gm
        head_r, tail_r = vr + ar, vr - 2.0 * ar / gm
        fill(xi <= head_l, left)
        m = (xi > head_l) & (xi < tail_l)
        left_fan(m)
        m = (xi >= tail_l) & (xi <= tail_r)
        fill(m, (0.0, 0.5 * (tail_l + tail_r), 0.0))
        m = (xi > tail_r) & (xi < head_r)
        right_fan(m)
        fill(xi >= head_r, right)
        return rho, v, p

    ps, vs = star.p, star.v
    on_left = xi <= vs
    # left wave
    if ps > pl:
        rs = rl * ((ps / pl + gm / gp) / (gm / gp * ps / pl + 1.0))
        s = vl - al * np.sqrt(gp / (2.0 * g) * ps / pl + gm / (2.0 * g))
        fill(on_left & (xi <= s), left)
        fill(on_left & (xi > s), (rs, vs, ps))
    else:
        rs = rl * (ps / pl) ** (1.0 / g)
        head, tail = vl - al, vs - np.sqrt(g * ps / rs)
        fill(on_left & (xi <= head), left)
        left_fan(on_left & (xi > head) & (xi < tail))
        fill(on_left & (xi >= tail), (rs, vs, ps))
    on_right = ~on_left
    if ps > pr:
        rs = rr * ((ps / pr + gm / gp) / (gm / gp * ps / pr + 1.0))
        s = vr + ar * np.sqrt(gp / (2.0 * g) * ps / pr + gm / (2.0 * g))
        fill(on_right & (xi >= s), right)
        fill(on_right & (xi < s), (rs, vs, ps))
    else:
        rs = rr * (ps / pr) ** (1.0 / g)
        head, tail = vr + ar, vs + np.sqrt(g * ps / rs)
        fill(on_right & (xi >= head), right)
        right_fan(on_right & (xi < head) & (xi > tail))
        fill(on_right & (xi <= tail), (rs, vs, ps))
    return rho, v, p


def exact_riemann(kind, left, right, x_over_t):
    """Conserved solution of the Riemann problem with primitive data left/right."""
    rho, v, p = sample(left, right, kind.gamma, x_over_t)
    return np.stack([rho, rho * v, p / (kind.gamma - 1.0) + 0.5 * rho * v * v], axis=-1)


def shock_speed(left, right, gamma):
    """Speed of the right-moving shock, or None if the right wave is a rarefaction."""
    star = star_state(left, right, gamma)
    rr, vr, pr = right
    if star.vacuum or star.p <= pr:
        return None
    ar = np.sqrt(gamma * pr / rr)
    return vr + ar * np.sqrt((gamma + 1.0) / (2.0 * gamma) * star.p / pr + (gamma - 1.0) / (2.0 * gamma))
