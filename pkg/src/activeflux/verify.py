"""Randomized property suites for the building blocks of the scheme.

Every suite draws its cases from a seeded generator, so a report is
reproducible given ``seed``.  Each returns a :class:`SuiteResult` whose
``worst`` field is the largest violation relative to the tolerance (a
value at most 1 passes).
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import bp_average, bp_point
from . import reconstruction as rec
from .equations import Burgers, Euler, LinearAdvection
from .integrator import StepController, advance, ssprk3_step
from .mesh import BoundaryKind, Grid1D, init_state, scalar_bounds, total_mass
from .scheme import ActiveFluxSolver, LimiterConfig
from .splitting import split_llf, split_sw, split_vh

DEFAULT_SEED = 20240601
DEFAULT_CASES = 10_000


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: int
    worst: float
    seconds: float = 0.0
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.cases > 0

    def as_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


class _Tally:
    """Accumulates named checks of the form ``violation / tolerance <= 1``."""

    def __init__(self):
        self.checks = {}

    def add(self, name, ratio):
        ratio = np.atleast_1d(np.asarray(ratio, dtype=float))
        ratio = np.where(np.isnan(ratio), np.inf, ratio)
        bad = int(np.count_nonzero(ratio > 1.0))
        worst = float(ratio.max()) if ratio.size else 0.0
        old = self.checks.get(name, {"cases": 0, "failures": 0, "worst": 0.0})
        self.checks[name] = {
            "cases": old["cases"] + ratio.size,
            "failures": old["failures"] + bad,
            "worst": max(old["worst"], worst),
        }

    def flag(self, name, ok):
        self.add(name, np.where(np.asarray(ok, dtype=bool), 0.0, np.inf))

    def result(self, name, cases):
        failures = sum(c["failures"] for c in self.checks.values())
        worst = max((c["worst"] for c in self.checks.values()), default=0.0)
        return SuiteResult(name, cases, failures, worst, checks=self.checks)


def random_euler_states(rng, n, gamma=1.4, mach=3.0, spread=3.0):
    """Admissible states with log-uniform density and pressure and |M| <= mach."""
    kind = Euler(gamma)
    rho = np.exp(rng.uniform(-spread, spread, n))
    p = np.exp(rng.uniform(-spread, spread, n))
    a = np.sqrt(gamma * p / rho)
    v = rng.uniform(-mach, mach, n) * a
    return kind.conserved(rho, v, p)


def _fd_jacobian(fun, U, rel=1e-6):
    """Central finite-difference Jacobian, batched over the leading axis."""
    J = np.empty(U.shape + (U.shape[-1],))
    for j in range(U.shape[-1]):
        h = rel * np.maximum(np.abs(U[:, j]), 1e-3)
        Up, Um = U.copy(), U.copy()
        Up[:, j] += h
        Um[:, j] -= h
        J[:, :, j] = (fun(Up) - fun(Um)) / (2.0 * h[:, None])
    return J


# -- suites ------------------------------------------------------------------

def suite_splitting_signs(rng, cases=DEFAULT_CASES):
    """F+ + F- = F and sign-definite split Jacobians for LLF, SW and VH."""
    kind = Euler(1.4)
    t = _Tally()
    U = random_euler_states(rng, cases)
    _, v, p = kind.primitive(U)
    scale = kind.max_speed(U)
    F = kind.flux(U)
    # a stencil alpha is at least the local spectral radius
    alpha = scale * rng.uniform(1.0, 2.0, cases)
    splits = {
        "llf": lambda W: split_llf(kind, W, alpha),
        "sw": lambda W: split_sw(kind, W),
        "vh": lambda W: split_vh(kind, W),
    }
    for name, split in splits.items():
        Fp, Fm = split(U)
        mag = np.max(np.abs(Fp) + np.abs(Fm), axis=-1)
        err = np.max(np.abs(Fp + Fm - F), axis=-1)
        t.add(f"{name}: consistency", err / (1e-13 * mag))
        lam_p = np.linalg.eigvals(_fd_jacobian(lambda W: split(W)[0], U)).real
        lam_m = np.linalg.eigvals(_fd_jacobian(lambda W: split(W)[1], U)).real
        t.add(f"{name}: J+ eigenvalues >= 0", np.max(-lam_p, axis=-1) / (1e-8 * scale))
        t.add(f"{name}: J- eigenvalues <= 0", np.max(lam_m, axis=-1) / (1e-8 * scale))
    return t.result("splitting-signs", cases)


def suite_limiter_convexity(rng, cases=DEFAULT_CASES):
    """Blending coefficients lie in [0, 1] and limited values are their convex combinations."""
    t = _Tally()
    eps = np.finfo(float).eps

    # scalar point blend against global bounds [0, 1]
    u_low = rng.uniform(0.0, 1.0, cases)
    u_high = rng.uniform(-0.5, 1.5, cases)
    u_lim, theta = bp_point.blend_scalar_point(u_high, u_low, 0.0, 1.0)
    t.flag("scalar point: theta in [0,1]", (theta >= 0.0) & (theta <= 1.0))
    t.add("scalar point: convex combination",
          np.abs(u_lim - (theta * u_high + (1.0 - theta) * u_low)) / (8.0 * eps))
    t.flag("scalar point: bounds", (u_lim >= 0.0) & (u_lim <= 1.0))

    # Euler point blend: density first, then pressure
    gamma = 1.4
    kind = Euler(gamma)
    U_low = random_euler_states(rng, cases, gamma)
    U_high = U_low + rng.normal(0.0, 1.0, U_low.shape) * np.abs(U_low) * rng.uniform(0.0, 3.0, (cases, 1))
    U_lim, t1, t2 = bp_point.blend_euler_point(U_high, U_low, gamma)
    t.flag("euler point: theta* in [0,1]", (t1 >= 0.0) & (t1 <= 1.0))
    t.flag("euler point: theta** in [0,1]", (t2 >= 0.0) & (t2 <= 1.0))
    U_star = U_high.copy()
    U_star[:, 0] = t1 * U_high[:, 0] + (1.0 - t1) * U_low[:, 0]
    expect = t2[:, None] * U_star + (1.0 - t2[:, None]) * U_low
    mag = np.abs(U_high) + np.abs(U_low)
    t.add("euler point: convex combination", np.max(np.abs(U_lim - expect) / (16.0 * eps * mag), axis=-1))
    t.flag("euler point: admissible", kind.admissible_mask(U_lim))

    # scalar average flux: the anti-diffusive flux is only ever scaled down
    f_low = rng.normal(size=cases)
    f_high = f_low + rng.normal(size=cases)
    alpha = rng.uniform(0.1, 2.0, cases)
    u_t = rng.uniform(0.0, 1.0, cases)
    f_lim = bp_average.limit_scalar(f_low, f_high, u_t, alpha, 0.0, 1.0)
    df, dl = f_high - f_low, f_lim - f_low
    with np.errstate(divide="ignore", invalid="ignore"):
        th = np.where(df != 0.0, dl / df, 1.0)
    t.flag("scalar average: theta in [0,1]", (th >= -eps) & (th <= 1.0 + eps))
    for s in (1.0, -1.0):
        u_new = u_t + s * dl / alpha
        # dl = f_lim - f_low carries the rounding of the flux values themselves
        tol = 4.0 * eps * (1.0 + (np.abs(f_low) + np.abs(f_high)) / alpha)
        t.flag("scalar average: limited states in bounds", (u_new >= -tol) & (u_new <= 1.0 + tol))

    # Euler average flux: density clipping then pressure scaling
    UL = random_euler_states(rng, cases, gamma)
    UR = random_euler_states(rng, cases, gamma)
    alpha, Ut, _ = bp_average.safe_alpha(kind, UL, UR)
    F_low = bp_average.low_order_flux(kind, UL, UR, alpha)
    F_high = kind.flux(random_euler_states(rng, cases, gamma))
    dF = F_high - F_low
    dF_star = bp_average.limit_euler_density(F_low, F_high, Ut, alpha)
    with np.errstate(divide="ignore", invalid="ignore"):
        th1 = np.where(dF[:, 0] != 0.0, dF_star[:, 0] / dF[:, 0], 1.0)
    t.flag("euler average: theta* in [0,1]", (th1 >= 0.0) & (th1 <= 1.0))
    t.flag("euler average: other rows untouched", np.all(dF_star[:, 1:] == dF[:, 1:], axis=-1))
    F_lim, th2 = bp_average.limit_euler_pressure(F_low, dF_star, Ut, alpha, gamma)
    t.flag("euler average: theta** in [0,1]", (th2 >= 0.0) & (th2 <= 1.0))
    t.add("euler average: convex combination",
          np.max(np.abs(F_lim - (F_low + th2[:, None] * dF_star)) / (8.0 * eps * (np.abs(F_low) + np.abs(dF_star) + 1e-300)), axis=-1))
    step = (F_lim - F_low) / alpha[:, None]
    t.flag("euler average: limited states admissible",
           kind.admissible_mask(Ut + step) & kind.admissible_mask(Ut - step))
    return t.result("limiter-convexity", cases)


def suite_intermediate_states(rng, cases=DEFAULT_CASES):
    """Intermediate states and first-order updates stay admissible at the dt bounds."""
    t = _Tally()
    gamma = 1.4
    kind = Euler(gamma)
    n = cases
    UL = random_euler_states(rng, n, gamma)
    UR = random_euler_states(rng, n, gamma)
    alpha, Ut, n_enl = bp_average.safe_alpha(kind, UL, UR)
    t.flag("euler: intermediate state admissible", kind.admissible_mask(Ut))
    t.add("euler: alpha enlargements", np.array([n_enl / n / 1e-2]))

    # limited average update of every cell at its own bound dx / (a_l + a_r)
    A = random_euler_states(rng, n + 4, gamma)
    F_high = kind.flux(random_euler_states(rng, n + 1, gamma))
    res = bp_average.limit_average_fluxes(kind, A, F_high, "global")
    dt = 1.0 / (res.alpha[:-1] + res.alpha[1:])
    A_new = A[2:-2] - dt[:, None] * (res.flux[1:] - res.flux[:-1])
    t.flag("euler: limited average update admissible", kind.admissible_mask(A_new))

    # first-order point update at (dx_l + dx_r) / (4 max alpha)
    Pm, Pc, Pp = (random_euler_states(rng, n, gamma) for _ in range(3))
    dxl, dxr = rng.uniform(0.5, 1.5, n), rng.uniform(0.5, 1.5, n)
    a_l = np.maximum(kind.max_speed(Pm), kind.max_speed(Pc))
    a_r = np.maximum(kind.max_speed(Pc), kind.max_speed(Pp))
    dt = bp_point.point_dt_limit(dxl, dxr, a_l, a_r)
    P_low, _, _ = bp_point.llf_point_update(kind, Pm, Pc, Pp, dxl, dxr, dt)
    t.flag("euler: first-order point update admissible", kind.admissible_mask(P_low))

    # scalar maximum principle for Burgers, global and local bounds
    burgers = Burgers(bounds=(-1.0, 1.0))
    A = rng.uniform(-1.0, 1.0, (n + 4, 1))
    f_high = burgers.flux(rng.uniform(-1.0, 1.0, (n + 1, 1)))
    ut = bp_average.intermediate_states(burgers, A[:-1], A[1:], bp_average.alpha_bound(burgers, A[:-1], A[1:]))[:, 0]
    cell = A[2:-2, 0]
    local = (np.minimum(cell, np.minimum(ut[1:-2], ut[2:-1])), np.maximum(cell, np.maximum(ut[1:-2], ut[2:-1])))
    for mode, (lo, hi) in (("global", (-1.0, 1.0)), ("local", local)):
        res = bp_average.limit_average_fluxes(burgers, A, f_high, mode)
        dt = 1.0 / np.maximum(res.alpha[:-1] + res.alpha[1:], 1e-300)
        u_new = cell - dt * (res.flux[1:, 0] - res.flux[:-1, 0])
        tol = 4.0 * np.finfo(float).eps
        t.flag(f"burgers {mode}: limited average update in bounds", (u_new >= lo - tol) & (u_new <= hi + tol))
    return t.result("intermediate-states", cases)


def _conservation_runs():
    adv = LinearAdvection(1.0)
    burgers = Burgers()
    euler = Euler(1.4)
    rng = np.random.default_rng(7)
    jumps = rng.uniform(0.0, 1.0, 16)

    def rough(x):
        return jumps[np.minimum((x * 16).astype(int), 15)][..., None]

    def smooth(x):
        return (0.5 + 0.4 * np.sin(2.0 * np.pi * x))[..., None]

    def wave(x):
        return euler.conserved(1.0 + 0.5 * np.sin(2.0 * np.pi * x), 1.0, 1.0)

    modes = ("off", "global", "local")
    for kind, init, splitting in ((adv, rough, "llf"), (burgers, smooth, "llf")):
        for avg in modes:
            for pt in modes:
                for plr in (False, True):
                    yield kind, init, splitting, LimiterConfig(avg, pt, plr)
    for splitting in ("js", "llf", "sw", "vh"):
        for avg in ("off", "global"):
            for pt in ("off", "global"):
                yield euler, wave, splitting, LimiterConfig(avg, pt, False)


def suite_conservation(rng, cases=DEFAULT_CASES, n_cells=16):
    """Periodic total mass changes by at most 1e-12 (1 + |mass|) per step."""
    t = _Tally()
    runs = list(_conservation_runs())
    steps_each = -(-cases // len(runs))
    grid = Grid1D(0.0, 1.0, n_cells)
    total = 0
    for kind, init, splitting, lim in runs:
        state = init_state(grid, BoundaryKind.PERIODIC, init)
        if kind.is_scalar:
            kind = kind.with_bounds(*scalar_bounds(state))
        solver = ActiveFluxSolver(kind, grid, BoundaryKind.PERIODIC, splitting, lim)
        cfl = 0.1
        masses = [total_mass(state, grid)]
        # wave speeds drift, so keep advancing until enough steps are recorded
        while len(masses) <= steps_each:
            speed = max(solver.speed_over_dx(state), 1e-12)
            remaining = steps_each + 1 - len(masses)
            controller = StepController(cfl, t_final=state.time + remaining * cfl / speed)
            state = advance(state, solver, controller,
                            on_step=lambda s, dt: masses.append(total_mass(s, grid)))
        m = np.array(masses)
        drift = np.max(np.abs(np.diff(m, axis=0)) / (1.0 + np.abs(m[:-1])), axis=-1)
        label = f"{type(kind).__name__} {splitting} {lim.bp_average}/{lim.bp_point}"
        t.add(label + (" plr" if lim.power_law else ""), drift / 1e-12)
        total += drift.size
    return t.result("conservation", total)


def suite_rk3_stability(rng, cases=DEFAULT_CASES):
    """SSP-RK3 on u' = lambda u reproduces 1 + z + z^2/2 + z^3/6."""
    t = _Tally()
    r = 3.0 * np.sqrt(rng.uniform(0.0, 1.0, cases))
    z = r * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, cases))
    u = ssprk3_step(np.ones(cases, dtype=complex), 1.0, lambda w, dt: w + dt * z * w)
    R = 1.0 + z + z**2 / 2.0 + z**3 / 6.0
    t.add("stability polynomial", np.abs(u - R) / (1e-14 * np.maximum(1.0, np.abs(R))))
    return t.result("rk3-stability", cases)


def _graded_average(left, avg, right, n_gauss=10, levels=40):
    """Cell average of the power-law profile by quadrature graded toward both ends."""
    g = np.geomspace(1e-14, 0.5, levels)
    breaks = np.unique(np.concatenate([[0.0], g, 1.0 - g[::-1], [1.0]]))
    x, w = np.polynomial.legendre.leggauss(n_gauss)
    a, b = breaks[:-1, None], breaks[1:, None]
    xi = (0.5 * (a + b) + 0.5 * (b - a) * x).ravel()
    wt = (0.5 * (b - a) * w).ravel()
    vals = rec.power_law_eval(left[:, None], avg[:, None], right[:, None], xi[None, :])
    return vals @ wt


def suite_power_law(rng, cases=DEFAULT_CASES):
    """Endpoint and average reproduction plus monotonicity wherever the power law fires."""
    t = _Tally()
    n = 2 * cases
    left = rng.normal(0.0, 10.0, n)
    jump = rng.choice([-1.0, 1.0], n) * np.exp(rng.uniform(-5.0, 5.0, n))
    right = left + jump
    # ratios spread over the branch window and beyond it
    r = np.exp(rng.uniform(np.log(1.0 / 80.0), np.log(80.0), n))
    avg = left + jump / (1.0 + r)
    _, hi, lo = rec.power_law_branch(left, avg, right)
    fired = hi | lo
    left, avg, right = left[fired], avg[fired], right[fired]
    m = left.size
    scale = np.maximum(np.abs(left), np.abs(right))
    t.add("left endpoint", np.abs(rec.power_law_eval(left, avg, right, 0.0) - left) / (1e-10 * scale))
    t.add("right endpoint", np.abs(rec.power_law_eval(left, avg, right, 1.0) - right) / (1e-10 * scale))
    t.add("cell average", np.abs(_graded_average(left, avg, right) - avg) / (1e-10 * scale))
    xi = np.linspace(0.0, 1.0, 201)
    vals = rec.power_law_eval(left[:, None], avg[:, None], right[:, None], xi[None, :])
    steps = np.diff(vals, axis=1) * np.sign(right - left)[:, None]
    t.add("monotone samples", np.max(-steps, axis=1) / (1e-13 * scale))
    return t.result("power-law", m)


SUITES = {
    "splitting-signs": suite_splitting_signs,
    "limiter-convexity": suite_limiter_convexity,
    "intermediate-states": suite_intermediate_states,
    "conservation": suite_conservation,
    "rk3-stability": suite_rk3_stability,
    "power-law": suite_power_law,
}


def run_suites(names=None, seed=DEFAULT_SEED, cases=DEFAULT_CASES):
    """Run the named suites (all by default); each gets its own seeded stream."""
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    results = []
    for i, name in enumerate(names):
        rng = np.random.default_rng([seed, i])
        start = time.perf_counter()
        res = SUITES[name](rng, cases)
        res.seconds = time.perf_counter() - start
        results.append(res)
    return results
