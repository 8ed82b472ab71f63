"""Benchmark problems: initial data, boundary kinds, default CFL numbers and references."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from .equations import Burgers, Euler, LinearAdvection
from .mesh import (AFState, BoundaryKind, Grid1D, cell_averages, check_admissible, extend, init_state,
                   scalar_bounds)
from .riemann import exact_riemann
from .scheme import ActiveFluxSolver, LimiterConfig

SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    kind: object
    x_min: float
    x_max: float
    boundary: BoundaryKind
    t_final: float
    default_cfl: Dict[str, float]
    init_fn: Callable[[np.ndarray], np.ndarray]
    reference: str = "none"            # exact_fn | riemann_exact | fine_mesh_self | none
    exact_fn: Optional[Callable] = None  # (x, t) -> conserved values
    default_n: int = 400
    bp_default: bool = False
    adjust: Optional[Callable] = None    # (state, grid) -> state, e.g. point sources
    description: str = ""
    fine_n: int = 0
    fine_splitting: str = "llf"
    riemann_data: Optional[tuple] = None  # (left, right, x0) primitive states

    def __post_init__(self):
        if not self.t_final > 0.0:
            raise ValueError("t_final must be positive")

    def cfl(self, splitting) -> float:
        key = getattr(splitting, "value", splitting)
        return self.default_cfl.get(key, self.default_cfl.get("default"))

    def grid(self, n_cells: Optional[int] = None) -> Grid1D:
        return Grid1D(self.x_min, self.x_max, n_cells or self.default_n)

    def initial_state(self, grid: Grid1D) -> AFState:
        state = init_state(grid, self.boundary, self.init_fn)
        if self.adjust is not None:
            state = self.adjust(state, grid)
        check_admissible(self.kind, state.averages, state.points)
        return state

    def setup(self, n_cells: Optional[int] = None):
        """(grid, initial state, kind) with scalar bounds taken from the discrete data."""
        grid = self.grid(n_cells)
        state = self.initial_state(grid)
        kind = self.kind
        if kind.is_scalar:
            kind = kind.with_bounds(*scalar_bounds(state))
        return grid, state, kind


def _scalar(fn):
    return lambda x: np.asarray(fn(np.asarray(x, dtype=float)), dtype=float)[..., None]


def _primitive(kind: Euler, fn):
    def init(x):
        rho, v, p = fn(np.asarray(x, dtype=float))
        x = np.asarray(x, dtype=float)
        return kind.conserved(*(np.broadcast_to(q, x.shape) for q in (rho, v, p)))
    return init


# -- scalar problems ---------------------------------------------------------

def jiang_shu_profile(x):
    a, z, delta, alpha = -0.5, -0.7, 0.005, 10.0
    beta = np.log(2.0) / (36.0 * delta ** 2)

    def G1(x, z):
        return np.exp(-beta * (x - z) ** 2)

    def G2(x, a):
        return np.sqrt(np.maximum(1.0 - alpha ** 2 * (x - a) ** 2, 0.0))

    x = np.asarray(x, dtype=float)
    u = np.zeros_like(x)
    m = (x >= -0.8) & (x <= -0.6)
    u = np.where(m, (G1(x, z - delta) + G1(x, z + delta) + 4.0 * G1(x, z)) / 6.0, u)
    u = np.where((x >= -0.4) & (x <= -0.2), 1.0, u)
    u = np.where((x >= 0.0) & (x <= 0.2), 1.0 - np.abs(10.0 * (x - 0.1)), u)
    m = (x >= 0.4) & (x <= 0.6)
    u = np.where(m, (G2(x, a - delta) + G2(x, a + delta) + 4.0 * G2(x, a)) / 6.0, u)
    return u


def _periodic_shift(profile, speed, x_min, length):
    def exact(x, t):
        y = np.mod(np.asarray(x, dtype=float) - speed * t - x_min, length) + x_min
        return profile(y)[..., None]
    return exact


def advection_profile() -> ProblemSpec:
    return ProblemSpec(
        name="advection", kind=LinearAdvection(1.0), x_min=-1.0, x_max=1.0,
        boundary=BoundaryKind.PERIODIC, t_final=2.0,
        default_cfl={"default": 0.1},
        init_fn=_scalar(jiang_shu_profile), reference="exact_fn",
        exact_fn=_periodic_shift(jiang_shu_profile, 1.0, -1.0, 2.0), default_n=400,
        description="linear advection of a Gaussian, square, triangle and ellipse over one period",
    )


def advection_sine() -> ProblemSpec:
    profile = lambda x: np.sin(np.pi * x)
    return ProblemSpec(
        name="advection_sine", kind=LinearAdvection(1.0), x_min=-1.0, x_max=1.0,
        boundary=BoundaryKind.PERIODIC, t_final=2.0,
        default_cfl={"default": 0.4},
        init_fn=_scalar(profile), reference="exact_fn",
        exact_fn=_periodic_shift(profile, 1.0, -1.0, 2.0), default_n=80,
        description="smooth advection for refinement studies",
    )


def burgers_square() -> ProblemSpec:
    square = lambda x: np.where(np.abs(x) < 0.2, 2.0, -1.0)
    return ProblemSpec(
        name="burgers_square", kind=Burgers(), x_min=-1.0, x_max=1.0,
        boundary=BoundaryKind.PERIODIC, t_final=0.5,
        default_cfl={"default": 0.2},
        init_fn=_scalar(square), reference="fine_mesh_self", default_n=200,
        fine_n=20000,
        description="Burgers square wave with a transonic rarefaction",
    )


# -- Euler problems ----------------------------------------------------------

ACCURACY_ZETA = 1.0 - 1e-7


def _rho0(x, zeta=ACCURACY_ZETA):
    return 1.0 + zeta * np.sin(np.pi * x)


def characteristic_feet(x, t, zeta=ACCURACY_ZETA, tol=1e-13, max_iter=100):
    """Solve x + sqrt3 rho0(x1) t - x1 = 0 and x - sqrt3 rho0(x2) t - x2 = 0.

    Newton's method safeguarded by bisection on the bracket implied by
    rho0 in [1 - zeta, 1 + zeta].  Returns (x1, x2).
    """
    x = np.asarray(x, dtype=float)
    out = []
    for s in (1.0, -1.0):
        c = s * SQRT3 * t
        lo = x + np.minimum(c * (1.0 - zeta), c * (1.0 + zeta))
        hi = x + np.maximum(c * (1.0 - zeta), c * (1.0 + zeta))
        y = x + c * 1.0
        for _ in range(max_iter):
            g = x + c * _rho0(y, zeta) - y
            # g is decreasing in y while |c| zeta pi < 1
            lo = np.where(g > 0.0, y, lo)
            hi = np.where(g < 0.0, y, hi)
            dg = c * zeta * np.pi * np.cos(np.pi * y) - 1.0
            y_new = y - g / dg
            y_new = np.where((y_new > lo) & (y_new < hi), y_new, 0.5 * (lo + hi))
            done = np.abs(g) <= tol
            y = np.where(done, y, y_new)
            if np.all(done):
                break
        else:
            raise RuntimeError("characteristic root finding did not converge")
        out.append(y)
    return out[0], out[1]


def euler_accuracy_exact(x, t, gamma=3.0, zeta=ACCURACY_ZETA):
    x = np.asarray(x, dtype=float)
    if t == 0.0:
        rho = _rho0(x, zeta)
        v = np.zeros_like(x)
    else:
        x1, x2 = characteristic_feet(x, t, zeta)
        r1 = _rho0(x1, zeta)
        rho = 0.5 * (r1 + _rho0(x2, zeta))
        v = SQRT3 * (rho - r1)
    return Euler(gamma).conserved(rho, v, rho ** gamma)


def euler_accuracy() -> ProblemSpec:
    kind = Euler(3.0)
    return ProblemSpec(
        name="euler_accuracy", kind=kind, x_min=-1.0, x_max=1.0,
        boundary=BoundaryKind.PERIODIC, t_final=0.1,
        default_cfl={"default": 0.18},
        init_fn=lambda x: euler_accuracy_exact(x, 0.0), reference="exact_fn",
        exact_fn=euler_accuracy_exact, default_n=80, bp_default=True,
        description="smooth near-vacuum Euler flow with gamma = 3",
    )


def _riemann_spec(name, left, right, t_final, cfl, description, gamma=1.4, x0=0.5):
    kind = Euler(gamma)

    def init(x):
        x = np.asarray(x, dtype=float)
        is_left = (x < x0)[..., None]
        return np.where(is_left, kind.conserved(*left), kind.conserved(*right))

    def exact(x, t):
        return exact_riemann(kind, left, right, (np.asarray(x, dtype=float) - x0) / t).reshape(np.shape(x) + (3,))

    return ProblemSpec(
        name=name, kind=kind, x_min=0.0, x_max=1.0, boundary=BoundaryKind.OUTFLOW,
        t_final=t_final, default_cfl=cfl, init_fn=init, reference="riemann_exact",
        exact_fn=exact, default_n=400, bp_default=True, description=description,
        riemann_data=(left, right, x0),
    )


def double_rarefaction() -> ProblemSpec:
    return _riemann_spec(
        "double_rarefaction", (7.0, -1.0, 0.2), (7.0, 1.0, 0.2), 0.3,
        {"default": 0.4, "vh": 0.1}, "two rarefactions opening a near-vacuum",
    )


def leblanc() -> ProblemSpec:
    return _riemann_spec(
        "leblanc", (2.0, 0.0, 1e9), (1e-3, 0.0, 1.0), 5e-6,
        {"llf": 0.4, "sw": 0.4, "js": 0.15, "vh": 0.15}, "shock tube with pressure ratio 1e9",
    )


SEDOV_ENERGY = 3.2e6


def _sedov_adjust(state: AFState, grid: Grid1D) -> AFState:
    n = grid.n_cells
    if n % 2 == 0:
        raise ValueError("the Sedov problem needs an odd number of cells so a center cell exists")
    c = n // 2
    e = SEDOV_ENERGY / grid.dx
    A, P = state.averages.copy(), state.points.copy()
    A[c, 2] = e
    P[c, 2] = e
    P[c + 1, 2] = e
    return AFState(A, P, state.time)


def sedov() -> ProblemSpec:
    kind = Euler(1.4)

    def init(x):
        x = np.asarray(x, dtype=float)
        U = np.zeros(x.shape + (3,))
        U[..., 0] = 1.0
        U[..., 2] = 1e-12
        return U

    return ProblemSpec(
        name="sedov", kind=kind, x_min=-2.0, x_max=2.0, boundary=BoundaryKind.OUTFLOW,
        t_final=1e-3, default_cfl={"js": 0.1, "llf": 0.4, "sw": 0.3, "vh": 0.25},
        init_fn=init, reference="none", default_n=801, bp_default=True, adjust=_sedov_adjust,
        description="point blast in a cold gas",
    )


def blast_wave() -> ProblemSpec:
    kind = Euler(1.4)

    def pressure(x):
        return np.where(x < 0.1, 1000.0, np.where(x < 0.9, 0.01, 100.0))

    return ProblemSpec(
        name="blast_wave", kind=kind, x_min=0.0, x_max=1.0, boundary=BoundaryKind.REFLECTIVE,
        t_final=0.038, default_cfl={"js": 0.4, "llf": 0.4, "sw": 0.4, "vh": 0.35},
        init_fn=_primitive(kind, lambda x: (1.0, 0.0, pressure(x))),
        reference="fine_mesh_self", default_n=800, bp_default=True, fine_n=6400,
        description="interaction of two strong blast waves between reflecting walls",
    )


def shu_osher() -> ProblemSpec:
    kind = Euler(1.4)

    def prim(x):
        left = x < -4.0
        rho = np.where(left, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
        v = np.where(left, 2.629369, 0.0)
        p = np.where(left, 10.33333, 1.0)
        return rho, v, p

    return ProblemSpec(
        name="shu_osher", kind=kind, x_min=-5.0, x_max=5.0, boundary=BoundaryKind.OUTFLOW,
        t_final=1.8, default_cfl={"default": 0.3},
        init_fn=_primitive(kind, prim), reference="fine_mesh_self", default_n=400,
        fine_n=4000, bp_default=True, description="shock interacting with an entropy wave",
    )


REGISTRY: Dict[str, Callable[[], ProblemSpec]] = {
    "advection": advection_profile,
    "advection_sine": advection_sine,
    "burgers_square": burgers_square,
    "euler_accuracy": euler_accuracy,
    "double_rarefaction": double_rarefaction,
    "leblanc": leblanc,
    "sedov": sedov,
    "blast_wave": blast_wave,
    "shu_osher": shu_osher,
}


def get_problem(name: str) -> ProblemSpec:
    try:
        return REGISTRY[name]()
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(REGISTRY)}") from None


# -- reference solutions -----------------------------------------------------

def llf_first_order(kind, grid: Grid1D, boundary, U0, t_final, cfl=0.5):
    """First-order Rusanov finite-volume solution on ``grid`` (fine-mesh oracle)."""
    U = U0.copy()
    t = 0.0
    dx = grid.dx
    dummy = np.zeros((U.shape[0] + 1, U.shape[1]))
    while t < t_final:
        s = float(np.max(kind.max_speed(U)))
        dt = min(cfl * dx / s, t_final - t) if s > 0 else t_final - t
        Ue, _ = extend(U, dummy, boundary, 1, kind.reflection)
        F = kind.flux(Ue)
        a = np.maximum(kind.max_speed(Ue[:-1]), kind.max_speed(Ue[1:]))[:, None]
        H = 0.5 * (F[:-1] + F[1:]) - 0.5 * a * (Ue[1:] - Ue[:-1])
        U = U - dt / dx * (H[1:] - H[:-1])
        t = t_final if dt == t_final - t else t + dt
    return U


def reference_averages(spec: ProblemSpec, grid: Grid1D, fine_state=None) -> Optional[np.ndarray]:
    """Reference cell averages at ``spec.t_final`` on ``grid``.

    Exact references are averaged by Gauss quadrature; fine-mesh references
    are restricted by averaging the fine cells covering each coarse cell,
    which needs ``fine_n`` to be a multiple of the coarse cell count.
    """
    if spec.exact_fn is not None:
        return cell_averages(grid, lambda x: spec.exact_fn(x, spec.t_final))
    if spec.reference != "fine_mesh_self":
        return None
    if fine_state is None:
        fine_state = fine_reference(spec)
    fine = fine_state.averages
    ratio, rem = divmod(fine.shape[0], grid.n_cells)
    if rem:
        raise ValueError(f"fine mesh of {fine.shape[0]} cells does not nest {grid.n_cells} cells")
    return fine.reshape(grid.n_cells, ratio, -1).mean(axis=1)


def fine_reference(spec: ProblemSpec) -> AFState:
    """Fine-mesh reference state: first-order LLF for scalar laws, LLF-FVS active flux otherwise."""
    grid, state, kind = spec.setup(spec.fine_n)
    if kind.is_scalar:
        U = llf_first_order(kind, grid, spec.boundary, state.averages, spec.t_final)
        return AFState(U, np.full((grid.n_cells + 1, 1), np.nan), spec.t_final)
    lim = LimiterConfig("global", "global") if spec.bp_default else LimiterConfig()
    solver = ActiveFluxSolver(kind, grid, spec.boundary, spec.fine_splitting, lim)
    final, _ = solver.run(state, spec.t_final, spec.cfl(spec.fine_splitting))
    return final
