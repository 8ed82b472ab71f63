"""Assembly of the active flux scheme: semi-discrete operator and limited stages."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bp_average, bp_point
from .equations import DomainError, Euler
from .integrator import BPAbort, StageRejected, StepController, advance
from .mesh import AFState, BoundaryKind, Grid1D, extend
from .splitting import SplittingKind, point_rhs_extended

LIMITER_MODES = ("off", "global", "local")


@dataclass(frozen=True)
class LimiterConfig:
    """Which bound-preserving limiters run.

    ``bp_average`` and ``bp_point`` take ``"off"``, ``"global"`` or
    ``"local"``.  For the Euler equations any value other than ``"off"``
    enforces density and pressure positivity and ``"local"`` is rejected.
    """

    bp_average: str = "off"
    bp_point: str = "off"
    power_law: bool = False

    def __post_init__(self):
        for name in ("bp_average", "bp_point"):
            value = getattr(self, name)
            if value == "on":
                object.__setattr__(self, name, "global")
            elif value not in LIMITER_MODES:
                raise ValueError(f"{name} must be one of {LIMITER_MODES}, got {value!r}")

    @property
    def limiting(self) -> bool:
        return self.bp_average != "off" or self.bp_point != "off"

    def validate(self, kind):
        if not kind.is_scalar and "local" in (self.bp_average, self.bp_point):
            raise ValueError("local maximum-principle bounds apply to scalar laws only")
        if kind.is_scalar and self.limiting and kind.bounds is None:
            raise ValueError("scalar limiting needs global bounds on the equation kind")


@dataclass
class RunStats:
    stages: int = 0
    average_limited_stages: int = 0
    point_limited_stages: int = 0
    average_limited_interfaces: int = 0
    point_limited_points: int = 0
    alpha_enlargements: int = 0
    min_values: np.ndarray = None
    max_values: np.ndarray = None
    min_density: float = np.inf
    min_pressure: float = np.inf

    def observe(self, kind, A, P):
        lo = np.minimum(A.min(axis=0), P.min(axis=0))
        hi = np.maximum(A.max(axis=0), P.max(axis=0))
        self.min_values = lo if self.min_values is None else np.minimum(self.min_values, lo)
        self.max_values = hi if self.max_values is None else np.maximum(self.max_values, hi)
        if isinstance(kind, Euler):
            self.min_density = min(self.min_density, float(lo[0]))
            g1 = kind.gamma - 1.0
            with np.errstate(divide="ignore", invalid="ignore"):
                p = min(float(np.min(g1 * (U[:, 2] - 0.5 * U[:, 1] ** 2 / U[:, 0]))) for U in (A, P))
            self.min_pressure = min(self.min_pressure, p if lo[0] > 0.0 else -np.inf)

    def as_dict(self):
        d = {k: v for k, v in self.__dict__.items()}
        for key in ("min_values", "max_values"):
            if d[key] is not None:
                d[key] = [float(x) for x in d[key]]
        for key in ("min_density", "min_pressure"):
            d[key] = None if not np.isfinite(d[key]) else float(d[key])
        return d


class ActiveFluxSolver:
    """Active flux discretisation of one conservation law on a uniform grid."""

    halo = 2

    def __init__(self, kind, grid: Grid1D, boundary, splitting="llf", limiters: LimiterConfig = None):
        self.kind = kind
        self.grid = grid
        self.boundary = BoundaryKind(boundary)
        self.splitting = SplittingKind(splitting)
        self.limiters = limiters or LimiterConfig()
        self.limiters.validate(kind)
        if self.splitting is SplittingKind.VH and not isinstance(kind, Euler):
            raise ValueError("the van Leer-Haenel splitting needs the Euler equations")
        self.stats = RunStats()

    # -- plumbing used by the integrator --------------------------------------

    @property
    def limiting(self) -> bool:
        return self.limiters.limiting

    def pack(self, state: AFState):
        return (state.averages, state.points)

    def unpack(self, u, time) -> AFState:
        A, P = u
        if self.boundary is BoundaryKind.PERIODIC:
            P = P.copy()
            P[-1] = P[0]
        return AFState(A, P, time)

    def speed_over_dx(self, state: AFState) -> float:
        return float(np.max(self.kind.max_speed(state.averages))) / self.grid.dx

    def check(self, state: AFState):
        for name, arr in (("cell average", state.averages), ("point value", state.points)):
            if not np.all(np.isfinite(arr)):
                i = int(np.flatnonzero(~np.all(np.isfinite(arr), axis=-1))[0])
                raise BPAbort(f"non-finite {name} at index {i}, t={state.time:.6g}", time=state.time)
            if isinstance(self.kind, Euler):
                bad = ~self.kind.admissible_mask(arr)
                if np.any(bad):
                    i = int(np.flatnonzero(bad)[0])
                    rho = arr[i, 0]
                    p = (self.kind.gamma - 1.0) * (arr[i, 2] - 0.5 * arr[i, 1] ** 2 / rho) if rho != 0 else np.nan
                    what = "negative density" if not rho > 0 else "negative pressure"
                    raise BPAbort(
                        f"{what} in {name} {i} at t={state.time:.6g} (rho={rho:.6g}, p={p:.6g})",
                        time=state.time,
                        detail={"kind": what, "where": name, "index": i, "rho": float(rho), "p": float(p)},
                    )

    # -- spatial operator -----------------------------------------------------

    def _repair(self):
        # Euler splittings are undefined at inadmissible centers, so the
        # repair runs regardless of the limiter flags; it is the identity on
        # admissible values
        if self.kind.is_scalar and self.limiters.bp_point == "off":
            return None
        return lambda center, avg: bp_point.repair_cell_center(self.kind, center, avg)

    def point_rhs(self, A, P):
        Ae, Pe = extend(A, P, self.boundary, self.halo, self.kind.reflection)
        return point_rhs_extended(self.kind, self.splitting, Pe, Ae, self.grid.dx,
                                  power_law=self.limiters.power_law, repair=self._repair())

    def rhs(self, u):
        """Unlimited semi-discrete operator (dA/dt, dP/dt)."""
        A, P = u
        F = self.kind.flux(P)
        dA = -(F[1:] - F[:-1]) / self.grid.dx
        return dA, self.point_rhs(A, P)

    def stage(self, u, dt):
        """One forward-Euler step, limited as configured.

        Raises :class:`StageRejected` when limiting was needed but its time
        step or intermediate-state preconditions fail.
        """
        try:
            return self._stage(u, dt)
        except DomainError as exc:
            if self.limiting:
                raise StageRejected(str(exc)) from exc
            raise

    def _stage(self, u, dt):
        kind, dx, lim = self.kind, self.grid.dx, self.limiters
        A, P = u
        n1 = P.shape[0]
        Ae, Pe = extend(A, P, self.boundary, self.halo, self.kind.reflection)
        dP = point_rhs_extended(kind, self.splitting, Pe, Ae, dx,
                                power_law=lim.power_law, repair=self._repair())
        if lim.bp_point == "off":
            FPe = kind.flux(Pe)
        else:
            FPe, SPe = kind.flux_and_speed(Pe)
        F_high = FPe[2:n1 + 2]
        self.stats.stages += 1
        problems = []

        if lim.bp_average == "off":
            F = F_high
        else:
            res = bp_average.limit_average_fluxes(kind, Ae, F_high, lim.bp_average)
            F = res.flux
            self.stats.alpha_enlargements += res.n_alpha_enlarged
            n_act = int(np.count_nonzero(res.active))
            if n_act:
                self.stats.average_limited_stages += 1
                self.stats.average_limited_interfaces += n_act
                if not np.all(res.tilde_ok):
                    i = int(np.flatnonzero(~res.tilde_ok)[0])
                    problems.append(f"intermediate state at interface {i} is inadmissible")
                limit = dx / (res.alpha[:-1] + res.alpha[1:])
                if np.any(dt > limit):
                    i = int(np.argmin(limit))
                    problems.append(f"dt={dt:.6g} exceeds average bound {limit[i]:.6g} at cell {i}")
        A_new = A - (dt / dx) * (F[1:] - F[:-1])

        P_high = P + dt * dP
        if lim.bp_point == "off":
            P_new = P_high
        else:
            P_low, a_left, a_right = bp_point.llf_point_update(
                kind, Pe[1:n1 + 1], P, Pe[3:n1 + 3], dx, dx, dt,
                fluxes=(FPe[1:n1 + 1], F_high, FPe[3:n1 + 3]),
                speeds=(SPe[1:n1 + 1], SPe[2:n1 + 2], SPe[3:n1 + 3]),
            )
            if kind.is_scalar:
                if lim.bp_point == "local":
                    AL, AR = Ae[1:n1 + 1, 0], Ae[2:n1 + 2, 0]
                    lo = np.minimum(np.minimum(AL, AR), P[:, 0])
                    hi = np.maximum(np.maximum(AL, AR), P[:, 0])
                else:
                    lo, hi = kind.bounds
                u_lim, theta = bp_point.blend_scalar_point(P_high[:, 0], P_low[:, 0], lo, hi)
                P_new = u_lim[:, None]
                active = theta < 1.0
            else:
                P_new, t1, t2 = bp_point.blend_euler_point(P_high, P_low, kind.gamma)
                active = (t1 < 1.0) | (t2 < 1.0)
            n_act = int(np.count_nonzero(active))
            if n_act:
                self.stats.point_limited_stages += 1
                self.stats.point_limited_points += n_act
                # the low-order value only enters where the blend is active
                limit = np.where(active, bp_point.point_dt_limit(dx, dx, a_left, a_right), np.inf)
                if np.any(dt > limit):
                    i = int(np.argmin(limit))
                    problems.append(f"dt={dt:.6g} exceeds point bound {limit[i]:.6g} at point {i}")
        if self.boundary is BoundaryKind.PERIODIC:
            P_new[-1] = P_new[0]
        if problems:
            raise StageRejected("; ".join(problems))
        self.stats.observe(kind, A_new, P_new)
        return A_new, P_new

    # -- driver ---------------------------------------------------------------

    def run(self, state: AFState, t_final: float, cfl: float, max_halvings: int = 20, on_step=None):
        controller = StepController(cfl=cfl, t_final=t_final, max_halvings=max_halvings)
        self.stats.observe(self.kind, state.averages, state.points)
        final = advance(state, self, controller, on_step=on_step)
        return final, controller
