"""Time stepping: SSP-RK3, CFL time steps and the halve-and-retry protocol."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .equations import DomainError


class BPAbort(RuntimeError):
    """The step protocol could not produce an admissible state."""

    def __init__(self, message, time=None, detail=None):
        super().__init__(message)
        self.time = time
        self.detail = detail or {}


class StageRejected(Exception):
    """A limited stage violated a bound-preserving precondition; retry with a smaller dt."""


def _combine(a, x, b, y):
    if isinstance(x, tuple):
        return tuple(a * xi + b * yi for xi, yi in zip(x, y))
    return a * x + b * y


def ssprk3_step(u, dt, euler_step: Callable):
    """One SSP-RK3 step written as convex combinations of forward-Euler steps.

    ``euler_step(u, dt)`` returns u + dt L(u), possibly limited; ``u`` may be
    an array or a tuple of arrays.
    """
    u1 = euler_step(u, dt)
    u2 = _combine(0.75, u, 0.25, euler_step(u1, dt))
    return _combine(1.0 / 3.0, u, 2.0 / 3.0, euler_step(u2, dt))


def compute_dt(max_speed_over_dx: float, cfl: float, remaining: float) -> float:
    """CFL time step, clipped so the final time is hit exactly."""
    if not remaining > 0.0:
        return 0.0
    if max_speed_over_dx <= 0.0 or not math.isfinite(max_speed_over_dx):
        if not math.isfinite(max_speed_over_dx):
            raise DomainError("non-finite wave speed")
        return remaining
    return min(cfl / max_speed_over_dx, remaining)


@dataclass
class StepController:
    cfl: float
    t_final: float
    max_halvings: int = 20
    dt_history: List[float] = field(default_factory=list)
    n_steps: int = 0
    n_halvings: int = 0
    n_rejections: int = 0

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"CFL number must lie in (0, 1], got {self.cfl}")
        if not self.t_final > 0.0:
            raise ValueError("final time must be positive")


def advance(state, solver, controller: StepController, on_step: Optional[Callable] = None):
    """March ``state`` to ``controller.t_final``.

    ``solver`` provides ``speed_over_dx(state)``, ``stage(u, dt)``,
    ``pack(state)``, ``unpack(u, time)``, ``check(state)`` and a
    ``limiting`` flag.  When limiting is on, a rejected stage rolls the step
    back and retries with half the time step, at most
    ``controller.max_halvings`` times.
    """
    t_final = controller.t_final
    while state.time < t_final:
        remaining = t_final - state.time
        try:
            dt = compute_dt(solver.speed_over_dx(state), controller.cfl, remaining)
        except DomainError as exc:
            raise BPAbort(f"negative density or pressure at t={state.time:.6g}: {exc}", time=state.time) from exc
        u0 = solver.pack(state)
        for attempt in range(controller.max_halvings + 1):
            try:
                u1 = ssprk3_step(u0, dt, solver.stage)
            except StageRejected as exc:
                controller.n_rejections += 1
                if attempt == controller.max_halvings:
                    raise BPAbort(
                        f"step at t={state.time:.6g} still rejected after "
                        f"{controller.max_halvings} halvings: {exc}",
                        time=state.time, detail=getattr(exc, "detail", None),
                    ) from exc
                dt *= 0.5
                controller.n_halvings += 1
                continue
            except DomainError as exc:
                raise BPAbort(f"negative density or pressure at t={state.time:.6g}: {exc}", time=state.time) from exc
            break
        new_time = t_final if dt == remaining else state.time + dt
        state = solver.unpack(u1, new_time)
        solver.check(state)
        controller.dt_history.append(dt)
        controller.n_steps += 1
        if on_step is not None:
            on_step(state, dt)
    return state
