"""Uniform grid, active-flux degrees of freedom and boundary extension."""
from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Callable

import numpy as np

# 5-point Gauss-Legendre rule on [-1/2, 1/2]; exact for polynomials of degree 9.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)
_GL_NODES = 0.5 * _GL_NODES
_GL_WEIGHTS = 0.5 * _GL_WEIGHTS


class BoundaryKind(str, enum.Enum):
    PERIODIC = "periodic"
    OUTFLOW = "outflow"
    REFLECTIVE = "reflective"


class InitialDataError(ValueError):
    pass


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValueError("n_cells must be positive")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_cells + 1) * self.dx

    @property
    def length(self) -> float:
        return self.x_max - self.x_min


@dataclass
class AFState:
    """Cell averages (N, m) and interface point values (N + 1, m) at ``time``."""

    averages: np.ndarray
    points: np.ndarray
    time: float = 0.0

    def copy(self) -> "AFState":
        return AFState(self.averages.copy(), self.points.copy(), self.time)

    @property
    def n_cells(self) -> int:
        return self.averages.shape[0]

    def value_range(self):
        """Per-component (min, max) over averages and points together."""
        both = np.concatenate([self.averages, self.points], axis=0)
        return both.min(axis=0), both.max(axis=0)


def cell_averages(grid: Grid1D, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Cell averages of ``fn`` by 5-point Gauss-Legendre quadrature.

    ``fn`` maps an array of positions of any shape to states with one extra
    trailing component axis.
    """
    x = grid.centers[:, None] + grid.dx * _GL_NODES[None, :]
    vals = np.asarray(fn(x), dtype=float)
    return np.einsum("ijk,j->ik", vals, _GL_WEIGHTS)


def init_state(grid: Grid1D, boundary: BoundaryKind, init_fn, kind=None) -> AFState:
    """Sample points exactly at interfaces and average cells by quadrature.

    When ``kind`` is given the discrete data are checked against its
    admissible set and :class:`InitialDataError` names the first offender.
    """
    boundary = BoundaryKind(boundary)
    averages = cell_averages(grid, init_fn)
    points = np.array(init_fn(grid.interfaces), dtype=float)
    if boundary is BoundaryKind.PERIODIC:
        points[-1] = points[0]
    if kind is not None:
        check_admissible(kind, averages, points)
    return AFState(averages, points, 0.0)


def check_admissible(kind, averages, points):
    for name, arr in (("average", averages), ("point", points)):
        bad = ~kind.admissible_mask(arr)
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise InitialDataError(f"inadmissible initial {name} at index {i}: {arr[i]}")


def scalar_bounds(state: AFState):
    """Global bounds (m0, M0) of the discrete scalar data."""
    lo, hi = state.value_range()
    return float(lo[0]), float(hi[0])


def _ghost_index(j: np.ndarray, n: int, boundary: BoundaryKind, points: bool):
    """Map logical indices to stored ones; returns (index, mirrored_mask)."""
    if boundary is BoundaryKind.PERIODIC:
        return np.mod(j, n if not points else n - 1), np.zeros(j.shape, bool)
    last = n - 1
    if boundary is BoundaryKind.OUTFLOW:
        return np.clip(j, 0, last), np.zeros(j.shape, bool)
    # reflective: cells mirror about the wall face, points about the wall point
    if points:
        idx = np.where(j < 0, -j, np.where(j > last, 2 * last - j, j))
    else:
        idx = np.where(j < 0, -1 - j, np.where(j > last, 2 * last + 1 - j, j))
    return idx, (j < 0) | (j > last)


def ghost_values(state: AFState, boundary: BoundaryKind, halo: int, reflection=None):
    """Averages and points extended by ``halo`` ghost entries on each side.

    Extended cell index ``k`` holds cell ``k - halo``; extended point index
    ``k`` holds point ``k - halo``.  ``reflection`` is the per-component sign
    applied to mirrored reflective ghosts (momentum flips for Euler).
    """
    return extend(state.averages, state.points, boundary, halo, reflection)


@functools.lru_cache(maxsize=64)
def _extension_indices(n: int, boundary: BoundaryKind, halo: int):
    ic, mc = _ghost_index(np.arange(-halo, n + halo), n, boundary, points=False)
    ip, mp = _ghost_index(np.arange(-halo, n + 1 + halo), n + 1, boundary, points=True)
    for arr in (ic, mc, ip, mp):
        arr.setflags(write=False)
    return ic, mc, ip, mp


def extend(averages, points, boundary, halo, reflection=None):
    if halo > 2:
        raise ValueError("stencils reach at most two entries past the boundary")
    boundary = BoundaryKind(boundary)
    ic, mc, ip, mp = _extension_indices(averages.shape[0], boundary, halo)
    A = averages[ic]
    P = points[ip]
    if boundary is BoundaryKind.REFLECTIVE and reflection is not None:
        sign = np.asarray(reflection, dtype=float)
        A[mc] *= sign
        P[mp] *= sign
    return A, P


def total_mass(state: AFState, grid: Grid1D) -> np.ndarray:
    return state.averages.sum(axis=0) * grid.dx


def error_norms(state: AFState, grid: Grid1D, reference_fn) -> np.ndarray:
    """Per-component mean absolute error of the cell averages.

    The reference is averaged over each cell with the same quadrature used
    for initialisation.
    """
    ref = cell_averages(grid, reference_fn)
    return np.abs(state.averages - ref).mean(axis=0)
