"""Conservation laws: fluxes, eigensystems and admissible sets.

Every state array carries its conserved components on the last axis, so a
single state has shape ``(m,)`` and a field of ``n`` states has shape
``(n, m)``.  All methods are vectorised over the leading axes.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import ClassVar, Optional, Tuple, Union

import numpy as np


class DomainError(ValueError):
    """A state lies outside the set on which an operation is defined."""


def _first_bad(mask: np.ndarray) -> int:
    return int(np.flatnonzero(np.ravel(mask))[0])


@dataclass(frozen=True)
class _Scalar:
    """Shared behaviour of the scalar (m = 1) laws."""

    n_comp: ClassVar[int] = 1
    bounds: Optional[Tuple[float, float]] = field(default=None, kw_only=True)

    @property
    def is_scalar(self) -> bool:
        return True

    @property
    def reflection(self) -> np.ndarray:
        return np.ones(1)

    def with_bounds(self, lo: float, hi: float):
        return replace(self, bounds=(float(lo), float(hi)))

    def derivative(self, U):
        raise NotImplementedError

    def eigenvalues(self, U):
        return self.derivative(np.asarray(U, dtype=float))

    def max_speed(self, U):
        return np.abs(self.eigenvalues(U))[..., 0]

    def flux_and_speed(self, U):
        return self.flux(U), self.max_speed(U)

    def jacobian(self, U):
        return self.eigenvalues(U)[..., None]

    def eigensystem(self, U):
        lam = self.eigenvalues(U)
        one = np.ones(lam.shape[:-1] + (1, 1))
        return one, lam, one.copy()

    def admissible_mask(self, U) -> np.ndarray:
        u = np.asarray(U, dtype=float)[..., 0]
        ok = np.isfinite(u)
        if self.bounds is not None:
            lo, hi = self.bounds
            ok &= (u >= lo) & (u <= hi)
        return ok

    def is_admissible(self, U) -> bool:
        return bool(np.all(self.admissible_mask(U)))


@dataclass(frozen=True)
class LinearAdvection(_Scalar):
    """u_t + c u_x = 0."""

    speed: float = 1.0

    def flux(self, U):
        return self.speed * np.asarray(U, dtype=float)

    def derivative(self, U):
        return np.full_like(np.asarray(U, dtype=float), self.speed)


@dataclass(frozen=True)
class Burgers(_Scalar):
    """u_t + (u^2/2)_x = 0."""

    def flux(self, U):
        U = np.asarray(U, dtype=float)
        return 0.5 * U * U

    def derivative(self, U):
        return np.array(U, dtype=float)


@dataclass(frozen=True)
class Euler:
    """One-dimensional compressible Euler equations for a perfect gas.

    Conserved variables are (rho, rho*v, E) with p = (gamma - 1)(E - (rho v)^2 / (2 rho)).
    """

    gamma: float = 1.4
    n_comp: ClassVar[int] = 3

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"adiabatic index must exceed 1, got {self.gamma}")

    @property
    def is_scalar(self) -> bool:
        return False

    @property
    def bounds(self):
        return None

    @property
    def reflection(self) -> np.ndarray:
        return np.array([1.0, -1.0, 1.0])

    # -- conversions ---------------------------------------------------------

    def conserved(self, rho, v, p) -> np.ndarray:
        rho, v, p = np.broadcast_arrays(*(np.asarray(q, dtype=float) for q in (rho, v, p)))
        return np.stack([rho, rho * v, p / (self.gamma - 1.0) + 0.5 * rho * v * v], axis=-1)

    def _density(self, U) -> np.ndarray:
        rho = U[..., 0]
        if not np.all(rho > 0.0):
            i = _first_bad(~(rho > 0.0))
            raise DomainError(f"non-positive density {float(np.ravel(rho)[i])!r} at state index {i}")
        return rho

    def pressure(self, U) -> np.ndarray:
        U = np.asarray(U, dtype=float)
        rho = self._density(U)
        return (self.gamma - 1.0) * (U[..., 2] - 0.5 * U[..., 1] ** 2 / rho)

    def primitive(self, U):
        """Return (rho, v, p)."""
        U = np.asarray(U, dtype=float)
        rho = self._density(U)
        v = U[..., 1] / rho
        p = (self.gamma - 1.0) * (U[..., 2] - 0.5 * rho * v * v)
        return rho, v, p

    def _checked_primitive(self, U):
        rho, v, p = self.primitive(U)
        if not np.all(p > 0.0):
            i = _first_bad(~(p > 0.0))
            raise DomainError(f"non-positive pressure {float(np.ravel(p)[i])!r} at state index {i}")
        return rho, v, p

    def sound_speed(self, U) -> np.ndarray:
        rho, _, p = self._checked_primitive(U)
        return np.sqrt(self.gamma * p / rho)

    # -- flux and characteristic structure -----------------------------------

    def flux(self, U) -> np.ndarray:
        U = np.asarray(U, dtype=float)
        rho = self._density(U)
        v = U[..., 1] / rho
        p = (self.gamma - 1.0) * (U[..., 2] - 0.5 * U[..., 1] * v)
        return np.stack([U[..., 1], U[..., 1] * v + p, (U[..., 2] + p) * v], axis=-1)

    def flux_and_speed(self, U):
        """(F(U), |v| + a) from a single primitive conversion."""
        U = np.asarray(U, dtype=float)
        rho, v, p = self._checked_primitive(U)
        F = np.stack([U[..., 1], U[..., 1] * v + p, (U[..., 2] + p) * v], axis=-1)
        return F, np.abs(v) + np.sqrt(self.gamma * p / rho)

    def eigenvalues(self, U) -> np.ndarray:
        """Ascending (v - a, v, v + a)."""
        rho, v, p = self._checked_primitive(U)
        a = np.sqrt(self.gamma * p / rho)
        return np.stack([v - a, v, v + a], axis=-1)

    def max_speed(self, U) -> np.ndarray:
        rho, v, p = self._checked_primitive(U)
        return np.abs(v) + np.sqrt(self.gamma * p / rho)

    def jacobian(self, U) -> np.ndarray:
        U = np.asarray(U, dtype=float)
        g = self.gamma
        rho = self._density(U)
        v = U[..., 1] / rho
        H = g * U[..., 2] / rho - 0.5 * (g - 1.0) * v * v
        J = np.zeros(U.shape[:-1] + (3, 3))
        J[..., 0, 1] = 1.0
        J[..., 1, 0] = 0.5 * (g - 3.0) * v * v
        J[..., 1, 1] = (3.0 - g) * v
        J[..., 1, 2] = g - 1.0
        J[..., 2, 0] = v * (0.5 * (g - 1.0) * v * v - H)
        J[..., 2, 1] = H - (g - 1.0) * v * v
        J[..., 2, 2] = g * v
        return J

    def eigensystem(self, U):
        """Right eigenvectors R (columns, first row all ones), eigenvalues, R^-1."""
        U = np.asarray(U, dtype=float)
        g = self.gamma
        rho, v, p = self._checked_primitive(U)
        a = np.sqrt(g * p / rho)
        H = (U[..., 2] + p) / rho
        lam = np.stack([v - a, v, v + a], axis=-1)

        R = np.empty(U.shape[:-1] + (3, 3))
        R[..., 0, :] = 1.0
        R[..., 1, 0] = v - a
        R[..., 1, 1] = v
        R[..., 1, 2] = v + a
        R[..., 2, 0] = H - v * a
        R[..., 2, 1] = 0.5 * v * v
        R[..., 2, 2] = H + v * a

        b1 = (g - 1.0) / (a * a)
        b2 = 0.5 * b1 * v * v
        Rinv = np.empty_like(R)
        Rinv[..., 0, 0] = 0.5 * (b2 + v / a)
        Rinv[..., 0, 1] = -0.5 * (b1 * v + 1.0 / a)
        Rinv[..., 0, 2] = 0.5 * b1
        Rinv[..., 1, 0] = 1.0 - b2
        Rinv[..., 1, 1] = b1 * v
        Rinv[..., 1, 2] = -b1
        Rinv[..., 2, 0] = 0.5 * (b2 - v / a)
        Rinv[..., 2, 1] = -0.5 * (b1 * v - 1.0 / a)
        Rinv[..., 2, 2] = 0.5 * b1
        return R, lam, Rinv

    # -- admissible set ------------------------------------------------------

    def admissible_mask(self, U) -> np.ndarray:
        U = np.asarray(U, dtype=float)
        rho = U[..., 0]
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            p = (self.gamma - 1.0) * (U[..., 2] - 0.5 * U[..., 1] ** 2 / rho)
        # comparisons with nan are false, and an infinite or nan component
        # always leaves rho or p non-finite
        return (rho > 0.0) & (rho < np.inf) & (p > 0.0) & (p < np.inf)

    def is_admissible(self, U) -> bool:
        return bool(np.all(self.admissible_mask(U)))


EquationKind = Union[LinearAdvection, Burgers, Euler]


def split_jacobian(kind: EquationKind, U):
    """Return (J+, J-) = R diag(max(lam,0)) R^-1, R diag(min(lam,0)) R^-1."""
    R, lam, Rinv = kind.eigensystem(U)
    Jp = np.einsum("...ij,...j,...jk->...ik", R, np.maximum(lam, 0.0), Rinv)
    Jm = np.einsum("...ij,...j,...jk->...ik", R, np.minimum(lam, 0.0), Rinv)
    return Jp, Jm
