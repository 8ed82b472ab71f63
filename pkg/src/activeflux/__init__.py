"""Third-order active flux methods for 1D hyperbolic conservation laws."""
from .equations import Burgers, DomainError, Euler, LinearAdvection
from .integrator import BPAbort, StepController
from .mesh import AFState, BoundaryKind, Grid1D, init_state
from .problems import get_problem
from .scheme import ActiveFluxSolver, LimiterConfig
from .splitting import SplittingKind

__all__ = [
    "AFState", "ActiveFluxSolver", "BPAbort", "BoundaryKind", "Burgers",
    "DomainError", "Euler", "Grid1D", "LimiterConfig", "LinearAdvection",
    "SplittingKind", "StepController", "get_problem", "init_state",
]
