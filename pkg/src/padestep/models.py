"""Core data models shared across padestep."""

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np

from padestep.errors import ParameterError

logger = logging.getLogger(__name__)

MAX_ORDER = 8


class ProblemKind(StrEnum):
    """Benchmark problem families."""

    THREE_DOF = "three_dof"
    ROD = "rod"
    BIMATERIAL_ROD = "bimaterial_rod"
    SCALAR_WAVE_2D = "scalar_wave_2d"
    SDOF = "sdof"


class Grading(StrEnum):
    """Element size distribution along a rod."""

    UNIFORM = "uniform"
    SINUSOIDAL = "sinusoidal"


class FactorKind(StrEnum):
    """Backend used by a stored factorization."""

    CHOLESKY = "cholesky"
    LU = "lu"
    SPLU = "splu"


def max_pf(order: int) -> int:
    """Largest force-expansion degree allowed for denominator order M."""
    return min(2 * order - 2, 4)


@dataclass(frozen=True, eq=False)
class State:
    """Displacement and physical velocity at time t."""

    t: float
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True, eq=False)
class HistoryRecord:
    """One emitted step of an integration run."""

    t: float
    u: np.ndarray
    v: np.ndarray
    a: np.ndarray


@dataclass(frozen=True)
class SpectralCurvePoint:
    """Dissipation and dispersion measures at one value of Δt/T.

    Undefined quantities (zero phase, or the HHT branch above x = 1) are None.
    """

    x: float
    rho: float
    phase: float | None
    period_error: float | None
    damping_ratio: float | None


@dataclass(frozen=True)
class StepperConfig:
    """Parameters of a fixed-step run of the mixed-order scheme."""

    order: int
    rho_inf: float
    dt: float
    p_f: int | None = None
    n_steps: int | None = None
    duration: float | None = None

    def __post_init__(self):
        if not 1 <= self.order <= MAX_ORDER:
            raise ParameterError(f"order must be in [1, {MAX_ORDER}], got {self.order}")
        if not 0.0 <= self.rho_inf <= 1.0:
            raise ParameterError(f"rho_inf must be in [0, 1], got {self.rho_inf}")
        if not self.dt > 0.0:
            raise ParameterError(f"dt must be positive, got {self.dt}")
        if self.p_f is not None and not 0 <= self.p_f <= max_pf(self.order):
            raise ParameterError(
                f"p_f must be in [0, {max_pf(self.order)}] for order {self.order}, got {self.p_f}"
            )
        if self.n_steps is not None and self.n_steps < 0:
            raise ParameterError(f"n_steps must be non-negative, got {self.n_steps}")
        if self.duration is not None and self.duration < 0.0:
            raise ParameterError(f"duration must be non-negative, got {self.duration}")

    @property
    def force_degree(self) -> int:
        """Resolved p_f."""
        return max_pf(self.order) if self.p_f is None else self.p_f

    def steps(self) -> int:
        """Number of steps implied by n_steps or duration."""
        if self.n_steps is not None:
            return self.n_steps
        if self.duration is None:
            raise ParameterError("either n_steps or duration is required")
        return steps_for(self.duration, self.dt)


def steps_for(duration: float, dt: float) -> int:
    """Round duration/dt to a whole number of steps."""
    n = int(round(duration / dt))
    if abs(n * dt - duration) > 1e-9 * max(duration, dt):
        logger.warning("duration %g is not a multiple of dt %g; running %d steps", duration, dt, n)
    return n


@dataclass(frozen=True)
class ConvergenceLevel:
    """Error of one step size in a convergence study."""

    dt: float
    error: float
    order_estimate: float | None = None


@dataclass(frozen=True)
class RunResult:
    """Outcome of a batch of independent jobs."""

    results: dict[str, Any] = field(default_factory=dict)
    failed: dict[str, BaseException] = field(default_factory=dict)
