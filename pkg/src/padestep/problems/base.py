"""Shared types for the benchmark problems."""

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from padestep.errors import ParameterError
from padestep.models import Grading, ProblemKind
from padestep.system import StructuralSystem

ReferenceFn = Callable[[np.ndarray], dict[str, np.ndarray]]


@dataclass(frozen=True)
class ProblemSpec:
    """Which benchmark to build, with optional overrides of its default parameters."""

    kind: ProblemKind
    elements: int | None = None
    grading: Grading = Grading.UNIFORM
    overrides: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class MeshedModel:
    """A discretized benchmark: system, geometry, named probe DOFs and an analytical reference.

    ``reference`` maps a time grid to named series such as ``mid_v_ref``.
    ``cfl_length`` is the element length the CFL number refers to.
    """

    name: str
    system: StructuralSystem
    coordinates: np.ndarray
    probes: dict[str, int]
    u0: np.ndarray
    v0: np.ndarray
    reference: ReferenceFn | None = None
    wave_speed: float | None = None
    cfl_length: float | None = None
    params: dict[str, float] = field(default_factory=dict)


def merge_params(
    defaults: dict[str, float], overrides: dict[str, float] | None
) -> dict[str, float]:
    """Defaults updated with overrides; unknown names and non-positive values are rejected."""
    params = dict(defaults)
    for name, value in (overrides or {}).items():
        if name not in defaults:
            raise ParameterError(f"unknown parameter {name!r}; expected one of {sorted(defaults)}")
        if not value > 0:
            raise ParameterError(f"parameter {name!r} must be positive, got {value}")
        params[name] = float(value)
    return params


def cfl_to_dt(cfl: float, c: float, dx: float) -> float:
    """Δt = CFL·Δx/c."""
    for name, value in (("cfl", cfl), ("wave speed", c), ("element size", dx)):
        if not value > 0:
            raise ParameterError(f"{name} must be positive, got {value}")
    return cfl * dx / c


def recommended_cfl(order: int) -> float:
    """CFL = 10L for the (L = M-1, M) scheme, with L taken as at least 1."""
    return 10.0 * max(order - 1, 1)
