"""Benchmark problems with analytical references."""

from padestep.models import Grading, ProblemKind
from padestep.problems.base import MeshedModel, ProblemSpec, cfl_to_dt, recommended_cfl
from padestep.problems.rod import build_bimaterial_rod, build_rod
from padestep.problems.scalar_wave import build_scalar_wave
from padestep.problems.sdof import build_sdof
from padestep.problems.three_dof import build_three_dof

DEFAULT_ELEMENTS = {
    ProblemKind.ROD: 1000,
    ProblemKind.BIMATERIAL_ROD: 1000,
    ProblemKind.SCALAR_WAVE_2D: 64,
}


def build_model(spec: ProblemSpec) -> MeshedModel:
    """Dispatch a ProblemSpec to its builder."""
    kind = ProblemKind(spec.kind)
    elements = spec.elements or DEFAULT_ELEMENTS.get(kind)
    if kind is ProblemKind.THREE_DOF:
        return build_three_dof(spec.overrides)
    if kind is ProblemKind.SDOF:
        return build_sdof(spec.overrides)
    if kind is ProblemKind.ROD:
        return build_rod(elements, Grading(spec.grading), spec.overrides)
    if kind is ProblemKind.BIMATERIAL_ROD:
        return build_bimaterial_rod(elements, spec.overrides)
    return build_scalar_wave(elements, spec.overrides)


__all__ = [
    "MeshedModel",
    "ProblemSpec",
    "build_model",
    "cfl_to_dt",
    "recommended_cfl",
]
