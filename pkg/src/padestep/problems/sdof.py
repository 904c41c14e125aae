"""Single-DOF oscillator under harmonic load, used for convergence studies."""

import math

import numpy as np

from padestep.models import ConvergenceLevel
from padestep.problems.base import MeshedModel, merge_params
from padestep.system import LoadModel, Sine, StructuralSystem

SDOF_DEFAULTS = {
    "omega": 2.0 * np.pi,
    "load_frequency": 3.0,
}


def build_sdof(params: dict[str, float] | None = None) -> MeshedModel:
    """m = 1, k = ω², f = sin(Ω t), zero initial conditions."""
    params = merge_params(SDOF_DEFAULTS, params)
    omega = params["omega"]
    system = StructuralSystem.build(
        [[1.0]], [[omega**2]], load=LoadModel.single([1.0], Sine(1.0, params["load_frequency"]))
    )

    def reference(t_grid: np.ndarray) -> dict[str, np.ndarray]:
        u, v, _ = sdof_reference(t_grid, params)
        return {"x_u_ref": u, "x_v_ref": v}

    return MeshedModel(
        name="sdof",
        system=system,
        coordinates=np.zeros(1),
        probes={"x": 0},
        u0=np.zeros(1),
        v0=np.zeros(1),
        reference=reference,
        params=params,
    )


def sdof_reference(
    t_grid, params: dict[str, float] | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    params = merge_params(SDOF_DEFAULTS, params)
    w, p = params["omega"], params["load_frequency"]
    t = np.asarray(t_grid, dtype=float)
    scale = 1.0 / (w * w - p * p)
    u = scale * (np.sin(p * t) - p / w * np.sin(w * t))
    v = scale * p * (np.cos(p * t) - np.cos(w * t))
    a = scale * (-p * p * np.sin(p * t) + p * w * np.sin(w * t))
    return u, v, a


def sdof_error(params: dict[str, float], t: float, u: float, v: float) -> float:
    """Error in energy norm relative to the exact response at t."""
    w = params["omega"]
    ue, ve, _ = sdof_reference([t], params)
    num = max(w * abs(u - ue[0]), abs(v - ve[0]))
    den = max(w * abs(ue[0]), abs(ve[0]))
    return num / den


def richardson_levels(dts: list[float], errors: list[float]) -> list[ConvergenceLevel]:
    """Attach the observed order between each level and the one before it."""
    levels = []
    for i, (dt, error) in enumerate(zip(dts, errors, strict=True)):
        estimate = None
        if i > 0 and error > 0.0 and errors[i - 1] > 0.0:
            estimate = math.log(errors[i - 1] / error) / math.log(dts[i - 1] / dt)
        levels.append(ConvergenceLevel(dt=dt, error=error, order_estimate=estimate))
    return levels
