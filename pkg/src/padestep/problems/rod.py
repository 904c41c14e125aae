"""Fixed–loaded elastic rods discretized with 2-node bar elements and consistent mass."""

import logging

import numpy as np
import scipy.sparse as sp

from padestep.errors import ParameterError
from padestep.models import Grading
from padestep.problems.base import MeshedModel, merge_params
from padestep.problems.characteristics import LayeredRod, Segment
from padestep.system import LoadModel, Step, StructuralSystem

logger = logging.getLogger(__name__)

ROD_DEFAULTS = {
    "length": 200.0,
    "modulus": 3.0e7,
    "density": 0.00073,
    "load": 1.0e4,
    "area": 1.0,
}

BIMATERIAL_DEFAULTS = {
    "segment_length": 2.0,
    "modulus_left": 8000.0,
    "density_left": 1.0,
    "modulus_right": 800.0,
    "density_right": 1.0,
    "load": 1.0,
    "area": 1.0,
}

GRADING_WAVES = 20


def rod_nodes(n_e: int, length: float, grading: Grading) -> np.ndarray:
    """Node coordinates x_0..x_{n_e}; sinusoidal grading varies element size about tenfold."""
    s = np.arange(n_e + 1) / n_e
    if grading is Grading.SINUSOIDAL:
        k = GRADING_WAVES * np.pi
        s = s + 9.0 / (11.0 * k) * np.sin(k * s) ** 2
    return length * s


def assemble_bar(
    nodes: np.ndarray, modulus: np.ndarray, density: np.ndarray, area: float
) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Global K and M of a chain of bar elements; per-element material arrays."""
    dx = np.diff(nodes)
    n = nodes.size
    first = np.arange(n - 1)
    rows = np.concatenate([first, first, first + 1, first + 1])
    cols = np.concatenate([first, first + 1, first, first + 1])
    ke = modulus * area / dx
    me = density * area * dx / 6.0
    k = sp.coo_matrix((np.concatenate([ke, -ke, -ke, ke]), (rows, cols)), shape=(n, n))
    m = sp.coo_matrix((np.concatenate([2 * me, me, me, 2 * me]), (rows, cols)), shape=(n, n))
    return k.tocsr(), m.tocsr()


def _fixed_left(nodes, modulus, density, area, load) -> tuple[StructuralSystem, np.ndarray]:
    k, m = assemble_bar(nodes, modulus, density, area)
    k, m = k[1:, 1:].tocsr(), m[1:, 1:].tocsr()
    f = np.zeros(nodes.size - 1)
    f[-1] = load * area
    return StructuralSystem.build(m, k, load=LoadModel.single(f, Step(0.0))), nodes[1:]


def _dof_at(coords: np.ndarray, x: float) -> int:
    return int(np.argmin(np.abs(coords - x)))


def rod_segments(params: dict[str, float]) -> list[Segment]:
    return [Segment(0.0, params["length"], params["density"], params["modulus"])]


def rod_reference_velocity(x: float, t_grid, params: dict[str, float] | None = None) -> np.ndarray:
    """Continuum velocity of the fixed–loaded rod at x: plateaus of ±p/(ρc)."""
    params = merge_params(ROD_DEFAULTS, params)
    t = np.asarray(t_grid, dtype=float)
    if not 0.0 <= x <= params["length"]:
        raise ParameterError(f"x={x} is outside [0, {params['length']}]")
    t_end = float(t.max()) if t.size else 0.0
    return LayeredRod(rod_segments(params), params["load"], t_end).velocity(x, t)


def build_rod(
    n_e: int = 1000,
    grading: Grading = Grading.UNIFORM,
    params: dict[str, float] | None = None,
) -> MeshedModel:
    """Homogeneous rod, left end fixed, right end under a step traction."""
    if n_e < 2:
        raise ParameterError(f"a rod needs at least 2 elements, got {n_e}")
    params = merge_params(ROD_DEFAULTS, params)
    nodes = rod_nodes(n_e, params["length"], Grading(grading))
    modulus = np.full(n_e, params["modulus"])
    density = np.full(n_e, params["density"])
    system, coords = _fixed_left(nodes, modulus, density, params["area"], params["load"])

    mid = params["length"] / 2.0
    probes = {"mid": _dof_at(coords, mid), "tip": coords.size - 1}
    mid_x = float(coords[probes["mid"]])

    def reference(t_grid: np.ndarray) -> dict[str, np.ndarray]:
        return {
            "mid_v_ref": rod_reference_velocity(mid_x, t_grid, params),
            "tip_v_ref": rod_reference_velocity(params["length"], t_grid, params),
        }

    c = float(np.sqrt(params["modulus"] / params["density"]))
    logger.debug("rod: %d elements, %s grading, c=%g", n_e, grading, c)
    return MeshedModel(
        name="rod",
        system=system,
        coordinates=coords,
        probes=probes,
        u0=np.zeros(coords.size),
        v0=np.zeros(coords.size),
        reference=reference,
        wave_speed=c,
        cfl_length=float(np.max(np.diff(nodes))),
        params=params,
    )


def bimaterial_segments(params: dict[str, float]) -> list[Segment]:
    half = params["segment_length"]
    return [
        Segment(0.0, half, params["density_left"], params["modulus_left"]),
        Segment(half, 2 * half, params["density_right"], params["modulus_right"]),
    ]


def bimaterial_reference_velocity(
    x: float, t_grid, params: dict[str, float] | None = None
) -> np.ndarray:
    params = merge_params(BIMATERIAL_DEFAULTS, params)
    t = np.asarray(t_grid, dtype=float)
    t_end = float(t.max()) if t.size else 0.0
    return LayeredRod(bimaterial_segments(params), params["load"], t_end).velocity(x, t)


def build_bimaterial_rod(
    n_e_per_segment: int = 1000, params: dict[str, float] | None = None
) -> MeshedModel:
    """Two equal-length segments of different materials; the interface is the mid probe.

    The CFL length is the element size and the wave speed is the lower of the two,
    so Δt follows the slower segment.
    """
    if n_e_per_segment < 2:
        raise ParameterError(f"each segment needs at least 2 elements, got {n_e_per_segment}")
    params = merge_params(BIMATERIAL_DEFAULTS, params)
    half = params["segment_length"]
    n_e = 2 * n_e_per_segment
    nodes = np.linspace(0.0, 2 * half, n_e + 1)
    left = np.arange(n_e) < n_e_per_segment
    modulus = np.where(left, params["modulus_left"], params["modulus_right"])
    density = np.where(left, params["density_left"], params["density_right"])
    system, coords = _fixed_left(nodes, modulus, density, params["area"], params["load"])

    probes = {"mid": n_e_per_segment - 1, "tip": coords.size - 1}
    segments = bimaterial_segments(params)

    def reference(t_grid: np.ndarray) -> dict[str, np.ndarray]:
        return {"mid_v_ref": bimaterial_reference_velocity(half, t_grid, params)}

    return MeshedModel(
        name="bimaterial_rod",
        system=system,
        coordinates=coords,
        probes=probes,
        u0=np.zeros(coords.size),
        v0=np.zeros(coords.size),
        reference=reference,
        wave_speed=min(s.speed for s in segments),
        cfl_length=float(half / n_e_per_segment),
        params=params,
    )


def axial_stress(model: MeshedModel, u: np.ndarray) -> np.ndarray:
    """Element stresses E·Δu/Δx, with the fixed node restored at the left end."""
    nodes = np.concatenate([[0.0], model.coordinates])
    full = np.concatenate([[0.0], np.asarray(u, dtype=float)])
    n_e = nodes.size - 1
    if model.name == "bimaterial_rod":
        split = n_e // 2
        modulus = np.where(
            np.arange(n_e) < split, model.params["modulus_left"], model.params["modulus_right"]
        )
    else:
        modulus = np.full(n_e, model.params["modulus"])
    return modulus * np.diff(full) / np.diff(nodes)
