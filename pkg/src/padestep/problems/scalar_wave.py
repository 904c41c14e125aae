"""Scalar wave in a fixed square with a central patch of initial velocity."""

import logging

import numpy as np
import scipy.sparse as sp

from padestep.errors import ParameterError
from padestep.problems.base import MeshedModel, merge_params
from padestep.system import StructuralSystem

logger = logging.getLogger(__name__)

SCALAR_WAVE_DEFAULTS = {
    "side": 1.0,
    "speed": 1.0,
    "velocity": 1.0,
}

_QUAD_STIFFNESS = np.array(
    [
        [4.0, -1.0, -2.0, -1.0],
        [-1.0, 4.0, -1.0, -2.0],
        [-2.0, -1.0, 4.0, -1.0],
        [-1.0, -2.0, -1.0, 4.0],
    ]
) / 6.0

_QUAD_MASS = np.array(
    [
        [4.0, 2.0, 1.0, 2.0],
        [2.0, 4.0, 2.0, 1.0],
        [1.0, 2.0, 4.0, 2.0],
        [2.0, 1.0, 2.0, 4.0],
    ]
) / 36.0


def quad_element(h: float, c: float) -> tuple[np.ndarray, np.ndarray]:
    """Stiffness (scaled by c²) and consistent mass of a square bilinear element of side h.

    Nodes are numbered counter-clockwise from the lower-left corner.
    """
    return c * c * _QUAD_STIFFNESS, h * h * _QUAD_MASS


def build_scalar_wave(
    n_per_side: int = 64, params: dict[str, float] | None = None
) -> MeshedModel:
    """Uniform n×n mesh; boundary nodes eliminated; interior nodes are the DOFs."""
    if n_per_side < 4:
        raise ParameterError(f"need at least 4 elements per side, got {n_per_side}")
    params = merge_params(SCALAR_WAVE_DEFAULTS, params)
    n = n_per_side
    side, c = params["side"], params["speed"]
    h = side / n
    ke, me = quad_element(h, c)

    # global node (i, j) -> i + (n+1) j; interior nodes numbered row by row
    dof = -np.ones((n + 1) * (n + 1), dtype=int)
    ii, jj = np.meshgrid(np.arange(1, n), np.arange(1, n), indexing="xy")
    dof[(ii + (n + 1) * jj).ravel()] = np.arange((n - 1) ** 2)

    ei, ej = np.meshgrid(np.arange(n), np.arange(n), indexing="xy")
    base = (ei + (n + 1) * ej).ravel()
    corners = np.stack([base, base + 1, base + n + 2, base + n + 1], axis=1)
    local = dof[corners]
    rows = np.repeat(local, 4, axis=1).ravel()
    cols = np.tile(local, (1, 4)).ravel()
    keep = (rows >= 0) & (cols >= 0)
    n_elements = corners.shape[0]
    k_vals = np.tile(ke.ravel(), n_elements)[keep]
    m_vals = np.tile(me.ravel(), n_elements)[keep]
    size = (n - 1) ** 2
    k = sp.coo_matrix((k_vals, (rows[keep], cols[keep])), shape=(size, size)).tocsr()
    m = sp.coo_matrix((m_vals, (rows[keep], cols[keep])), shape=(size, size)).tocsr()

    coords = np.column_stack([ii.ravel() * h, jj.ravel() * h])
    centre = side / 2.0
    in_patch = np.all(np.abs(coords - centre) <= side / 4.0 + 1e-12 * side, axis=1)
    v0 = np.where(in_patch, params["velocity"], 0.0)
    probe = int(np.argmin(np.sum((coords - centre) ** 2, axis=1)))
    px, py = coords[probe]

    def reference(t_grid: np.ndarray) -> dict[str, np.ndarray]:
        u, v = scalar_wave_reference(px, py, t_grid, params=params)
        return {"center_u_ref": u, "center_v_ref": v}

    logger.debug("scalar wave: %d x %d elements, %d DOFs", n, n, size)
    return MeshedModel(
        name="scalar_wave_2d",
        system=StructuralSystem.build(m, k),
        coordinates=coords,
        probes={"center": probe},
        u0=np.zeros(size),
        v0=v0,
        reference=reference,
        wave_speed=c,
        cfl_length=h,
        params=params,
    )


def scalar_wave_reference(
    x: float, y: float, t, n_max: int = 199, params: dict[str, float] | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Truncated double sine series of displacement and velocity; only odd m, n contribute."""
    params = merge_params(SCALAR_WAVE_DEFAULTS, params)
    side, c, amp = params["side"], params["speed"], params["velocity"]
    t = np.atleast_1d(np.asarray(t, dtype=float))
    modes = np.arange(1, n_max + 1, 2)
    mm, nn = np.meshgrid(modes, modes, indexing="ij")
    weight = (
        16.0
        * amp
        / np.pi**2
        / (mm * nn)
        * np.sin(mm * np.pi / 2)
        * np.sin(mm * np.pi / 4)
        * np.sin(nn * np.pi / 2)
        * np.sin(nn * np.pi / 4)
        * np.sin(mm * np.pi * x / side)
        * np.sin(nn * np.pi * y / side)
    ).ravel()
    mu = mu_mn(mm, nn, c, side).ravel()
    phase = np.outer(t, mu)
    u = np.sin(phase) @ (weight / mu)
    v = np.cos(phase) @ weight
    return u, v


def mu_mn(m, n, c: float = 1.0, side: float = 1.0):
    """Circular frequency of the (m, n) mode of the fixed square."""
    m = np.asarray(m, dtype=float)
    n = np.asarray(n, dtype=float)
    return c * np.pi / side * np.sqrt(m**2 + n**2)
