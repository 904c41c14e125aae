"""Stiff three-mass chain with a prescribed support motion u1(t) = sin(ωp t).

The massless support DOF is eliminated by moving k1·u1(t) to the load side,
leaving a 2-DOF system in (u2, u3) with a very stiff first spring.
"""

import numpy as np

from padestep.linalg import generalized_eig
from padestep.models import HistoryRecord
from padestep.problems.base import MeshedModel, merge_params
from padestep.system import LoadModel, Sine, StructuralSystem

THREE_DOF_DEFAULTS = {
    "k1": 1.0e7,
    "k2": 1.0,
    "m2": 1.0,
    "m3": 1.0,
    "omega_p": 1.2,
}


def _matrices(params: dict[str, float]) -> tuple[np.ndarray, np.ndarray]:
    k1, k2 = params["k1"], params["k2"]
    m = np.diag([params["m2"], params["m3"]])
    k = np.array([[k1 + k2, -k2], [-k2, k2]])
    return m, k


def build_three_dof(params: dict[str, float] | None = None) -> MeshedModel:
    params = merge_params(THREE_DOF_DEFAULTS, params)
    m, k = _matrices(params)
    load = LoadModel.single([params["k1"], 0.0], Sine(1.0, params["omega_p"]))

    def reference(t_grid: np.ndarray) -> dict[str, np.ndarray]:
        u, v, _ = three_dof_reference(t_grid, params)
        return {
            "u2_u_ref": u[:, 0],
            "u2_v_ref": v[:, 0],
            "u3_u_ref": u[:, 1],
            "u3_v_ref": v[:, 1],
        }

    return MeshedModel(
        name="three_dof",
        system=StructuralSystem.build(m, k, load=load),
        coordinates=np.array([1.0, 2.0]),
        probes={"u2": 0, "u3": 1},
        u0=np.zeros(2),
        v0=np.zeros(2),
        reference=reference,
        params=params,
    )


def _modal_response(t, omega, force, omega_p):
    """Zero-IC response of q'' + ω² q = F sin(ωp t), split into forced and free parts."""
    scale = force / (omega**2 - omega_p**2)
    forced = (
        scale * np.sin(omega_p * t),
        scale * omega_p * np.cos(omega_p * t),
        -scale * omega_p**2 * np.sin(omega_p * t),
    )
    free = (
        -scale * omega_p / omega * np.sin(omega * t),
        -scale * omega_p * np.cos(omega * t),
        scale * omega_p * omega * np.sin(omega * t),
    )
    return forced, free


def three_dof_modal(
    t_grid, params: dict[str, float] | None = None, free_modes: tuple[int, ...] = (0, 1)
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mode superposition via the generalized eigensolver.

    Every mode contributes its forced part; only modes listed in ``free_modes``
    also contribute their free-vibration part.
    """
    params = merge_params(THREE_DOF_DEFAULTS, params)
    m, k = _matrices(params)
    w2, phi = generalized_eig(k, m)
    t = np.asarray(t_grid, dtype=float)
    b = np.array([params["k1"], 0.0])
    out = [np.zeros((t.size, 2)) for _ in range(3)]
    for j in range(2):
        forced, free = _modal_response(t, np.sqrt(w2[j]), phi[:, j] @ b, params["omega_p"])
        for i in range(3):
            q = forced[i] + (free[i] if j in free_modes else 0.0)
            out[i] += np.outer(q, phi[:, j])
    return out[0], out[1], out[2]


def three_dof_reference(
    t_grid, params: dict[str, float] | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Response with the free vibration of the stiff mode filtered out.

    Closed-form eigenpairs of the 2×2 system; the low mode is taken from the
    determinant so it does not lose digits to cancellation.
    """
    params = merge_params(THREE_DOF_DEFAULTS, params)
    k1, k2, m2, m3 = params["k1"], params["k2"], params["m2"], params["m3"]
    # mass-scaled stiffness K~ = M^-1/2 K M^-1/2
    a, b, d = (k1 + k2) / m2, -k2 / np.sqrt(m2 * m3), k2 / m3
    high = 0.5 * (a + d) + np.sqrt(0.25 * (a - d) ** 2 + b * b)
    low = (a * d - b * b) / high
    t = np.asarray(t_grid, dtype=float)
    u = np.zeros((t.size, 2))
    v = np.zeros((t.size, 2))
    acc = np.zeros((t.size, 2))
    scale = np.array([1.0 / np.sqrt(m2), 1.0 / np.sqrt(m3)])
    for index, lam in enumerate((low, high)):
        vec = np.array([-b, a - lam]) if index == 0 else np.array([d - lam, -b])
        vec /= np.linalg.norm(vec)
        mode = scale * vec
        forced, free = _modal_response(t, np.sqrt(lam), mode[0] * k1, params["omega_p"])
        keep_free = index == 0
        for out, f_part, h_part in zip((u, v, acc), forced, free, strict=True):
            out += np.outer(f_part + (h_part if keep_free else 0.0), mode)
    return u, v, acc


def support_motion(t, params: dict[str, float]) -> np.ndarray:
    return np.sin(params["omega_p"] * np.asarray(t, dtype=float))


def reaction_force(model: MeshedModel, u, t) -> float:
    """Support reaction R1 = k1 (u1(t) - u2) of the massless first DOF."""
    u = np.asarray(u, dtype=float)
    return float(model.params["k1"] * (support_motion(t, model.params) - u[0]))


def reaction_history(model: MeshedModel, history: list[HistoryRecord]) -> np.ndarray:
    """R1 at every record; records must hold the full state (or u2 first)."""
    return np.array([reaction_force(model, rec.u, rec.t) for rec in history])
