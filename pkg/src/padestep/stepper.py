"""Fixed-step integration with the mixed-order Padé scheme and an HHT-α reference integrator.

One step solves Q(A) z_n = P(A) z_{n-1} + sum_k C_k(A) Φ_k, where Q(x) = prod(r_i - x)
is applied as successive Newmark-like solves, one per real root and one per
conjugate pair of roots.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from padestep.errors import (
    DivergenceError,
    FactorizationError,
    ParameterError,
    PlanError,
    RootPairingError,
)
from padestep.linalg import Factorization, factor, solve
from padestep.models import HistoryRecord, State, StepperConfig, steps_for
from padestep.pade import MixedPadeScheme, mixed_scheme
from padestep.system import (
    StructuralSystem,
    force_coeffs,
    from_state_vector,
    poly_apply,
    to_state_vector,
)

logger = logging.getLogger(__name__)

HHT_ALPHA_MIN = -1.0 / 3.0


@dataclass(frozen=True, eq=False)
class StepperPlan:
    """A scheme bound to one system and one Δt.

    S(r) = r²M + rΔtC + Δt²K is factored once per root. Conjugate pairs are keyed
    by their Im > 0 member.
    """

    scheme: MixedPadeScheme
    system: StructuralSystem
    dt: float
    factorizations: dict[complex, Factorization]
    dt2_k: object

    @property
    def n_factorizations(self) -> int:
        return len(self.factorizations)


def _shifted_matrix(sys: StructuralSystem, r: complex, dt: float, dt2_k):
    s = r * r * sys.m + dt2_k
    if sys.c is not None:
        s = s + r * dt * sys.c
    return sp.csc_matrix(s) if sp.issparse(s) else np.asarray(s)


def plan(sys: StructuralSystem, cfg: StepperConfig) -> StepperPlan:
    """Build the scheme and factor S(r) once for each distinct root."""
    scheme = mixed_scheme(cfg.order, cfg.rho_inf, cfg.force_degree)
    dt = cfg.dt
    dt2_k = dt * dt * sys.k
    factorizations: dict[complex, Factorization] = {}
    for r in scheme.conjugate_pairs + [complex(x, 0.0) for x in scheme.real_roots]:
        shift = r if r.imag else r.real
        try:
            factorizations[r] = factor(_shifted_matrix(sys, shift, dt, dt2_k))
        except FactorizationError as exc:
            raise PlanError(f"cannot factor r²M + rΔtC + Δt²K at root {r}: {exc}", r) from exc
    logger.debug(
        "planned order %d rho_inf %g dt %g: %d complex and %d real factorizations",
        cfg.order,
        cfg.rho_inf,
        dt,
        len(scheme.conjugate_pairs),
        len(scheme.real_roots),
    )
    return StepperPlan(scheme=scheme, system=sys, dt=dt, factorizations=factorizations, dt2_k=dt2_k)


def build_rhs(p: StepperPlan, z_prev: np.ndarray, t_prev: float) -> np.ndarray:
    """b = P(A) z_prev + sum_k C_k(A) [dt² M⁻¹ f_k; 0]."""
    sys, dt = p.system, p.dt
    b = poly_apply(p.scheme.p, sys, dt, z_prev)
    if sys.load.is_zero:
        return b
    coeffs = force_coeffs(sys.load, t_prev, dt, p.scheme.p_f)
    zeros = np.zeros(sys.n_dof)
    for ck, fk in zip(p.scheme.load_polys, coeffs, strict=True):
        if not np.any(fk):
            continue
        phi = np.concatenate([dt * dt * solve(sys.mass_factor, fk), zeros])
        b = b + poly_apply(ck, sys, dt, phi)
    return b


def _lookup(p: StepperPlan, r: complex) -> Factorization:
    try:
        return p.factorizations[complex(r)]
    except KeyError:
        raise ParameterError(f"root {r} is not part of this plan") from None


def _first_block(p: StepperPlan, r, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    sys = p.system
    n = sys.n_dof
    if g.shape != (2 * n,):
        raise ParameterError(f"vector has shape {g.shape}, expected ({2 * n},)")
    g1, g2 = g[:n], g[n:]
    rhs = r * (sys.m @ g1) - p.dt2_k @ g2
    return solve(_lookup(p, r), rhs), g2


def solve_real_root(p: StepperPlan, r: float, g) -> np.ndarray:
    """x = (rI - A)⁻¹ g for a real root r."""
    r = float(np.real(r))
    if abs(r) < 1e-8:
        raise ZeroDivisionError(f"root {r} is too close to zero")
    x1, g2 = _first_block(p, r, np.asarray(g, dtype=float))
    return np.concatenate([x1, (x1 + g2) / r])


def solve_conjugate_pair(p: StepperPlan, r: complex, g) -> np.ndarray:
    """x = [(rI - A)(r̄I - A)]⁻¹ g for a conjugate pair, using one complex solve."""
    r = complex(r)
    if abs(r.imag) < 1e-10 * abs(r):
        raise RootPairingError(f"root {r} is real; it cannot form a conjugate pair")
    g = np.asarray(g)
    if np.iscomplexobj(g):
        raise ParameterError("conjugate-pair solve needs a real right-hand side")
    key = r if r.imag > 0 else r.conjugate()
    y1, g2 = _first_block(p, key, g.astype(float))
    y2 = (y1 + g2) / key
    y = np.concatenate([y1, y2])
    return -y.imag / key.imag


def _step(p: StepperPlan, z_prev: np.ndarray, t_prev: float) -> np.ndarray:
    x = build_rhs(p, z_prev, t_prev)
    for r in p.scheme.conjugate_pairs:
        x = solve_conjugate_pair(p, r, x)
    for r in p.scheme.real_roots:
        x = solve_real_root(p, r, x)
    return x


def advance(p: StepperPlan, state: State) -> State:
    """One step from state.t to state.t + dt."""
    z = _step(p, to_state_vector(state.u, state.v, p.dt), state.t)
    u, v = from_state_vector(z, p.dt)
    return State(t=state.t + p.dt, u=u, v=v)


def _record(sys: StructuralSystem, t: float, u, v, probes) -> HistoryRecord:
    a = sys.acceleration(t, u, v)
    if probes is None:
        return HistoryRecord(t=t, u=u.copy(), v=v.copy(), a=a)
    return HistoryRecord(t=t, u=u[probes], v=v[probes], a=a[probes])


def integrate(
    sys: StructuralSystem,
    cfg: StepperConfig,
    u0,
    v0,
    probes: list[int] | None = None,
    t0: float = 0.0,
) -> list[HistoryRecord]:
    """Run cfg.steps() steps. Record 0 is the initial state; record n follows step n.

    Times are t0 + n·dt. With ``probes`` only those DOFs are kept.
    """
    n_steps = cfg.steps()
    p = plan(sys, cfg)
    u = np.asarray(u0, dtype=float)
    v = np.asarray(v0, dtype=float)
    if u.shape != (sys.n_dof,) or v.shape != (sys.n_dof,):
        raise ParameterError(f"initial conditions must have shape ({sys.n_dof},)")

    history = [_record(sys, t0, u, v, probes)]
    z = to_state_vector(u, v, cfg.dt)
    for step in range(1, n_steps + 1):
        z = _step(p, z, t0 + (step - 1) * cfg.dt)
        if not np.all(np.isfinite(z)):
            raise DivergenceError(f"state became non-finite at step {step}", step)
        u, v = from_state_vector(z, cfg.dt)
        history.append(_record(sys, t0 + step * cfg.dt, u, v, probes))
    logger.debug("integrated %d steps of %d DOFs", n_steps, sys.n_dof)
    return history


def hht_parameters(alpha: float) -> tuple[float, float]:
    """(beta, gamma) of HHT-α."""
    return (1.0 - alpha) ** 2 / 4.0, 0.5 - alpha


def hht_integrate(
    sys: StructuralSystem,
    alpha: float,
    dt: float,
    u0,
    v0,
    n_steps: int | None = None,
    duration: float | None = None,
    probes: list[int] | None = None,
) -> list[HistoryRecord]:
    """HHT-α with β = (1-α)²/4 and γ = 1/2 - α; α = 0 is the trapezoidal rule.

    Emitted accelerations satisfy the equation of motion at the recorded state.
    """
    if not HHT_ALPHA_MIN - 1e-12 <= alpha <= 0.0:
        raise ParameterError(f"alpha must be in [-1/3, 0], got {alpha}")
    if not dt > 0.0:
        raise ParameterError(f"dt must be positive, got {dt}")
    if n_steps is None:
        if duration is None:
            raise ParameterError("either n_steps or duration is required")
        n_steps = steps_for(duration, dt)

    beta, gamma = hht_parameters(alpha)
    u = np.asarray(u0, dtype=float)
    v = np.asarray(v0, dtype=float)
    a = sys.acceleration(0.0, u, v)

    effective = sys.m + (1.0 + alpha) * beta * dt * dt * sys.k
    if sys.c is not None:
        effective = effective + (1.0 + alpha) * gamma * dt * sys.c
    lhs = factor(sp.csc_matrix(effective) if sp.issparse(effective) else effective, spd=True)

    history = [_record(sys, 0.0, u, v, probes)]
    f_prev = sys.load(0.0)
    for step in range(1, n_steps + 1):
        t = step * dt
        f_next = sys.load(t)
        u_pred = u + dt * v + dt * dt * (0.5 - beta) * a
        v_pred = v + dt * (1.0 - gamma) * a
        rhs = (
            (1.0 + alpha) * f_next
            - alpha * f_prev
            - (1.0 + alpha) * (sys.damping_force(v_pred) + sys.k @ u_pred)
            + alpha * (sys.damping_force(v) + sys.k @ u)
        )
        a = solve(lhs, rhs)
        u = u_pred + beta * dt * dt * a
        v = v_pred + gamma * dt * a
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise DivergenceError(f"state became non-finite at step {step}", step)
        history.append(_record(sys, t, u, v, probes))
        f_prev = f_next
    return history
