"""Semi-discrete equation of motion M ü + C u̇ + K u = f(t) and its state-space operator.

The state vector is z = [ů; u] with ů = dt·u̇, so that over one step of
normalized time s in [0, 1]

    dz/ds = A z + [dt² M⁻¹ f; 0],    A z = [-dt M⁻¹ C ů - dt² M⁻¹ K u; ů].
"""

import logging
from dataclasses import dataclass
from typing import Protocol

import numpy as np
import scipy.sparse as sp

from padestep.errors import ParameterError, StepAlignmentError
from padestep.linalg import Factorization, factor, is_symmetric, solve
from padestep.pade import PolyCoeffs

logger = logging.getLogger(__name__)


class TimeFunction(Protocol):
    """Scalar g(t) of a separable load term."""

    def __call__(self, t: float) -> float: ...

    @property
    def discontinuities(self) -> tuple[float, ...]: ...


@dataclass(frozen=True)
class Constant:
    value: float = 1.0

    def __call__(self, t: float) -> float:
        return self.value

    @property
    def discontinuities(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class Sine:
    """amplitude · sin(omega t + phase)."""

    amplitude: float = 1.0
    omega: float = 1.0
    phase: float = 0.0

    def __call__(self, t: float) -> float:
        return self.amplitude * np.sin(self.omega * t + self.phase)

    @property
    def discontinuities(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class Step:
    """Heaviside step of height value switched on at t0 (H(t0) = value)."""

    t0: float = 0.0
    value: float = 1.0

    def __call__(self, t: float) -> float:
        return self.value if t >= self.t0 else 0.0

    @property
    def discontinuities(self) -> tuple[float, ...]:
        return (self.t0,) if self.t0 > 0.0 else ()


@dataclass(frozen=True)
class Polynomial:
    """Sum of coefficients[i] · t^i."""

    coefficients: tuple[float, ...] = (0.0,)

    def __call__(self, t: float) -> float:
        return float(PolyCoeffs(self.coefficients)(t))

    @property
    def discontinuities(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True, eq=False)
class LoadTerm:
    """Spatial vector b times scalar time function g(t)."""

    vector: np.ndarray
    function: TimeFunction


@dataclass(frozen=True, eq=False)
class LoadModel:
    """f(t) = sum_j b_j g_j(t)."""

    n: int
    terms: tuple[LoadTerm, ...] = ()

    def __post_init__(self):
        for term in self.terms:
            if np.shape(term.vector) != (self.n,):
                raise ParameterError(
                    f"load vector has shape {np.shape(term.vector)}, expected ({self.n},)"
                )

    @classmethod
    def zero(cls, n: int) -> "LoadModel":
        return cls(n=n)

    @classmethod
    def single(cls, vector, function: TimeFunction) -> "LoadModel":
        vector = np.asarray(vector, dtype=float)
        return cls(n=vector.size, terms=(LoadTerm(vector, function),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def discontinuities(self) -> tuple[float, ...]:
        return tuple(sorted({d for term in self.terms for d in term.function.discontinuities}))

    def __call__(self, t: float) -> np.ndarray:
        f = np.zeros(self.n)
        for term in self.terms:
            f += term.vector * term.function(t)
        return f


@dataclass(frozen=True, eq=False)
class StructuralSystem:
    """Mass, damping and stiffness matrices with a load model and the cached mass factorization.

    Matrices may be dense numpy arrays or scipy sparse matrices. ``c`` is None
    for an undamped system.
    """

    m: object
    k: object
    c: object | None
    load: LoadModel
    mass_factor: Factorization

    @property
    def n_dof(self) -> int:
        return self.m.shape[0]

    @classmethod
    def build(cls, m, k, c=None, load: LoadModel | None = None) -> "StructuralSystem":
        """Validate the matrices and factor M (Cholesky for dense input)."""
        m = m if sp.issparse(m) else np.atleast_2d(np.asarray(m, dtype=float))
        k = k if sp.issparse(k) else np.atleast_2d(np.asarray(k, dtype=float))
        if c is not None and not sp.issparse(c):
            c = np.atleast_2d(np.asarray(c, dtype=float))
            if not np.any(c):
                c = None
        n = m.shape[0]
        for name, mat in (("M", m), ("K", k), ("C", c)):
            if mat is None:
                continue
            if mat.shape != (n, n):
                raise ParameterError(f"{name} has shape {mat.shape}, expected ({n}, {n})")
            if not is_symmetric(mat):
                raise ParameterError(f"{name} is not symmetric")
        load = LoadModel.zero(n) if load is None else load
        if load.n != n:
            raise ParameterError(f"load has {load.n} entries, system has {n} DOFs")
        mass_factor = factor(m, spd=True)
        logger.debug("built system with %d DOFs (%s mass)", n, mass_factor.kind)
        return cls(m=m, k=k, c=c, load=load, mass_factor=mass_factor)

    def damping_force(self, v: np.ndarray) -> np.ndarray:
        return np.zeros_like(v) if self.c is None else self.c @ v

    def acceleration(self, t: float, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """a from M a = f(t) - C v - K u."""
        return solve(self.mass_factor, self.load(t) - self.damping_force(v) - self.k @ u)


def _split(sys: StructuralSystem, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = sys.n_dof
    if z.shape != (2 * n,):
        raise ParameterError(f"state vector has shape {z.shape}, expected ({2 * n},)")
    return z[:n], z[n:]


def apply_state_operator(sys: StructuralSystem, dt: float, z) -> np.ndarray:
    """A z without forming M⁻¹."""
    z = np.asarray(z)
    ud, u = _split(sys, z)
    rhs = dt * dt * (sys.k @ u)
    if sys.c is not None:
        rhs = rhs + dt * (sys.c @ ud)
    return np.concatenate([-solve(sys.mass_factor, rhs), ud])


def poly_apply(p: PolyCoeffs, sys: StructuralSystem, dt: float, z) -> np.ndarray:
    """p(A) z by Horner's scheme."""
    z = np.asarray(z)
    _split(sys, z)
    result = p.c[-1] * z
    for coeff in reversed(p.c[:-1]):
        result = apply_state_operator(sys, dt, result) + coeff * z
    return result


def chebyshev_nodes(count: int) -> np.ndarray:
    """Chebyshev–Gauss points mapped to [0, 1]."""
    j = np.arange(count)
    return 0.5 - 0.5 * np.cos((2 * j + 1) * np.pi / (2 * count))


def force_coeffs(load: LoadModel, t_start: float, dt: float, p_f: int) -> np.ndarray:
    """Expand f over one step about its midpoint: f(t_start + s dt) ≈ sum_k f_k (s - 1/2)^k.

    Returns an array of shape (p_f + 1, n). Exact for polynomial loads of degree <= p_f.
    """
    if p_f < 0:
        raise ParameterError(f"p_f must be non-negative, got {p_f}")
    margin = 1e-9 * dt
    for d in load.discontinuities:
        if t_start + margin < d < t_start + dt - margin:
            raise StepAlignmentError(
                f"load discontinuity at t={d} falls inside the step [{t_start}, {t_start + dt}]"
            )
    if load.is_zero:
        return np.zeros((p_f + 1, load.n))

    s = chebyshev_nodes(p_f + 1)
    vander = np.vander(s - 0.5, p_f + 1, increasing=True)
    samples = np.array([load(t_start + sj * dt) for sj in s])
    return np.linalg.solve(vander, samples)


def to_state_vector(u: np.ndarray, v: np.ndarray, dt: float) -> np.ndarray:
    return np.concatenate([dt * np.asarray(v, dtype=float), np.asarray(u, dtype=float)])


def from_state_vector(z: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Split z into (u, physical velocity)."""
    n = z.size // 2
    return z[n:], z[:n] / dt


def mechanical_energy(
    sys: StructuralSystem, u: np.ndarray, v: np.ndarray, t: float | None = None
) -> float:
    """½vᵀMv + ½uᵀKu, minus f(t)ᵀu when a time is given."""
    energy = 0.5 * float(v @ (sys.m @ v)) + 0.5 * float(u @ (sys.k @ u))
    if t is not None:
        energy -= float(sys.load(t) @ u)
    return energy
