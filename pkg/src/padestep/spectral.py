"""Dissipation and dispersion of the mixed-order scheme and of HHT-α for undamped free vibration.

All quantities are functions of x = Δt/T. Phases use a shifted principal
value so that the discrete phase per step increases continuously from 0 to 2π
as x grows past 1/2.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from padestep.errors import NumericalError, ParameterError
from padestep.models import SpectralCurvePoint
from padestep.pade import MixedPadeScheme, amplification_factor

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
HHT_ALPHA_MIN = -1.0 / 3.0


@dataclass(frozen=True)
class HHTTarget:
    """HHT-α with β = (1-α)²/4 and γ = 1/2 - α."""

    alpha: float

    def __post_init__(self):
        _check_alpha(self.alpha)

    @property
    def rho_inf(self) -> float:
        return alpha_to_rho_infty(self.alpha)


SpectralTarget = MixedPadeScheme | HHTTarget


def _check_alpha(alpha: float) -> None:
    if not HHT_ALPHA_MIN - 1e-12 <= alpha <= 0.0:
        raise ParameterError(f"alpha must be in [-1/3, 0], got {alpha}")


def _check_x(x: float, strict: bool = False) -> None:
    if x < 0.0 or (strict and x == 0.0) or not math.isfinite(x):
        bound = "> 0" if strict else ">= 0"
        raise ParameterError(f"x = dt/T must be {bound}, got {x}")


def spectral_radius(scheme: MixedPadeScheme, x: float) -> float:
    _check_x(x)
    return abs(amplification_factor(scheme, x))


def shifted_phase(r: complex, x: float) -> float:
    """arg R, plus 2π when Im R < 0 or when x > 1."""
    if r == 0:
        raise ParameterError("phase of a zero amplification factor is undefined")
    arg = math.atan2(r.imag, r.real)
    if r.imag < 0:
        return arg + TWO_PI
    if x > 1:
        return arg + TWO_PI
    return arg


def hht_shifted_phase(r: complex, x: float) -> float | None:
    """Phase convention used for HHT-α: undefined (None) above x = 1."""
    if r == 0:
        raise ParameterError("phase of a zero amplification factor is undefined")
    arg = math.atan2(r.imag, r.real)
    if r.imag < 0:
        return arg + TWO_PI
    if x > 1:
        return None
    return arg


def _phase(scheme: MixedPadeScheme, x: float) -> tuple[float, float]:
    _check_x(x, strict=True)
    r = amplification_factor(scheme, x)
    phase = shifted_phase(r, x)
    if phase == 0.0:
        raise NumericalError(f"discrete phase vanishes at x={x}")
    return abs(r), phase


def period_error(scheme: MixedPadeScheme, x: float) -> float:
    """Relative period error T̄/T - 1 = 2πx / phase - 1."""
    _, phase = _phase(scheme, x)
    return TWO_PI * x / phase - 1.0


def damping_ratio(scheme: MixedPadeScheme, x: float) -> float:
    """Numerical damping ratio -ln(ρ) / phase."""
    rho, phase = _phase(scheme, x)
    return -math.log(rho) / phase


def amplitude_ratio(scheme: MixedPadeScheme, x: float, n_periods: float) -> float:
    """Remaining amplitude after n_periods periods: ρ^(N_p/x)."""
    _check_x(x, strict=True)
    return spectral_radius(scheme, x) ** (n_periods / x)


def hht_amplification(alpha: float, x: float) -> complex:
    """Principal root of the HHT-α characteristic cubic, returned as Re + i|Im|."""
    _check_alpha(alpha)
    _check_x(x)
    beta = (1.0 - alpha) ** 2 / 4.0
    gamma = 0.5 - alpha
    o = TWO_PI * x
    d = 1.0 + (1.0 + alpha) * beta * o**2
    a1 = 1.0 - o**2 * ((1.0 + alpha) * (gamma + 0.5) - alpha * beta) / (2.0 * d)
    a2 = 1.0 - o**2 * (gamma - 0.5 + 2.0 * alpha * (gamma - beta)) / d
    a3 = alpha * o**2 * (beta - gamma + 0.5) / d
    roots = np.polynomial.polynomial.polyroots([-a3, a2, -2.0 * a1, 1.0]).astype(complex)
    magnitudes = np.abs(roots)
    top = magnitudes.max()
    candidates = [r for r, m in zip(roots, magnitudes, strict=True) if m >= top - 1e-12]
    best = max(candidates, key=lambda r: abs(r.imag))
    return complex(best.real, abs(best.imag))


def _hht_phase(alpha: float, x: float) -> tuple[float, float | None]:
    _check_x(x, strict=True)
    r = hht_amplification(alpha, x)
    return abs(r), hht_shifted_phase(r, x)


def hht_period_error(alpha: float, x: float) -> float | None:
    _, phase = _hht_phase(alpha, x)
    if not phase:
        return None
    return TWO_PI * x / phase - 1.0


def hht_damping_ratio(alpha: float, x: float) -> float | None:
    rho, phase = _hht_phase(alpha, x)
    if not phase:
        return None
    return -math.log(rho) / phase


def hht_amplitude_ratio(alpha: float, x: float, n_periods: float) -> float:
    """ρ^(N_p/x), the same exponent as the mixed-order scheme."""
    _check_x(x, strict=True)
    return abs(hht_amplification(alpha, x)) ** (n_periods / x)


def alpha_to_rho_infty(alpha: float) -> float:
    """High-frequency spectral radius (1+α)/(1-α) of HHT-α."""
    if alpha == 1.0:
        raise ParameterError("alpha = 1 has no spectral radius")
    return (1.0 + alpha) / (1.0 - alpha)


def rho_infty_to_alpha(rho_inf: float) -> float:
    """Inverse map (ρ-1)/(ρ+1), clamped to the HHT range [-1/3, 0]."""
    if not 0.0 <= rho_inf <= 1.0:
        raise ParameterError(f"rho_inf must be in [0, 1], got {rho_inf}")
    alpha = (rho_inf - 1.0) / (rho_inf + 1.0)
    if alpha < HHT_ALPHA_MIN:
        logger.warning(
            "rho_inf %g is below the HHT range; using alpha = -1/3 (rho_inf 0.5)", rho_inf
        )
        return HHT_ALPHA_MIN
    return alpha


def _point(target: SpectralTarget, x: float) -> SpectralCurvePoint:
    if x == 0.0:
        return SpectralCurvePoint(x=0.0, rho=1.0, phase=None, period_error=0.0, damping_ratio=0.0)
    if isinstance(target, HHTTarget):
        rho, phase = _hht_phase(target.alpha, x)
    else:
        r = amplification_factor(target, x)
        rho, phase = abs(r), shifted_phase(r, x)
    if not phase:
        return SpectralCurvePoint(x=x, rho=rho, phase=None, period_error=None, damping_ratio=None)
    return SpectralCurvePoint(
        x=x,
        rho=rho,
        phase=phase,
        period_error=TWO_PI * x / phase - 1.0,
        damping_ratio=-math.log(rho) / phase,
    )


def sweep(target: SpectralTarget, x_grid) -> list[SpectralCurvePoint]:
    """Evaluate every measure on a grid of Δt/T values, in ascending x."""
    xs = sorted(float(x) for x in x_grid)
    for x in xs:
        _check_x(x)
    return [_point(target, x) for x in xs]


def log_grid(x_min: float, x_max: float, points: int) -> np.ndarray:
    if not (0.0 < x_min < x_max) or points < 2:
        raise ParameterError(
            f"need 0 < x_min < x_max and at least 2 points, got {x_min}, {x_max}, {points}"
        )
    return np.geomspace(x_min, x_max, points)


def max_step_ratio(
    target: SpectralTarget, tolerance: float, x_max: float = 0.5, points: int = 400
) -> float:
    """Largest Δt/T in (0, x_max] whose relative period error stays within tolerance."""
    if tolerance <= 0.0:
        raise ParameterError(f"tolerance must be positive, got {tolerance}")
    if not 0.0 < x_max <= 1.0:
        raise ParameterError(f"x_max must be in (0, 1], got {x_max}")

    def excess(x: float) -> float:
        error = _point(target, x).period_error
        return math.inf if error is None else abs(error) - tolerance

    grid = np.geomspace(1e-4, x_max, points)
    values = [excess(x) for x in grid]
    if values[0] > 0.0:
        raise ParameterError(f"period error exceeds {tolerance} even at dt/T = {grid[0]}")
    for i in range(1, len(grid)):
        if values[i] > 0.0:
            return float(brentq(excess, grid[i - 1], grid[i], xtol=1e-12))
    return x_max
