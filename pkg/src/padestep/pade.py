"""Mixed-order Padé expansions of the exponential and their load-coefficient polynomials.

A scheme of denominator order M blends the diagonal (M, M) expansion with the
first sub-diagonal (M-1, M) expansion, weighted by the requested high-frequency
spectral radius rho_inf:

    P = rho_inf * P_{M/M} + (1 - rho_inf) * P_{(M-1)/M}

and likewise for Q. Polynomials are stored lowest power first.
"""

import logging
from dataclasses import dataclass

import numpy as np

from padestep.errors import ConsistencyError, NumericalError, ParameterError, RootPairingError
from padestep.models import MAX_ORDER, max_pf

logger = logging.getLogger(__name__)

PAIR_TOL = 1e-10
MIN_ROOT = 1e-8
DIVISION_TOL = 1e-10


@dataclass(frozen=True)
class PolyCoeffs:
    """Real polynomial c[0] + c[1] x + ... + c[N] x^N."""

    c: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(v) for v in self.c) or (0.0,)
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "c", coeffs)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __call__(self, x):
        """Evaluate by Horner's scheme; works on scalars and numpy arrays."""
        result = self.c[-1] * np.ones_like(x) if isinstance(x, np.ndarray) else self.c[-1]
        for coeff in reversed(self.c[:-1]):
            result = result * x + coeff
        return result

    def padded(self, length: int) -> np.ndarray:
        """Coefficients as a float array zero-padded to the given length."""
        out = np.zeros(max(length, len(self.c)))
        out[: len(self.c)] = self.c
        return out


def _check_orders(low: int, order: int) -> None:
    if not (0 <= low <= order <= MAX_ORDER):
        raise ParameterError(
            f"Padé orders must satisfy 0 <= L <= M <= {MAX_ORDER}, got ({low}, {order})"
        )


def pade_numerator(low: int, order: int) -> PolyCoeffs:
    """Numerator of the (L, M) Padé expansion of e^x.

    Coefficient i is (M+L-i)! / (i! (L-i)!), built by a ratio recurrence.
    """
    _check_orders(low, order)
    coeff = float(np.prod(np.arange(low + 1, order + low + 1, dtype=float)))
    coeffs = [coeff]
    for i in range(low):
        coeff = coeff * (low - i) / ((order + low - i) * (i + 1))
        coeffs.append(coeff)
    return PolyCoeffs(tuple(coeffs))


def pade_denominator(low: int, order: int) -> PolyCoeffs:
    """Denominator of the (L, M) Padé expansion of e^x.

    Coefficient i is (M!/L!) (M+L-i)! / (i! (M-i)!) (-1)^i; the leading one is (-1)^M.
    """
    _check_orders(low, order)
    coeff = float(np.prod(np.arange(low + 1, order + low + 1, dtype=float)))
    coeffs = [coeff]
    for i in range(order):
        coeff = -coeff * (order - i) / ((order + low - i) * (i + 1))
        coeffs.append(coeff)
    return PolyCoeffs(tuple(coeffs))


def mix(order: int, rho_inf: float, *, low: int | None = None) -> tuple[PolyCoeffs, PolyCoeffs]:
    """Blend the (M, M) and (M-1, M) expansions with weight rho_inf."""
    if order < 1:
        raise ParameterError(f"order must be at least 1, got {order}")
    if low is not None and low != order - 1:
        raise ParameterError(
            f"only mixing of ({order}, {order}) with ({order - 1}, {order}) is supported, "
            f"got sub-diagonal order {low}"
        )
    if not 0.0 <= rho_inf <= 1.0:
        raise ParameterError(f"rho_inf must be in [0, 1], got {rho_inf}")

    width = order + 1
    p = rho_inf * pade_numerator(order, order).padded(width) + (
        1.0 - rho_inf
    ) * pade_numerator(order - 1, order).padded(width)
    q = rho_inf * pade_denominator(order, order).padded(width) + (
        1.0 - rho_inf
    ) * pade_denominator(order - 1, order).padded(width)
    q[-1] = (-1.0) ** order
    return PolyCoeffs(tuple(p)), PolyCoeffs(tuple(q))


def q_roots(q: PolyCoeffs) -> list[complex]:
    """Roots r_i of Q with Q(x) = prod(r_i - x), paired and ordered deterministically.

    Conjugate pairs come first by ascending |Im| with the Im > 0 member leading,
    then real roots ascending.
    """
    if q.degree < 1:
        raise ParameterError("denominator must have degree at least 1")
    if abs(q.c[-1] - (-1.0) ** q.degree) > 1e-12:
        raise ParameterError(f"leading coefficient must be (-1)^{q.degree}, got {q.c[-1]}")

    raw = np.polynomial.polynomial.polyroots(np.asarray(q.c))
    if np.any(np.abs(raw) < MIN_ROOT):
        raise NumericalError("denominator has a root at the origin")

    reals: list[float] = []
    upper: list[complex] = []
    lower: list[complex] = []
    for r in np.atleast_1d(raw).astype(complex):
        if abs(r.imag) <= PAIR_TOL * abs(r):
            reals.append(float(r.real))
        elif r.imag > 0:
            upper.append(complex(r))
        else:
            lower.append(complex(r))

    if len(upper) != len(lower):
        raise RootPairingError(f"{len(upper)} roots above the real axis but {len(lower)} below")

    pairs: list[complex] = []
    for r in upper:
        distances = [abs(r - s.conjugate()) for s in lower]
        j = int(np.argmin(distances))
        if distances[j] > PAIR_TOL * abs(r):
            raise RootPairingError(f"root {r} has no conjugate partner")
        mate = lower.pop(j)
        pairs.append((r + mate.conjugate()) / 2.0)

    pairs.sort(key=lambda r: (r.imag, r.real))
    ordered: list[complex] = []
    for r in pairs:
        ordered.extend([r, r.conjugate()])
    ordered.extend(complex(r, 0.0) for r in sorted(reals))
    return ordered


def _divide_by_x(coeffs: np.ndarray, scale: float, k: int) -> np.ndarray:
    if abs(coeffs[0]) > DIVISION_TOL * scale:
        raise ConsistencyError(
            f"load polynomial {k} does not divide by x (remainder {coeffs[0]:.3e}); "
            "force expansion degree too high for this approximation order"
        )
    return coeffs[1:]


def load_polys(p: PolyCoeffs, q: PolyCoeffs, p_f: int) -> list[PolyCoeffs]:
    """Scalar-coefficient forms of the load matrices C_0..C_{p_f}.

    C_0 = (P - Q)/x and C_k = (k C_{k-1} + (-1/2)^k (P - (-1)^k Q))/x.
    """
    if p_f < 0:
        raise ParameterError(f"p_f must be non-negative, got {p_f}")
    order = q.degree
    if p_f > 2 * order - 2:
        raise ConsistencyError(
            f"p_f={p_f} exceeds L+M-1={2 * order - 2} for order {order}; "
            "the load polynomials would not divide exactly"
        )

    width = order + 1
    pc = p.padded(width)
    qc = q.padded(width)
    scale = float(np.max(np.abs(pc)))

    current = _divide_by_x(pc - qc, scale, 0)
    polys = [PolyCoeffs(tuple(current))]
    for k in range(1, p_f + 1):
        numerator = np.zeros(width)
        numerator[: current.size] = k * current
        numerator += (-0.5) ** k * (pc - (-1.0) ** k * qc)
        current = _divide_by_x(numerator, scale, k)
        polys.append(PolyCoeffs(tuple(current)))
    return polys


@dataclass(frozen=True)
class MixedPadeScheme:
    """An immutable mixed-order scheme: P, Q, the roots of Q and the load polynomials."""

    order: int
    rho_inf: float
    p: PolyCoeffs
    q: PolyCoeffs
    roots: tuple[complex, ...]
    load_polys: tuple[PolyCoeffs, ...]
    p_f: int

    @property
    def low(self) -> int:
        return self.order - 1

    @property
    def conjugate_pairs(self) -> list[complex]:
        """Upper members of the conjugate root pairs, in solve order."""
        return [r for r in self.roots if r.imag > 0]

    @property
    def real_roots(self) -> list[float]:
        return [r.real for r in self.roots if r.imag == 0]


def mixed_scheme(order: int, rho_inf: float, p_f: int | None = None) -> MixedPadeScheme:
    """Build and verify a mixed-order scheme."""
    if not 1 <= order <= MAX_ORDER:
        raise ParameterError(f"order must be in [1, {MAX_ORDER}], got {order}")
    p, q = mix(order, rho_inf)
    p_f = max_pf(order) if p_f is None else p_f

    if abs(p.c[0] - q.c[0]) > 1e-13 * abs(q.c[0]):
        raise ConsistencyError("P(0) and Q(0) differ")
    p1 = p.c[1] if p.degree >= 1 else 0.0
    if abs((p1 - q.c[1]) - p.c[0]) > 1e-12 * abs(p.c[0]):
        raise ConsistencyError("expansion is not first-order consistent with e^x")

    roots = q_roots(q)
    unstable = [r for r in roots if r.real <= 0.0]
    if unstable:
        logger.warning(
            "order %d, rho_inf %g: denominator roots %s have non-positive real part",
            order,
            rho_inf,
            unstable,
        )

    polys = load_polys(p, q, p_f)
    logger.debug("scheme order=%d rho_inf=%g p_f=%d roots=%s", order, rho_inf, p_f, roots)
    return MixedPadeScheme(
        order=order,
        rho_inf=rho_inf,
        p=p,
        q=q,
        roots=tuple(roots),
        load_polys=tuple(polys),
        p_f=p_f,
    )


def amplification_factor(scheme: MixedPadeScheme, x):
    """R = P(i 2 pi x) / Q(i 2 pi x) for x = dt/T (scalar or array)."""
    lam = 2j * np.pi * np.asarray(x, dtype=float)
    num = scheme.p(lam)
    den = scheme.q(lam)
    if np.any(np.abs(den) < 1e-300):
        raise ConsistencyError("denominator vanishes on the imaginary axis")
    result = num / den
    return complex(result) if np.ndim(result) == 0 else result
