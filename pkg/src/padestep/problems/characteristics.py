"""Exact velocity of a layered elastic rod under an end step load, by tracing wavefronts.

The rod occupies [0, sum of segment lengths], is fixed at x = 0 and loaded by a
step traction p at the far end. Each front carries a velocity jump dv; a front
moving in direction d (+1 toward the loaded end) carries the stress jump
-d·Z·dv with impedance Z = ρc.
"""

import heapq
import logging
from dataclasses import dataclass

import numpy as np

from padestep.errors import ParameterError

logger = logging.getLogger(__name__)

MAX_LEGS = 200_000


@dataclass(frozen=True)
class Segment:
    """A homogeneous piece of the rod."""

    start: float
    end: float
    density: float
    modulus: float

    @property
    def speed(self) -> float:
        return float(np.sqrt(self.modulus / self.density))

    @property
    def impedance(self) -> float:
        return self.density * self.speed

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class Leg:
    """A front crossing one segment between t0 and t1."""

    segment: int
    direction: int
    t0: float
    t1: float
    dv: float


class LayeredRod:
    """Wavefront lattice of a fixed/loaded layered rod up to a final time."""

    def __init__(self, segments: list[Segment], load: float, t_end: float):
        if not segments:
            raise ParameterError("at least one segment is required")
        for left, right in zip(segments, segments[1:], strict=False):
            if abs(left.end - right.start) > 1e-12 * max(abs(left.end), 1.0):
                raise ParameterError("segments must be contiguous")
        if t_end < 0:
            raise ParameterError(f"t_end must be non-negative, got {t_end}")
        self.segments = segments
        self.load = load
        self.t_end = t_end
        self.legs = self._trace()

    @property
    def length(self) -> float:
        return self.segments[-1].end - self.segments[0].start

    def _trace(self) -> list[Leg]:
        last = len(self.segments) - 1
        floor = 1e-12 * abs(self.load) / max(s.impedance for s in self.segments)
        time_scale = min(s.length / s.speed for s in self.segments)
        pending: dict[tuple[int, int, int], list[float]] = {}
        heap: list[tuple[float, int, int, int]] = []

        def emit(t0: float, segment: int, direction: int, dv: float) -> None:
            if abs(dv) < floor or t0 > self.t_end:
                return
            key = (round(t0 / time_scale * 1e9), segment, direction)
            if key in pending:
                pending[key][1] += dv
            else:
                pending[key] = [t0, dv]
                heapq.heappush(heap, (t0, *key))

        emit(0.0, last, -1, self.load / self.segments[last].impedance)
        legs: list[Leg] = []
        while heap:
            _, *key = heapq.heappop(heap)
            t0, dv = pending.pop(tuple(key))
            _, segment, direction = key
            seg = self.segments[segment]
            t1 = t0 + seg.length / seg.speed
            legs.append(Leg(segment, direction, t0, t1, dv))
            if len(legs) > MAX_LEGS:
                raise ParameterError(f"more than {MAX_LEGS} wavefront legs; shorten t_end")

            neighbour = segment + direction
            if direction > 0 and segment == last:
                emit(t1, segment, -1, dv)
            elif direction < 0 and segment == 0:
                emit(t1, segment, +1, -dv)
            else:
                za = seg.impedance
                zb = self.segments[neighbour].impedance
                emit(t1, segment, -direction, (za - zb) / (za + zb) * dv)
                emit(t1, neighbour, direction, 2.0 * za / (za + zb) * dv)
        logger.debug("traced %d wavefront legs up to t=%g", len(legs), self.t_end)
        return legs

    def _locate(self, x: float) -> int:
        for i, seg in enumerate(self.segments):
            if seg.start - 1e-12 <= x <= seg.end + 1e-12:
                return i
        raise ParameterError(f"x={x} is outside the rod [0, {self.length}]")

    def _arrival(self, leg: Leg, x: float) -> float:
        seg = self.segments[leg.segment]
        entry = seg.start if leg.direction > 0 else seg.end
        return leg.t0 + abs(x - entry) / seg.speed

    def front_arrivals(self, x: float) -> list[float]:
        """Times at which a front passes x."""
        index = self._locate(x)
        times = {self._arrival(leg, x) for leg in self.legs if leg.segment == index}
        return sorted(t for t in times if t <= self.t_end)

    def velocity(self, x: float, t_grid) -> np.ndarray:
        t = np.asarray(t_grid, dtype=float)
        index = self._locate(x)
        v = np.zeros_like(t)
        for leg in self.legs:
            if leg.segment == index:
                v += leg.dv * (t >= self._arrival(leg, x))
        return v

    def stress(self, x: float, t_grid) -> np.ndarray:
        t = np.asarray(t_grid, dtype=float)
        index = self._locate(x)
        z = self.segments[index].impedance
        s = np.zeros_like(t)
        for leg in self.legs:
            if leg.segment == index:
                s += -leg.direction * z * leg.dv * (t >= self._arrival(leg, x))
        return s


def off_front_rms(
    t_grid, numeric, exact, arrivals: list[float], half_window: float
) -> float:
    """RMS of numeric - exact over samples farther than half_window from every arrival."""
    t = np.asarray(t_grid, dtype=float)
    mask = np.ones_like(t, dtype=bool)
    for ta in arrivals:
        mask &= np.abs(t - ta) > half_window
    if not np.any(mask):
        raise ParameterError("every sample lies inside a wavefront window")
    diff = np.asarray(numeric, dtype=float)[mask] - np.asarray(exact, dtype=float)[mask]
    return float(np.sqrt(np.mean(diff**2)))
