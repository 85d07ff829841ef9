"""
Morse-Smale maps of the circle and their action on subcontinua

Points of S^1 = R/Z are floats in [0, 1). The map family is the lift
F(x) = x + A*sin(2*pi*k*x), optionally followed by the reflection x -> -x.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..config import config
from ..errors import ConfigError, ConvergenceError, PreconditionError

logger = logging.getLogger(__name__)

CirclePoint = float


class Orientation(Enum):
    PRESERVING = "preserving"
    REVERSING = "reversing"


class Stability(Enum):
    ATTRACTOR = "attractor"
    REPELLER = "repeller"


class ContinuumKind(Enum):
    POINT = "point"
    ARC = "arc"
    FULL = "full"


def normalize(x: float) -> float:
    """Reduce x into [0, 1)"""
    y = x % 1.0
    # -1e-17 % 1.0 rounds up to 1.0
    return 0.0 if y >= 1.0 else y


def normalize_array(x: np.ndarray) -> np.ndarray:
    y = np.mod(x, 1.0)
    return np.where(y >= 1.0, 0.0, y)


def circle_distance(x, y):
    """Arc-length distance on S^1, in [0, 1/2]. Works on scalars and arrays."""
    d = np.mod(np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)), 1.0)
    out = np.minimum(d, 1.0 - d)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class CircleContinuum:
    """A point, an arc swept counterclockwise from a to b, or the full circle"""
    kind: ContinuumKind
    a: float = 0.0
    b: float = 0.0

    @classmethod
    def point(cls, p: float) -> 'CircleContinuum':
        p = normalize(p)
        return cls(ContinuumKind.POINT, p, p)

    @classmethod
    def arc(cls, a: float, b: float) -> 'CircleContinuum':
        a, b = normalize(a), normalize(b)
        if a == b:
            raise PreconditionError(f"Degenerate arc [{a}, {b}]: use point() or full()")
        return cls(ContinuumKind.ARC, a, b)

    @classmethod
    def full(cls) -> 'CircleContinuum':
        return cls(ContinuumKind.FULL, 0.0, 0.0)

    @property
    def length(self) -> float:
        if self.kind is ContinuumKind.POINT:
            return 0.0
        if self.kind is ContinuumKind.FULL:
            return 1.0
        return (self.b - self.a) % 1.0

    @property
    def wraps(self) -> bool:
        """True for arcs passing through 0 in their interior"""
        return self.kind is ContinuumKind.ARC and self.a > self.b

    def start_length(self) -> Tuple[float, float]:
        return self.a, self.length

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.distance_to(x) <= tol

    def distance_to(self, x: float) -> float:
        """Circle distance from x to the nearest point of this continuum"""
        if self.kind is ContinuumKind.FULL:
            return 0.0
        offset = (x - self.a) % 1.0
        length = self.length
        if offset <= length:
            return 0.0
        return min(offset - length, 1.0 - offset)

    def sample(self, eta: float) -> np.ndarray:
        """Points of the continuum with spacing at most eta"""
        length = self.length
        count = max(int(math.ceil(length / eta)), 1) + 1
        if self.kind is ContinuumKind.FULL:
            return np.linspace(0.0, 1.0, count)[:-1]
        return normalize_array(self.a + np.linspace(0.0, length, count))

    def to_dict(self) -> Dict[str, Any]:
        if self.kind is ContinuumKind.POINT:
            return {'type': 'point', 'p': self.a}
        if self.kind is ContinuumKind.FULL:
            return {'type': 'full'}
        return {'type': 'arc', 'a': self.a, 'b': self.b}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'CircleContinuum':
        kind = payload.get('type')
        if kind == 'point':
            return cls.point(float(payload['p']))
        if kind == 'arc':
            return cls.arc(float(payload['a']), float(payload['b']))
        if kind == 'full':
            return cls.full()
        raise ConfigError(f"Unknown continuum type: {kind!r}")


@dataclass(frozen=True)
class PeriodicPoint:
    coordinate: float
    stability: Stability
    period: int = 1


@dataclass(frozen=True)
class MorseSmaleCircleMap:
    """f(x) = x + A*sin(2*pi*k*x) mod 1, reflected when orientation is reversing

    Attributes:
        pairs: Number k of attractor-repeller pairs
        amplitude: A, with 0 < 2*pi*k*A < 1
        orientation: preserving or reversing
    """
    pairs: int = 1
    amplitude: float = 0.1
    orientation: Orientation = Orientation.PRESERVING

    def __post_init__(self):
        if isinstance(self.orientation, str):
            object.__setattr__(self, 'orientation', Orientation(self.orientation))
        if not isinstance(self.pairs, int) or self.pairs < 1:
            raise PreconditionError(f"pairs must be a positive integer, got {self.pairs!r}")
        if not 0.0 < 2.0 * math.pi * self.pairs * self.amplitude < 1.0:
            raise PreconditionError(
                f"amplitude {self.amplitude} violates 0 < 2*pi*k*A < 1 for k={self.pairs}")

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'MorseSmaleCircleMap':
        """Build from {"kind": "circle_ms", "k": int, "amplitude": real, "orientation": ...}"""
        if payload.get('kind', 'circle_ms') != 'circle_ms':
            raise ConfigError(f"Unsupported map kind: {payload.get('kind')!r}")
        try:
            return cls(int(payload.get('k', 1)), float(payload.get('amplitude', 0.1)),
                       Orientation(payload.get('orientation', 'preserving')))
        except (ValueError, PreconditionError) as exc:
            raise ConfigError(f"Invalid circle map: {exc}") from exc

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': 'circle_ms', 'k': self.pairs, 'amplitude': self.amplitude,
                'orientation': self.orientation.value}

    @property
    def reversing(self) -> bool:
        return self.orientation is Orientation.REVERSING

    def lipschitz_bound(self) -> float:
        return 1.0 + 2.0 * math.pi * self.pairs * self.amplitude

    def _on_fixed_grid(self, x: float) -> bool:
        # zeros of sin(2*pi*k*x) are the points j/(2k)
        return (2 * self.pairs * x) % 1.0 == 0.0

    # ---- lift ---------------------------------------------------------

    def lift(self, x):
        """Orientation-preserving lift F on R (scalars or arrays)"""
        x = np.asarray(x, dtype=float)
        k = self.pairs
        out = np.where(np.mod(2 * k * x, 1.0) == 0.0, x, x + self.amplitude * np.sin(2.0 * math.pi * k * x))
        return float(out) if out.ndim == 0 else out

    def lift_inverse(self, y, tol: Optional[float] = None, max_iter: Optional[int] = None):
        """Inverse of the lift by monotone bisection (scalars or arrays).

        Raises:
            ConvergenceError: tol would need more than max_iter halvings
        """
        tol = config.INVERSE_TOL if tol is None else tol
        max_iter = config.INVERSE_MAX_ITER if max_iter is None else max_iter
        if tol <= 0:
            raise PreconditionError(f"tol must be positive, got {tol}")

        y = np.asarray(y, dtype=float)
        width = 2.0 * (self.amplitude + tol)
        steps = max(int(math.ceil(math.log2(width / tol))), 1)
        if steps > max_iter:
            raise ConvergenceError(f"Bisection needs {steps} steps for tol={tol}, cap is {max_iter}")

        lo = y - self.amplitude - tol
        hi = y + self.amplitude + tol
        for _ in range(steps):
            mid = 0.5 * (lo + hi)
            below = self.lift(mid) < y
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out = 0.5 * (lo + hi)
        out = np.where(np.mod(2 * self.pairs * y, 1.0) == 0.0, y, out)
        return float(out) if out.ndim == 0 else out

    # ---- point dynamics -----------------------------------------------

    def map_eval(self, x: CirclePoint) -> CirclePoint:
        """f(x) normalized to [0, 1)"""
        y = self.lift(x)
        return normalize(-y if self.reversing else y)

    def map_eval_array(self, x: np.ndarray) -> np.ndarray:
        y = self.lift(np.asarray(x, dtype=float))
        return normalize_array(-y if self.reversing else y)

    def map_inverse(self, y: CirclePoint, tol: Optional[float] = None) -> CirclePoint:
        """x with circle_distance(f(x), y) <= tol

        Raises:
            ConvergenceError: bisection exceeded its iteration cap
        """
        target = -y if self.reversing else y
        return normalize(self.lift_inverse(normalize(target), tol))

    def map_inverse_array(self, y: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        target = normalize_array(-y if self.reversing else y)
        return normalize_array(self.lift_inverse(target, tol))

    def iterate_point(self, x: CirclePoint, n: int, tol: Optional[float] = None) -> CirclePoint:
        """f^n(x); negative n iterates map_inverse"""
        x = normalize(x)
        if n >= 0:
            for _ in range(n):
                x = self.map_eval(x)
        else:
            for _ in range(-n):
                x = self.map_inverse(x, tol)
        return x

    def orbit_array(self, x: np.ndarray, n: int) -> np.ndarray:
        """Rows f^0(x) .. f^n(x) (n >= 0) or f^0(x) .. f^n(x) backwards (n < 0)"""
        x = normalize_array(np.asarray(x, dtype=float))
        rows = [x]
        step = self.map_eval_array if n >= 0 else self.map_inverse_array
        for _ in range(abs(n)):
            rows.append(step(rows[-1]))
        return np.stack(rows)

    def lift_table(self, x: np.ndarray, window: int) -> np.ndarray:
        """Lift iterates F^i(x) for i = -window..window, row i + window.

        Points in [0, 1] stay in [0, 1] because F fixes 0 and 1.
        """
        x = np.asarray(x, dtype=float)
        table = np.empty((2 * window + 1, x.size))
        table[window] = x
        for i in range(1, window + 1):
            table[window + i] = self.lift(table[window + i - 1])
            table[window - i] = self.lift_inverse(table[window - i + 1])
        return table

    def derivative(self, x: CirclePoint) -> float:
        value = 1.0 + 2.0 * math.pi * self.pairs * self.amplitude * math.cos(2.0 * math.pi * self.pairs * x)
        return -value if self.reversing else value

    # ---- periodic structure -------------------------------------------

    def fixed_points(self) -> List[PeriodicPoint]:
        """Fixed points (preserving) or fixed points of f^2 tagged with period 1 or 2 (reversing)"""
        if not self.reversing:
            k = self.pairs
            return [PeriodicPoint(j / (2 * k), Stability.REPELLER if j % 2 == 0 else Stability.ATTRACTOR, 1)
                    for j in range(2 * k)]
        return self.period_n_points(2)

    def fixed_coordinates(self) -> List[float]:
        """Coordinates of Fix(f)"""
        return [pt.coordinate for pt in self.fixed_points() if pt.period == 1]

    def period_n_points(self, n: int, resolution: int = 4096) -> List[PeriodicPoint]:
        """Fixed points of f^n by grid scan plus bisection, with minimal periods.

        Roots within 1e-9 of a zero of the lift displacement j/(2k) are snapped
        onto it so that the reported points are exactly invariant.
        """
        if n < 1:
            raise PreconditionError(f"period must be positive, got {n}")

        def displacement(x: np.ndarray) -> np.ndarray:
            y = self.orbit_array(x, n)[-1]
            return np.mod(y - x + 0.5, 1.0) - 0.5

        grid = np.linspace(0.0, 1.0, resolution + 1)[:-1]
        values = displacement(grid)
        roots = list(grid[values == 0.0])
        nxt = np.roll(values, -1)
        crossing = (np.sign(values) * np.sign(nxt) < 0) & (np.abs(values) < 0.25) & (np.abs(nxt) < 0.25)
        for idx in np.nonzero(crossing)[0]:
            lo, hi = grid[idx], grid[idx] + 1.0 / resolution
            f_lo = values[idx]
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                f_mid = float(displacement(np.array([mid]))[0])
                if np.sign(f_mid) == np.sign(f_lo):
                    lo, f_lo = mid, f_mid
                else:
                    hi = mid
            roots.append(0.5 * (lo + hi))

        k = self.pairs
        snapped: List[float] = []
        for root in roots:
            j = round(normalize(root) * 2 * k)
            candidate = normalize(j / (2 * k))
            value = candidate if circle_distance(candidate, root) <= 1e-9 else normalize(root)
            if all(circle_distance(value, other) > 1e-9 for other in snapped):
                snapped.append(value)

        points = []
        for x in sorted(snapped):
            period = next(p for p in range(1, n + 1)
                          if n % p == 0 and circle_distance(self.iterate_point(x, p), x) <= 1e-9)
            multiplier = 1.0
            y = x
            for _ in range(n):
                multiplier *= self.derivative(y)
                y = self.map_eval(y)
            stability = Stability.REPELLER if abs(multiplier) > 1.0 else Stability.ATTRACTOR
            points.append(PeriodicPoint(x, stability, period))
        logger.debug(f"Found {len(points)} fixed points of f^{n}")
        return points

    # ---- continua -----------------------------------------------------

    def _collapse(self, a: float, b: float, lifted_length: float) -> CircleContinuum:
        if a == b:
            return CircleContinuum.point(a) if lifted_length < 0.5 else CircleContinuum.full()
        return CircleContinuum.arc(a, b)

    def continuum_image(self, c: CircleContinuum) -> CircleContinuum:
        """C(f) on C(S^1)"""
        if c.kind is ContinuumKind.FULL:
            return c
        if c.kind is ContinuumKind.POINT:
            return CircleContinuum.point(self.map_eval(c.a))
        start, length = c.start_length()
        lifted = self.lift(start + length) - self.lift(start)
        fa, fb = self.map_eval(c.a), self.map_eval(c.b)
        if self.reversing:
            return self._collapse(fb, fa, lifted)
        return self._collapse(fa, fb, lifted)

    def continuum_preimage(self, c: CircleContinuum, tol: Optional[float] = None) -> CircleContinuum:
        """Exact preimage under C(f), up to map_inverse tolerance"""
        if c.kind is ContinuumKind.FULL:
            return c
        if c.kind is ContinuumKind.POINT:
            return CircleContinuum.point(self.map_inverse(c.a, tol))
        ga, gb = self.map_inverse(c.a, tol), self.map_inverse(c.b, tol)
        start, length = c.start_length()
        if self.reversing:
            start = -(start + length)
        lifted = self.lift_inverse(start + length, tol) - self.lift_inverse(start, tol)
        if self.reversing:
            return self._collapse(gb, ga, lifted)
        return self._collapse(ga, gb, lifted)

    def iterate_continuum(self, c: CircleContinuum, n: int) -> CircleContinuum:
        """C(f)^n(c); negative n iterates continuum_preimage"""
        step = self.continuum_image if n >= 0 else self.continuum_preimage
        for _ in range(abs(n)):
            c = step(c)
        return c

    def arc_images(self, start_lift: np.ndarray, end_lift: np.ndarray, wraps: np.ndarray,
                   power: int) -> Tuple[np.ndarray, np.ndarray]:
        """Start/length arrays of f^power applied to arcs, from lift iterates.

        Args:
            start_lift: F^power of the arc starts, in [0, 1]
            end_lift: F^power of the arc ends, in [0, 1]
            wraps: True where the original arc passes through 0
            power: The iterate, used for the reflection parity

        Returns:
            (starts in [0, 1), lengths in [0, 1])
        """
        length = np.where(wraps, 1.0 - start_lift + end_lift, end_lift - start_lift)
        length = np.clip(length, 0.0, 1.0)
        if self.reversing and power % 2:
            start = normalize_array(-(start_lift + length))
        else:
            start = normalize_array(start_lift)
        return start, length
