"""
North-South dynamics z -> z/2 on the Riemann sphere, the chordal metric, and
continua built from segments and rays of the extended plane
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..config import config
from ..errors import PreconditionError
from ..hyperspace.metric import HausdorffValue

logger = logging.getLogger(__name__)

INF = complex(math.inf, 0.0)


def is_infinite(z: complex) -> bool:
    return math.isinf(z.real) or math.isinf(z.imag)


def to_sphere(z) -> np.ndarray:
    """Stereographic images on the unit sphere, (..., 3); infinity is (0, 0, 1)"""
    z = np.asarray(z, dtype=complex)
    infinite = np.isinf(z.real) | np.isinf(z.imag)
    big = ~infinite & (np.abs(z) > 1.0)
    safe = np.where(infinite, 1.0, np.where(z == 0, 1.0, z))
    w = np.where(infinite, 0.0, 1.0 / safe)

    near = np.where(infinite | big, 0.0, z)
    r2 = np.abs(near) ** 2
    x_near = 2 * near.real / (1 + r2)
    y_near = 2 * near.imag / (1 + r2)
    z_near = (r2 - 1) / (1 + r2)

    far = np.where(infinite | big, w, 0.0)
    s2 = np.abs(far) ** 2
    x_far = 2 * far.real / (1 + s2)
    y_far = -2 * far.imag / (1 + s2)
    z_far = (1 - s2) / (1 + s2)

    use_far = infinite | big
    return np.stack([np.where(use_far, x_far, x_near),
                     np.where(use_far, y_far, y_near),
                     np.where(use_far, z_far, z_near)], axis=-1)


def chordal_distance(z, w):
    """2|z - w| / sqrt((1 + |z|^2)(1 + |w|^2)), with d(z, inf) = 2 / sqrt(1 + |z|^2)"""
    out = np.linalg.norm(to_sphere(z) - to_sphere(w), axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def ns_map(z: complex, direction: int = 1) -> complex:
    """z/2 forward, 2z backward; 0 and infinity are fixed"""
    if is_infinite(z):
        return INF
    return z / 2 if direction > 0 else z * 2


def ns_iterate(z: complex, n: int) -> complex:
    if is_infinite(z):
        return INF
    return z * 2.0 ** (-n)


class PieceKind(Enum):
    POINT = "point"
    SEGMENT = "segment"
    RAY = "ray"


@dataclass(frozen=True)
class Piece:
    """A point, a plane segment [a, b], or a ray {a + t*u : t >= 0} closed by infinity"""
    kind: PieceKind
    a: complex
    b: complex = 0j

    @classmethod
    def point(cls, z: complex) -> 'Piece':
        return cls(PieceKind.POINT, INF if is_infinite(z) else complex(z))

    @classmethod
    def segment(cls, a: complex, b: complex) -> 'Piece':
        if is_infinite(a) or is_infinite(b):
            raise PreconditionError("Segments have finite endpoints; use a ray")
        return cls(PieceKind.SEGMENT, complex(a), complex(b))

    @classmethod
    def ray(cls, a: complex, direction: complex) -> 'Piece':
        if direction == 0:
            raise PreconditionError("Ray direction must be nonzero")
        return cls(PieceKind.RAY, complex(a), complex(direction) / abs(direction))

    def image(self, n: int = 1) -> 'Piece':
        """Image under (z -> z/2)^n"""
        scale = 2.0 ** (-n)
        if self.kind is PieceKind.POINT:
            return Piece.point(ns_iterate(self.a, n))
        if self.kind is PieceKind.SEGMENT:
            return Piece(PieceKind.SEGMENT, self.a * scale, self.b * scale)
        return Piece(PieceKind.RAY, self.a * scale, self.b)

    def parametrize(self, s: np.ndarray) -> np.ndarray:
        """Points at parameters s in [0, 1]; a ray sends s -> 0 to infinity"""
        if self.kind is PieceKind.POINT:
            return np.full(s.shape, self.a, dtype=complex)
        if self.kind is PieceKind.SEGMENT:
            return self.a + s * (self.b - self.a)
        with np.errstate(divide='ignore', invalid='ignore'):
            t = (1.0 - s) / s
            out = self.a + t * self.b
        return np.where(s <= 0.0, INF, out)

    def to_dict(self) -> Dict[str, Any]:
        if self.kind is PieceKind.POINT:
            return {'type': 'point', 'z': self.a}
        key = 'b' if self.kind is PieceKind.SEGMENT else 'direction'
        return {'type': self.kind.value, 'a': self.a, key: self.b}


@dataclass(frozen=True)
class SphereContinuum:
    """Union of pieces; connectedness is the builder's responsibility"""
    pieces: Tuple[Piece, ...]

    def __post_init__(self):
        if not self.pieces:
            raise PreconditionError("Sphere continua are nonempty")
        object.__setattr__(self, 'pieces', tuple(dict.fromkeys(self.pieces)))

    @classmethod
    def of(cls, pieces: Iterable[Piece]) -> 'SphereContinuum':
        return cls(tuple(pieces))

    @classmethod
    def polyline(cls, vertices: List[complex]) -> 'SphereContinuum':
        if len(vertices) == 1:
            return cls((Piece.point(vertices[0]),))
        return cls(tuple(Piece.segment(a, b) for a, b in zip(vertices, vertices[1:])))

    def image(self, n: int = 1) -> 'SphereContinuum':
        return SphereContinuum(tuple(piece.image(n) for piece in self.pieces))

    def union(self, other: 'SphereContinuum') -> 'SphereContinuum':
        return SphereContinuum(self.pieces + other.pieces)

    def to_dict(self) -> Dict[str, Any]:
        return {'pieces': [piece.to_dict() for piece in self.pieces]}


def discretize_piece(piece: Piece, eta: float, pre_grid: int = 256) -> np.ndarray:
    """Sphere points of one piece with chordal spacing at most eta"""
    if piece.kind is PieceKind.POINT:
        return to_sphere(np.array([piece.a]))
    s = np.linspace(0.0, 1.0, pre_grid + 1)
    coarse = to_sphere(piece.parametrize(s))
    chords = np.linalg.norm(np.diff(coarse, axis=0), axis=-1)
    counts = np.maximum(np.ceil(2.0 * chords / eta).astype(int), 1)
    fine = [s[:1]]
    for lo, hi, count in zip(s[:-1], s[1:], counts):
        fine.append(lo + (hi - lo) * np.arange(1, count + 1) / count)
    return to_sphere(piece.parametrize(np.concatenate(fine)))


def discretize(c: SphereContinuum, eta: Optional[float] = None) -> np.ndarray:
    """Sphere points of a continuum with chordal spacing at most eta along every piece"""
    eta = config.SPHERE_RESOLUTION if eta is None else eta
    return np.concatenate([discretize_piece(piece, eta) for piece in c.pieces])


def _directed(source: List[Piece], target_points: np.ndarray, eta: float) -> float:
    if not source:
        return 0.0
    points = np.concatenate([discretize_piece(piece, eta) for piece in source])
    return float(cKDTree(target_points).query(points)[0].max())


def hausdorff_sphere(c1: SphereContinuum, c2: SphereContinuum, eta: Optional[float] = None) -> HausdorffValue:
    """Chordal Hausdorff distance on eta-discretizations; error at most 2*eta.

    Pieces shared by both continua contribute nothing to either directed
    distance and are not sampled as sources.
    """
    eta = config.SPHERE_RESOLUTION if eta is None else eta
    if set(c1.pieces) == set(c2.pieces):
        return HausdorffValue(0.0)
    shared = set(c1.pieces) & set(c2.pieces)
    only1 = [p for p in c1.pieces if p not in shared]
    only2 = [p for p in c2.pieces if p not in shared]
    value = max(_directed(only1, discretize(c2, eta), eta), _directed(only2, discretize(c1, eta), eta))
    return HausdorffValue(value, method="discretized", eta=eta)


def random_sphere_points(rng: np.random.Generator, size: int) -> np.ndarray:
    """Complex points spread over the sphere, with 0 and infinity mixed in"""
    z = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) * np.exp(rng.uniform(-4, 4, size))
    z[rng.random(size) < 0.05] = 0.0
    z[rng.random(size) < 0.05] = INF
    return z


def chordal_axiom_check(samples: int = 10_000, seed: int = 0) -> Dict[str, Any]:
    rng = np.random.default_rng(seed)
    a, b, c = (random_sphere_points(rng, samples) for _ in range(3))
    ab, ba = chordal_distance(a, b), chordal_distance(b, a)
    ac, cb = chordal_distance(a, c), chordal_distance(c, b)
    report = {
        'samples': samples,
        'seed': seed,
        'symmetry_max_violation': float(np.max(np.abs(ab - ba))),
        'triangle_max_violation': float(np.max(ab - (ac + cb))),
        'diameter': float(np.max(ab)),
    }
    report['passed'] = (report['symmetry_max_violation'] <= 1e-12 and report['triangle_max_violation'] <= 1e-12
                        and report['diameter'] <= 2.0 + 1e-12)
    return report
