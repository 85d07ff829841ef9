"""
The comb dendrite: spine [-1, 1] with legs {a_n} x [0, 1/(|n|+1)], and the
homeomorphism F that pushes the spine toward q = (1, 0) and leg n onto leg n+1

All coordinates are exact Fractions.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from ..errors import PreconditionError
from ..geometry.segments import Segment, hausdorff_segments, point_segment_distance

logger = logging.getLogger(__name__)

ONE = Fraction(1)


def node(n: int) -> Fraction:
    """Spine abscissa a_n: 0, n/(n+1) for n > 0, -a_|n| for n < 0"""
    m = abs(n)
    value = Fraction(m, m + 1)
    return value if n >= 0 else -value


def leg_height(n: int) -> Fraction:
    return Fraction(1, abs(n) + 1)


def spine_index(x: Fraction) -> int:
    """Largest n with a_n <= x, for x in (-1, 1)"""
    x = Fraction(x)
    if not -ONE < x < ONE:
        raise PreconditionError(f"{x} is an endpoint or off the spine")
    if x >= 0:
        return math.floor(x / (1 - x))
    return -math.ceil(-x / (1 + x))


class Location(Enum):
    SPINE = "spine"
    LEG = "leg"


@dataclass(frozen=True)
class DendritePoint:
    """A spine point (x, 0) or a leg point (a_n, h) with h > 0"""
    location: Location
    x: Fraction = Fraction(0)
    n: int = 0
    h: Fraction = Fraction(0)

    @classmethod
    def spine(cls, x) -> 'DendritePoint':
        x = Fraction(x)
        if not -ONE <= x <= ONE:
            raise PreconditionError(f"Spine coordinate {x} outside [-1, 1]")
        return cls(Location.SPINE, x)

    @classmethod
    def leg(cls, n: int, h) -> 'DendritePoint':
        h = Fraction(h)
        if not 0 <= h <= leg_height(n):
            raise PreconditionError(f"Height {h} outside leg {n}")
        if h == 0:
            return cls.spine(node(n))
        return cls(Location.LEG, node(n), n, h)

    def coords(self) -> Tuple[float, float]:
        return float(self.x), float(self.h)

    def to_dict(self) -> Dict[str, Any]:
        if self.location is Location.SPINE:
            return {'spine': self.x}
        return {'leg': self.n, 'h': self.h}


P_END = DendritePoint.spine(-1)
Q_END = DendritePoint.spine(1)


def spine_map(x: Fraction, steps: int = 1) -> Fraction:
    """Piecewise-affine spine map sending [a_n, a_n+1] onto [a_n+steps, a_n+1+steps]"""
    x = Fraction(x)
    if abs(x) == 1:
        return x
    n = spine_index(x)
    t = (x - node(n)) / (node(n + 1) - node(n))
    lo, hi = node(n + steps), node(n + 1 + steps)
    return lo + t * (hi - lo)


def leg_map(n: int, h: Fraction, steps: int = 1) -> Tuple[int, Fraction]:
    """Linear tip-to-tip map of leg n onto leg n + steps"""
    return n + steps, Fraction(h) * (abs(n) + 1) / (abs(n + steps) + 1)


@dataclass(frozen=True)
class DendriteMap:
    """F^power on the comb dendrite; power may be negative"""
    power: int = 1

    def __call__(self, pt: DendritePoint) -> DendritePoint:
        return self.forward(pt)

    def forward(self, pt: DendritePoint) -> DendritePoint:
        return self._apply(pt, self.power)

    def inverse(self, pt: DendritePoint) -> DendritePoint:
        return self._apply(pt, -self.power)

    def iterate(self, pt: DendritePoint, times: int) -> DendritePoint:
        return self._apply(pt, self.power * times)

    @staticmethod
    def _apply(pt: DendritePoint, steps: int) -> DendritePoint:
        if steps == 0:
            return pt
        if pt.location is Location.SPINE:
            return DendritePoint.spine(spine_map(pt.x, steps))
        n, h = leg_map(pt.n, pt.h, steps)
        return DendritePoint.leg(n, h)


def dendrite_distance(a: DendritePoint, b: DendritePoint) -> float:
    """Euclidean distance of the planar embedding"""
    (ax, ay), (bx, by) = a.coords(), b.coords()
    return math.hypot(ax - bx, ay - by)


@dataclass(frozen=True)
class Subtree:
    """Spine interval [u, v] together with leg stubs {a_n} x [0, h_n].

    A lone stub is a degenerate spine [a_n, a_n] with one leg.
    """
    spine: Tuple[Fraction, Fraction]
    legs: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        u, v = (Fraction(s) for s in self.spine)
        if not -ONE <= u <= v <= ONE:
            raise PreconditionError(f"Invalid spine interval [{u}, {v}]")
        legs = tuple(sorted((int(n), Fraction(h)) for n, h in self.legs if h != 0))
        for n, h in legs:
            if not 0 < h <= leg_height(n):
                raise PreconditionError(f"Leg {n} height {h} outside (0, {leg_height(n)}]")
            if not u <= node(n) <= v:
                raise PreconditionError(f"Leg {n} at {node(n)} is not attached to the spine [{u}, {v}]")
        object.__setattr__(self, 'spine', (u, v))
        object.__setattr__(self, 'legs', legs)

    @classmethod
    def build(cls, u, v, legs: Optional[Dict[int, Any]] = None) -> 'Subtree':
        return cls((Fraction(u), Fraction(v)), tuple((legs or {}).items()))

    def segments(self) -> List[Segment]:
        u, v = float(self.spine[0]), float(self.spine[1])
        segs = [((u, 0.0), (v, 0.0))]
        segs += [((float(node(n)), 0.0), (float(node(n)), float(h))) for n, h in self.legs]
        return segs

    def leg_dict(self) -> Dict[int, Fraction]:
        return dict(self.legs)

    def points(self, per_segment: int = 16) -> List[DendritePoint]:
        """Exact sample points on every segment"""
        u, v = self.spine
        out = [DendritePoint.spine(u + (v - u) * Fraction(i, per_segment)) for i in range(per_segment + 1)]
        for n, h in self.legs:
            out += [DendritePoint.leg(n, h * Fraction(i, per_segment)) for i in range(1, per_segment + 1)]
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {'spine': list(self.spine), 'legs': [[n, h] for n, h in self.legs]}


def full_dendrite(window: int) -> Subtree:
    """Spine with every full leg |n| <= window"""
    return Subtree.build(-1, 1, {n: leg_height(n) for n in range(-window, window + 1)})


def subtree_image(s: Subtree, direction: int = 1) -> Subtree:
    """C(F) (direction +1) or C(F^-1) (direction -1) on a subtree"""
    u, v = (spine_map(x, direction) for x in s.spine)
    legs = dict(leg_map(n, h, direction) for n, h in s.legs)
    return Subtree((u, v), tuple(legs.items()))


def subtree_iterate(s: Subtree, times: int) -> Subtree:
    direction = 1 if times >= 0 else -1
    for _ in range(abs(times)):
        s = subtree_image(s, direction)
    return s


def hausdorff_subtrees(s1: Subtree, s2: Subtree) -> float:
    """Exact Euclidean Hausdorff distance between two subtrees"""
    if s1 == s2:
        return 0.0
    return hausdorff_segments(s1.segments(), s2.segments())


def random_subtree(rng: np.random.Generator, window: int = 4) -> Subtree:
    """Random subtree with a spine between two nodes and a few stubs"""
    lo, hi = sorted(int(v) for v in rng.integers(-window, window + 1, 2))
    legs = {}
    for n in range(lo, hi + 1):
        if rng.random() < 0.5:
            legs[n] = leg_height(n) * Fraction(int(rng.integers(1, 9)), 8)
    return Subtree.build(node(lo), node(hi), legs)


def random_points(rng: np.random.Generator, size: int, window: int = 6) -> List[DendritePoint]:
    out = []
    for _ in range(size):
        n = int(rng.integers(-window, window + 1))
        if rng.random() < 0.5:
            out.append(DendritePoint.spine(node(n) + (node(n + 1) - node(n)) * Fraction(int(rng.integers(0, 64)), 64)))
        else:
            out.append(DendritePoint.leg(n, leg_height(n) * Fraction(int(rng.integers(1, 65)), 64)))
    return out


def segment_points_close(points: Iterable[DendritePoint], s: Subtree) -> float:
    """Largest distance from the given points to a subtree"""
    coords = np.array([pt.coords() for pt in points])
    segs = np.asarray(s.segments(), dtype=float)
    return float(point_segment_distance(coords, segs).min(axis=1).max())


def image_matches_pointwise(s: Subtree, direction: int = 1, per_segment: int = 64) -> float:
    """Distance between pointwise F images of sample points and subtree_image, both ways"""
    fmap = DendriteMap(direction)
    image = subtree_image(s, direction)
    forward = segment_points_close((fmap(pt) for pt in s.points(per_segment)), image)
    back = segment_points_close((fmap.inverse(pt) for pt in image.points(per_segment)), s)
    return max(forward, back)


def dendrite_map_check(samples: int = 1000, subtrees: int = 50, seed: int = 0) -> Dict[str, Any]:
    """F^-1(F(x)) = x exactly on random points; C(F) on subtrees against pointwise F"""
    rng = np.random.default_rng(seed)
    fmap = DendriteMap(1)
    points = random_points(rng, samples)
    round_trip = sum(fmap.inverse(fmap(pt)) == pt for pt in points)
    endpoints_fixed = fmap(P_END) == P_END and fmap(Q_END) == Q_END

    worst = 0.0
    for _ in range(subtrees):
        s = random_subtree(rng)
        worst = max(worst, image_matches_pointwise(s, 1, 16), image_matches_pointwise(s, -1, 16))

    report = {
        'samples': samples,
        'seed': seed,
        'round_trip_passed': int(round_trip),
        'endpoints_fixed': endpoints_fixed,
        'subtrees': subtrees,
        'pointwise_image_error': worst,
    }
    report['all_passed'] = round_trip == samples and endpoints_fixed and worst <= 1e-12
    return report
