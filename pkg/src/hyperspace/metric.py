"""
Hausdorff metric on finite subsets and circle continua, and the induced maps 2^f and C(f)
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, Optional, Tuple, Union

import numpy as np

from ..config import config
from ..errors import PreconditionError
from ..systems.circle import CircleContinuum, circle_distance, normalize

logger = logging.getLogger(__name__)

PairwiseMetric = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class HausdorffValue:
    value: float
    method: str = "exact"
    eta: Optional[float] = None

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> Dict[str, Any]:
        payload = {'value': self.value, 'method': self.method}
        if self.eta is not None:
            payload['eta'] = self.eta
        return payload


def circle_pairwise(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Matrix of circle distances between two point arrays"""
    xs = np.asarray(xs, dtype=float).reshape(-1)
    ys = np.asarray(ys, dtype=float).reshape(-1)
    return circle_distance(xs[:, None], ys[None, :])


@dataclass(frozen=True)
class FiniteSubset:
    """Nonempty finite set, deduplicated within tolerance and canonically sorted"""
    points: Tuple[Any, ...]

    @classmethod
    def from_points(cls, points: Iterable[Any], pairwise: Optional[PairwiseMetric] = None,
                    tol: Optional[float] = None) -> 'FiniteSubset':
        """Canonical finite subset.

        Args:
            points: Carrier points (floats for the circle)
            pairwise: Matrix metric; None means the circle metric
            tol: Deduplication tolerance (defaults to config.DEDUP_TOL)
        """
        tol = config.DEDUP_TOL if tol is None else tol
        if pairwise is None:
            items = sorted(normalize(float(p)) for p in points)
        else:
            items = sorted(points)
        if not items:
            raise PreconditionError("Finite subsets are nonempty")

        kept = []
        for p in items:
            if kept:
                if pairwise is None:
                    near = circle_distance(np.array(kept), p).min() <= tol
                else:
                    near = pairwise(np.array([p]), np.array(kept)).min() <= tol
                if near:
                    continue
            kept.append(p)
        return cls(tuple(kept))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        return {'type': 'finite', 'points': list(self.points)}


def directed_circle_distance(xs: np.ndarray, ys_sorted: np.ndarray) -> float:
    """max over xs of the distance to the sorted circle set ys"""
    xs = np.asarray(xs, dtype=float)
    idx = np.searchsorted(ys_sorted, xs)
    n = ys_sorted.size
    right = ys_sorted[idx % n]
    left = ys_sorted[(idx - 1) % n]
    nearest = np.minimum(circle_distance(xs, right), circle_distance(xs, left))
    return float(np.max(nearest))


def hausdorff_finite(a: FiniteSubset, b: FiniteSubset,
                     pairwise: Optional[PairwiseMetric] = None) -> HausdorffValue:
    """max of the two directed sup-min distances

    Args:
        a: First set
        b: Second set, over the same carrier
        pairwise: Matrix metric; None means the circle metric

    Returns:
        Exact HausdorffValue
    """
    if pairwise is None:
        xa, xb = np.sort(a.as_array()), np.sort(b.as_array())
        value = max(directed_circle_distance(xa, xb), directed_circle_distance(xb, xa))
    else:
        matrix = np.asarray(pairwise(np.asarray(a.points), np.asarray(b.points)), dtype=float)
        value = float(max(matrix.min(axis=1).max(), matrix.min(axis=0).max()))
    return HausdorffValue(value)


def _tent_sup(lo: np.ndarray, hi: np.ndarray, gap: np.ndarray) -> np.ndarray:
    """sup of min(u, gap - u) over [lo, hi] intersected with [0, gap]; 0 if empty"""
    lo_c = np.maximum(lo, 0.0)
    hi_c = np.minimum(hi, gap)
    empty = lo_c > hi_c
    half = 0.5 * gap
    inside = (lo_c <= half) & (half <= hi_c)
    at_ends = np.maximum(np.minimum(lo_c, gap - lo_c), np.minimum(hi_c, gap - hi_c))
    return np.where(empty, 0.0, np.where(inside, half, np.maximum(at_ends, 0.0)))


def directed_continua(s1, l1, s2, l2) -> np.ndarray:
    """Directed distance sup_{x in C1} d(x, C2) for continua given as start/length arrays.

    Outside C2, the distance to C2 at offset u past its end is min(u, g - u)
    with g = 1 - l2; C1 covers the offsets [o, o + l1] and [o - 1, o - 1 + l1].
    """
    s1, l1, s2, l2 = (np.asarray(v, dtype=float) for v in (s1, l1, s2, l2))
    gap = 1.0 - l2
    offset = np.mod(s1 - (s2 + l2), 1.0)
    first = _tent_sup(offset, offset + l1, gap)
    second = _tent_sup(offset - 1.0, offset - 1.0 + l1, gap)
    return np.where(gap <= 0.0, 0.0, np.maximum(first, second))


def hausdorff_arrays(s1, l1, s2, l2) -> np.ndarray:
    """Vectorized Hausdorff distance between continua in start/length form"""
    return np.maximum(directed_continua(s1, l1, s2, l2), directed_continua(s2, l2, s1, l1))


def hausdorff_continua(c1: CircleContinuum, c2: CircleContinuum) -> HausdorffValue:
    """Closed-form Hausdorff distance between two circle continua"""
    s1, l1 = c1.start_length()
    s2, l2 = c2.start_length()
    return HausdorffValue(float(hausdorff_arrays(s1, l1, s2, l2)))


def hausdorff_discretized(c1: CircleContinuum, c2: CircleContinuum, eta: float) -> HausdorffValue:
    """Hausdorff distance between eta-nets of two continua; within eta of the exact value"""
    x1, x2 = np.sort(c1.sample(eta)), np.sort(c2.sample(eta))
    value = max(directed_circle_distance(x1, x2), directed_circle_distance(x2, x1))
    return HausdorffValue(value, method="discretized", eta=eta)


def induced_2f_step(system: Any, a: FiniteSubset) -> FiniteSubset:
    """2^f(A) = f(A), re-deduplicated

    Args:
        system: Object with map_eval, or a plain callable
        a: Finite subset of the circle
    """
    func = getattr(system, 'map_eval', system)
    return FiniteSubset.from_points(func(x) for x in a)


def induced_cf_step(system: Any, c: CircleContinuum) -> CircleContinuum:
    """C(f)(c)"""
    return system.continuum_image(c)


def set_distance(a: Union[FiniteSubset, CircleContinuum], x: float) -> float:
    """d(x, A) for a finite circle subset or a circle continuum"""
    if isinstance(a, CircleContinuum):
        return a.distance_to(x)
    return float(circle_distance(a.as_array(), x).min())


def neighborhood_contains(a: Union[FiniteSubset, CircleContinuum], r: float, x: float) -> bool:
    """x in V(A, r), the open r-ball about A"""
    if r <= 0:
        raise PreconditionError(f"radius must be positive, got {r}")
    return set_distance(a, x) < r


def random_continua(rng: np.random.Generator, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """Random continua in start/length form, mixing points, arcs and full circles"""
    starts = rng.uniform(0.0, 1.0, size)
    lengths = rng.uniform(0.0, 1.0, size)
    kind = rng.integers(0, 10, size)
    lengths = np.where(kind == 0, 0.0, np.where(kind == 1, 1.0, lengths))
    starts = np.where(kind == 1, 0.0, starts)
    return starts, lengths


def to_continuum(start: float, length: float) -> CircleContinuum:
    if length <= 0.0:
        return CircleContinuum.point(start)
    if length >= 1.0:
        return CircleContinuum.full()
    end = normalize(start + length)
    if end == normalize(start):
        return CircleContinuum.point(start)
    return CircleContinuum.arc(start, end)


def metric_axiom_check(samples: int = 10_000, seed: int = 0) -> Dict[str, Any]:
    """Metric axioms of hausdorff_arrays on random triples

    Returns:
        Dictionary with the worst symmetry and triangle violations
    """
    rng = np.random.default_rng(seed)
    a = random_continua(rng, samples)
    b = random_continua(rng, samples)
    c = random_continua(rng, samples)

    ab = hausdorff_arrays(*a, *b)
    ba = hausdorff_arrays(*b, *a)
    ac = hausdorff_arrays(*a, *c)
    cb = hausdorff_arrays(*c, *b)
    aa = hausdorff_arrays(*a, *a)

    report = {
        'samples': samples,
        'seed': seed,
        'symmetry_max_violation': float(np.max(np.abs(ab - ba))),
        'triangle_max_violation': float(np.max(ab - (ac + cb))),
        'identity_max_value': float(np.max(aa)),
        'min_value': float(np.min(ab)),
    }
    report['passed'] = (report['symmetry_max_violation'] == 0.0
                        and report['triangle_max_violation'] <= 1e-12
                        and report['identity_max_value'] == 0.0
                        and report['min_value'] >= 0.0)
    logger.info(f"Metric axioms on {samples} triples: passed={report['passed']}")
    return report


def discretization_agreement(samples: int = 10_000, eta: float = 1e-4, seed: int = 0) -> Dict[str, Any]:
    """Compare the closed form against eta-net brute force on random continuum pairs"""
    rng = np.random.default_rng(seed)
    s1, l1 = random_continua(rng, samples)
    s2, l2 = random_continua(rng, samples)
    exact = hausdorff_arrays(s1, l1, s2, l2)

    worst = 0.0
    scalar = np.empty(samples)
    for i in range(samples):
        c1, c2 = to_continuum(s1[i], l1[i]), to_continuum(s2[i], l2[i])
        scalar[i] = hausdorff_continua(c1, c2).value
        brute = hausdorff_discretized(c1, c2, eta).value
        worst = max(worst, abs(scalar[i] - brute))

    # scalar and vectorized paths must agree
    vectorized_ok = bool(np.allclose(exact, scalar, rtol=0.0, atol=1e-12))
    report = {
        'samples': samples,
        'eta': eta,
        'seed': seed,
        'max_abs_difference': worst,
        'bound': 2 * eta,
        'vectorized_matches_scalar': vectorized_ok,
        'passed': worst <= 2 * eta and vectorized_ok,
    }
    logger.info(f"Discretization agreement over {samples} pairs: max diff {worst:.3g}")
    return report
