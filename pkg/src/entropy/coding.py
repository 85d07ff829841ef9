"""
Indicator coding of finite subsets along basin orbits, and the exact
separated family it yields for 2^f
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..config import config
from ..errors import InvariantBreach, PreconditionError
from ..hyperspace.metric import FiniteSubset, circle_pairwise, hausdorff_finite, induced_2f_step
from ..systems.circle import MorseSmaleCircleMap
from ..utils.workers import chunked, parallel_map

logger = logging.getLogger(__name__)


def _basin_interval(m: MorseSmaleCircleMap) -> tuple:
    """Open interval (q, p) from the repeller 0 to the first attractor"""
    if m.reversing:
        raise PreconditionError("Basin codings need an orientation-preserving map; pass to f^2")
    return 0.0, 1.0 / (2 * m.pairs)


def fundamental_domain_points(m: MorseSmaleCircleMap, r: int, start: Optional[float] = None) -> List[float]:
    """r points in one fundamental domain [y, f(y)) of the first basin interval.

    Points of a fundamental domain lie on pairwise distinct orbits.
    """
    if r < 1:
        raise PreconditionError(f"r must be >= 1, got {r}")
    lo, hi = _basin_interval(m)
    y0 = 0.5 * (lo + hi) if start is None else start
    step = (m.map_eval(y0) - y0) / r
    return [y0 + j * step for j in range(r)]


def orbit_grid(m: MorseSmaleCircleMap, base_points: Sequence[float], window: int) -> np.ndarray:
    """Rows k, columns n = -window..window: f^n(y_k)"""
    base = np.asarray(base_points, dtype=float)
    forward = m.orbit_array(base, window)
    backward = m.orbit_array(base, -window)
    return np.concatenate([backward[:0:-1], forward]).T


def _check_base_points(m: MorseSmaleCircleMap, base_points: Sequence[float]):
    lo, hi = _basin_interval(m)
    if any(not lo < y < hi for y in base_points):
        raise PreconditionError(f"Base points must lie in the basin interval ({lo}, {hi})")
    ordered = sorted(base_points)
    if ordered[-1] >= m.map_eval(ordered[0]):
        raise PreconditionError("Base points must lie in one fundamental domain (distinct orbits)")


@dataclass
class CodingMatrix:
    """Bits w[k][n + window] = 1 iff f^n(y_k) is in A"""
    bits: np.ndarray
    window: int

    def to_dict(self) -> Dict[str, Any]:
        return {'window': self.window, 'bits': self.bits.tolist()}


def orbit_indicator_coding(m: MorseSmaleCircleMap, base_points: Sequence[float], a: FiniteSubset,
                           window: int, tol: Optional[float] = None,
                           grid: Optional[np.ndarray] = None) -> CodingMatrix:
    """Code a finite subset by which orbit points it contains.

    Raises:
        PreconditionError: an orbit point is near A but farther than tol
    """
    tol = config.MEMBERSHIP_TOL if tol is None else tol
    _check_base_points(m, base_points)
    grid = orbit_grid(m, base_points, window) if grid is None else grid

    dist = circle_pairwise(grid.ravel(), a.as_array()).min(axis=1).reshape(grid.shape)
    ambiguous = (dist > tol) & (dist <= 100 * tol)
    if ambiguous.any():
        raise PreconditionError(f"{int(ambiguous.sum())} orbit points within {100 * tol} of A but not on it")
    return CodingMatrix((dist <= tol).astype(np.int8), window)


def coding_equivariance_check(m: MorseSmaleCircleMap, r: int = 3, window: int = 6, samples: int = 1000,
                              seed: int = 0) -> Dict[str, Any]:
    """coding(2^f(A)) equals coding(A) shifted one column, on random orbit subsets"""
    base = fundamental_domain_points(m, r)
    grid = orbit_grid(m, base, window)
    rng = np.random.default_rng(seed)
    anchors = m.fixed_coordinates()
    # leave the last column empty so the image stays inside the window
    interior = grid[:, :-1]

    passed = 0
    failures: List[int] = []
    for sample in range(samples):
        mask = rng.random(interior.shape) < 0.3
        a = FiniteSubset.from_points(list(interior[mask]) + anchors)
        before = orbit_indicator_coding(m, base, a, window, grid=grid).bits
        after = orbit_indicator_coding(m, base, induced_2f_step(m, a), window, grid=grid).bits
        if np.array_equal(after[:, 1:], before[:, :-1]) and not after[:, 0].any():
            passed += 1
        else:
            failures.append(sample)

    logger.info(f"Coding equivariance: {passed}/{samples} subsets pass")
    return {'construction': 'phi2f', 'r': r, 'window': window, 'samples': samples, 'seed': seed,
            'passed': passed, 'failed_samples': failures[:20], 'all_passed': passed == samples}


def bowen_hausdorff(m: MorseSmaleCircleMap, a: FiniteSubset, b: FiniteSubset, n: int) -> float:
    """max over 0 <= j < n of d_H(f^j(A), f^j(B)) under 2^f"""
    worst = 0.0
    for j in range(n):
        if j:
            a, b = induced_2f_step(m, a), induced_2f_step(m, b)
        worst = max(worst, float(hausdorff_finite(a, b)))
    return worst


def exact_separated_family(m: MorseSmaleCircleMap, r: int, n: int, dn_pairs: int = 64,
                           seed: int = 0) -> Dict[str, Any]:
    """All 2^(r*n) subsets {f^i(y_k): bit (k, i) set} plus Fix(f), pairwise separated.

    Every pair is checked exhaustively at time 0 only: two patterns differing
    at (k, i) differ there by the orbit point f^i(y_k), so d_H >= 2*delta with
    2*delta the minimum spacing of the orbit grid together with Fix(f).
    The Bowen distance d_n is at least that time-0 distance; it is computed
    along 2^f for dn_pairs seeded pairs as a cross-check.

    Returns:
        Report with the family size, delta, the time-0 minimum distance, the
        sampled d_n minimum and the estimate log(count)/n = r*log(2)
    """
    if r < 1 or n < 1:
        raise PreconditionError(f"r and n must be positive, got r={r}, n={n}")
    if r * n > 12:
        raise PreconditionError(f"r*n = {r * n} exceeds 12; the family would not be materialized")

    base = fundamental_domain_points(m, r)
    orbit = m.orbit_array(np.asarray(base), n - 1).T
    anchors = np.asarray(m.fixed_coordinates())
    points = np.concatenate([orbit.ravel(), anchors])
    pairwise = circle_pairwise(points, points)
    spacing = pairwise + np.diag(np.full(points.size, np.inf))
    delta = 0.5 * float(spacing.min())
    if delta <= config.MEMBERSHIP_TOL:
        raise PreconditionError(f"Orbit grid spacing collapsed (delta={delta}); use a smaller window")

    bits = r * n
    masks = np.array(list(itertools.product([False, True], repeat=bits)), dtype=bool)
    full_masks = np.concatenate([masks, np.ones((masks.shape[0], anchors.size), dtype=bool)], axis=1)
    # nearest[Q, a]: distance from grid point a to the set Q
    nearest = np.where(full_masks[:, None, :], pairwise[None, :, :], np.inf).min(axis=2)

    def block_minimum(rows: List[int]) -> float:
        worst = np.inf
        for p in rows:
            directed_pq = np.where(full_masks[p][None, :], nearest, -np.inf).max(axis=1)
            directed_qp = np.where(full_masks, nearest[p][None, :], -np.inf).max(axis=1)
            d = np.maximum(directed_pq, directed_qp)
            worst = min(worst, float(d[p + 1:].min()) if p + 1 < d.size else np.inf)
        return worst

    count = masks.shape[0]
    minima = parallel_map(block_minimum, chunked(list(range(count)), 64), desc="separated family")
    min_distance = min(minima)
    if not min_distance > delta:
        raise InvariantBreach(f"Family not separated: minimum distance {min_distance} <= delta {delta}")

    rng = np.random.default_rng(seed)
    sampled = [tuple(int(v) for v in rng.choice(count, size=2, replace=False)) for _ in range(min(dn_pairs, count))]
    subsets = {}
    for p in {p for pair in sampled for p in pair}:
        subsets[p] = FiniteSubset.from_points(list(points[full_masks[p]]))
    dn_min = min((bowen_hausdorff(m, subsets[p], subsets[q], n) for p, q in sampled), default=math.inf)

    report = {
        'r': r,
        'n': n,
        'count': count,
        'pairs_checked': count * (count - 1) // 2,
        'delta': delta,
        'certified_time': 0,
        'min_pair_distance': min_distance,
        'dn_pairs': len(sampled),
        'dn_min': dn_min,
        'dn_at_least_time_0': dn_min >= min_distance - config.MEMBERSHIP_TOL,
        'estimate': math.log(count) / n,
        'target': r * math.log(2),
        'base_points': base,
        'anchors': anchors.tolist(),
    }
    logger.info(f"Exact separated family r={r}, n={n}: {count} subsets, delta={delta:.4g}")
    return report
