"""
Pseudo-orbits of the induced maps: verification, the collar pseudo-orbit of
C(f) that no orbit shadows, and constructive shadowing under 2^f
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvariantBreach, PreconditionError
from ..systems.circle import CircleContinuum, MorseSmaleCircleMap, Stability, circle_distance
from ..utils.workers import chunked, parallel_map
from .metric import FiniteSubset, hausdorff_arrays, hausdorff_continua, hausdorff_finite

logger = logging.getLogger(__name__)


class Verdict(Enum):
    FALSIFIED = "falsified"
    SHADOWED = "shadowed"
    INCONCLUSIVE = "inconclusive"


@dataclass
class PseudoOrbit:
    """States x_i for i = -window..window with declared gap delta"""
    window: int
    states: List[Any]
    delta: float

    def __post_init__(self):
        if len(self.states) != 2 * self.window + 1:
            raise PreconditionError(f"Expected {2 * self.window + 1} states, got {len(self.states)}")

    def __getitem__(self, i: int) -> Any:
        if abs(i) > self.window:
            raise IndexError(i)
        return self.states[i + self.window]

    def indices(self) -> range:
        return range(-self.window, self.window + 1)


def _default_distance(state: Any) -> Callable[[Any, Any], float]:
    if isinstance(state, CircleContinuum):
        return lambda a, b: hausdorff_continua(a, b).value
    return lambda a, b: hausdorff_finite(a, b).value


def verify_pseudo_orbit(po: PseudoOrbit, step: Callable[[Any], Any],
                        distance: Optional[Callable[[Any, Any], float]] = None) -> Tuple[bool, float]:
    """Check d(step(x_i), x_{i+1}) <= delta for all consecutive states.

    Returns:
        (ok, max_gap)
    """
    distance = distance or _default_distance(po.states[0])
    gaps = [distance(step(po[i]), po[i + 1]) for i in range(-po.window, po.window)]
    max_gap = max(gaps) if gaps else 0.0
    return max_gap <= po.delta, max_gap


def _collar_pair(m: MorseSmaleCircleMap) -> Tuple[float, float]:
    """An attractor p and an adjacent repeller q"""
    if m.reversing:
        raise PreconditionError("Collar pseudo-orbits need an orientation-preserving map; pass to f^2")
    points = m.fixed_points()
    attractor = next(pt for pt in points if pt.stability is Stability.ATTRACTOR)
    idx = points.index(attractor)
    repeller = points[idx - 1]
    return attractor.coordinate, repeller.coordinate


def build_collar_pseudo_orbit(m: MorseSmaleCircleMap, delta: float, window: int) -> PseudoOrbit:
    """delta-pseudo-orbit of C(f) spliced at the full circle.

    x_0 = S^1, x_1 = S^1 minus the open delta/2-collar of q (contains p),
    x_-1 = S^1 minus the open delta/2-collar of p, and true C(f)-orbits after.
    """
    p, q = _collar_pair(m)
    if circle_distance(p, q) <= delta:
        raise PreconditionError(f"delta={delta} too large: collars around {p} and {q} overlap")

    states: Dict[int, CircleContinuum] = {0: CircleContinuum.full()}
    states[1] = CircleContinuum.arc(q + delta / 2, q - delta / 2)
    states[-1] = CircleContinuum.arc(p + delta / 2, p - delta / 2)
    for i in range(1, window):
        states[i + 1] = m.continuum_image(states[i])
        states[-i - 1] = m.continuum_preimage(states[-i])
    ordered = [states[i] for i in range(-window, window + 1)]
    return PseudoOrbit(window, ordered, delta)


@dataclass
class FalsificationReport:
    epsilon: float
    delta: float
    candidates_tested: int
    worst_margin: float
    verdict: Verdict
    window: int = 0
    eta: Optional[float] = None
    max_gap: float = 0.0
    survivors: int = 0
    failure_histogram: List[Dict[str, Any]] = field(default_factory=list)
    audit: Dict[str, Any] = field(default_factory=dict)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'epsilon': self.epsilon,
            'delta': self.delta,
            'window': self.window,
            'eta': self.eta,
            'candidates_tested': self.candidates_tested,
            'worst_margin': self.worst_margin,
            'verdict': self.verdict.value,
            'max_gap': self.max_gap,
            'survivors': self.survivors,
            'audit': self.audit,
            'details': self.details,
        }


def _search_order(window: int) -> List[int]:
    order = [0]
    for i in range(1, window + 1):
        order += [i, -i]
    return order


def falsify_cf_shadowing(m: MorseSmaleCircleMap, epsilon: float, delta: float, window: int,
                         eta: float, audit_samples: int = 100, seed: int = 0,
                         keep_candidates: bool = False) -> FalsificationReport:
    """Sweep every point, grid arc and the full circle against the collar pseudo-orbit.

    A candidate A fails when d_H(C(f)^i(A), x_i) > epsilon for some |i| <= window;
    its margin is max_i(d_H - epsilon). The verdict is falsified when the
    smallest margin over all candidates is positive.

    Args:
        m: Orientation-preserving circle map
        epsilon: Shadowing accuracy
        delta: Pseudo-orbit gap
        window: N
        eta: Grid spacing for arc endpoints
        audit_samples: Candidates re-checked through the scalar path
        seed: Audit sampling seed
        keep_candidates: Attach the per-candidate table to the report details

    Returns:
        FalsificationReport
    """
    p, q = _collar_pair(m)
    if not (circle_distance(p, q) > 2 * epsilon and 0.5 > 2 * epsilon):
        raise PreconditionError(f"epsilon={epsilon}: the epsilon-balls about {{p}}, {{q}} and S^1 meet")

    po = build_collar_pseudo_orbit(m, delta, window)
    ok, max_gap = verify_pseudo_orbit(po, m.continuum_image)
    if not ok:
        raise InvariantBreach(f"Collar pseudo-orbit has gap {max_gap} > {delta}")

    steps = int(round(1.0 / eta))
    grid = np.arange(steps) / steps
    table = m.lift_table(grid, window)
    targets = [po[i].start_length() for i in range(-window, window + 1)]
    order = _search_order(window)
    logger.info(f"Falsifying C(f) shadowing: {steps} grid points, window {window}, eps={epsilon}, delta={delta}")

    def sweep(rows: List[int]) -> Dict[str, np.ndarray]:
        i1 = np.repeat(np.asarray(rows), steps)
        i2 = np.tile(np.arange(steps), len(rows))
        wraps = i1 > i2
        margin = np.full(i1.size, -np.inf)
        first = np.full(i1.size, window + 1, dtype=np.int64)
        ahead = np.zeros(i1.size, dtype=bool)
        behind = np.zeros(i1.size, dtype=bool)
        for i in order:
            a_lift, b_lift = table[i + window][i1], table[i + window][i2]
            s, l = m.arc_images(a_lift, b_lift, wraps, i)
            ts, tl = targets[i + window]
            gap = hausdorff_arrays(s, l, ts, tl) - epsilon
            margin = np.maximum(margin, gap)
            first = np.where((first == window + 1) & (gap > 0), i, first)
            if i >= 0:
                ahead |= gap > 0
            if i <= 0:
                behind |= gap > 0
        return {'i1': i1, 'i2': i2, 'margin': margin, 'first': first, 'ahead': ahead, 'behind': behind}

    blocks = chunked(list(range(steps)), max(1, 200_000 // steps))
    parts = parallel_map(sweep, blocks, desc="falsifier sweep")
    i1 = np.concatenate([part['i1'] for part in parts])
    i2 = np.concatenate([part['i2'] for part in parts])
    margin = np.concatenate([part['margin'] for part in parts])
    first = np.concatenate([part['first'] for part in parts])

    # the full circle, through the scalar path
    full = CircleContinuum.full()
    full_gaps = [hausdorff_continua(full, po[i]).value - epsilon for i in order]
    full_margin = max(full_gaps)
    full_first = next((i for i, g in zip(order, full_gaps) if g > 0), window + 1)

    worst_margin = float(min(margin.min(), full_margin))
    survivors = int(np.sum(margin <= 0) + (full_margin <= 0))
    verdict = Verdict.FALSIFIED if worst_margin > 0 else Verdict.INCONCLUSIVE

    kinds = np.where(i1 == i2, 'point', 'arc')
    histogram = []
    for kind in ('point', 'arc'):
        mask = kinds == kind
        values, counts = np.unique(first[mask], return_counts=True)
        histogram += [{'kind': kind, 'failing_index': int(v) if v <= window else None, 'count': int(c)}
                      for v, c in zip(values, counts)]
    histogram.append({'kind': 'full', 'failing_index': full_first if full_first <= window else None, 'count': 1})

    # dichotomy: candidates containing q should fail forward, the others backward
    q_index = int(round(q * steps)) % steps
    contains_q = np.where(i1 == i2, i1 == q_index,
                          np.where(i1 < i2, (i1 <= q_index) & (q_index <= i2),
                                   (q_index >= i1) | (q_index <= i2)))
    ahead = np.concatenate([part['ahead'] for part in parts])
    behind = np.concatenate([part['behind'] for part in parts])
    forward_ok = int(np.sum(contains_q & ahead))
    backward_ok = int(np.sum(~contains_q & behind))

    audit = _audit_failures(m, po, grid, i1, i2, first, epsilon, audit_samples, seed)

    report = FalsificationReport(
        epsilon=epsilon, delta=delta, candidates_tested=int(i1.size) + 1, worst_margin=worst_margin,
        verdict=verdict, window=window, eta=eta, max_gap=max_gap, survivors=survivors,
        failure_histogram=histogram, audit=audit,
        details={
            'p': p,
            'q': q,
            'points_tested': int(np.sum(i1 == i2)),
            'arcs_tested': int(np.sum(i1 != i2)),
            'full_circle_failing_index': full_first if full_first <= window else None,
            'dichotomy_forward_failures': forward_ok,
            'dichotomy_backward_failures': backward_ok,
            'dichotomy_consistent': forward_ok + backward_ok == int(i1.size),
        })
    if keep_candidates:
        report.details['candidates'] = {
            'a': grid[i1], 'b': grid[i2], 'margin': margin, 'failing_index': first,
        }
    if not audit['passed']:
        raise InvariantBreach(f"Falsifier audit failed: {audit['mismatches']} mismatches")

    logger.info(f"Falsifier verdict {verdict.value}: worst margin {worst_margin:.4g}, {survivors} survivors")
    return report


def _audit_failures(m: MorseSmaleCircleMap, po: PseudoOrbit, grid: np.ndarray, i1: np.ndarray,
                    i2: np.ndarray, first: np.ndarray, epsilon: float, samples: int,
                    seed: int) -> Dict[str, Any]:
    """Re-check failing indices through continuum_image / continuum_preimage"""
    failed = np.nonzero(first <= po.window)[0]
    rng = np.random.default_rng(seed)
    chosen = rng.choice(failed, size=min(samples, failed.size), replace=False) if failed.size else []

    mismatches = 0
    for idx in chosen:
        a, b = grid[i1[idx]], grid[i2[idx]]
        candidate = CircleContinuum.point(a) if a == b else CircleContinuum.arc(a, b)
        i = int(first[idx])
        value = hausdorff_continua(m.iterate_continuum(candidate, i), po[i]).value
        if not value > epsilon - 1e-9:
            mismatches += 1
            logger.warning(f"Audit mismatch for {candidate.to_dict()} at index {i}: {value}")
    return {'samples': len(chosen), 'mismatches': mismatches, 'seed': seed, 'passed': mismatches == 0}


# ---- finite-set pseudo-orbits ------------------------------------------


def random_strand_pseudo_orbit(m: MorseSmaleCircleMap, strands: int, delta: float, window: int,
                               seed: int) -> PseudoOrbit:
    """Labeled finite-set pseudo-orbit whose strands are delta-pseudo-orbits of f"""
    rng = np.random.default_rng(seed)
    current = rng.uniform(0.0, 1.0, strands)
    states = [tuple(current)]
    for _ in range(2 * window):
        current = np.mod(m.map_eval_array(current) + rng.uniform(-delta, delta, strands), 1.0)
        states.append(tuple(float(v) for v in current))
    return PseudoOrbit(window, states, delta)


def exact_strand_orbit(m: MorseSmaleCircleMap, points: Sequence[float], window: int) -> PseudoOrbit:
    """Labeled true orbit whose states at index 0 are the given points"""
    start = [m.iterate_point(x, -window) for x in points]
    states = [tuple(start)]
    for _ in range(2 * window):
        states.append(tuple(m.map_eval(x) for x in states[-1]))
    return PseudoOrbit(window, states, 0.0)


def decompose_strands(states: Sequence[FiniteSubset], m: MorseSmaleCircleMap, delta: float,
                      window: int) -> Optional[PseudoOrbit]:
    """Greedy nearest-neighbor labeling of an unlabeled finite-set pseudo-orbit.

    Returns:
        Labeled PseudoOrbit, or None when the matching fails
    """
    sizes = {len(s) for s in states}
    if len(sizes) != 1:
        logger.warning(f"Strand decomposition needs constant cardinality, got sizes {sorted(sizes)}")
        return None

    labeled = [tuple(states[0].points)]
    for nxt in states[1:]:
        images = [m.map_eval(x) for x in labeled[-1]]
        targets = list(nxt.points)
        pairs = sorted((circle_distance(img, t), a, b) for a, img in enumerate(images)
                       for b, t in enumerate(targets))
        assigned: Dict[int, float] = {}
        used = set()
        for dist, a, b in pairs:
            if a in assigned or b in used:
                continue
            if dist > delta:
                logger.warning(f"Strand matching gap {dist} exceeds delta {delta}")
                return None
            assigned[a] = targets[b]
            used.add(b)
        labeled.append(tuple(assigned[a] for a in range(len(images))))
    return PseudoOrbit(window, labeled, delta)


def _strand_sup(m: MorseSmaleCircleMap, starts: np.ndarray, strand: np.ndarray) -> np.ndarray:
    """sup_i d(f^i(z), y_i) for candidate starts z at the first index"""
    current = np.asarray(starts, dtype=float)
    worst = circle_distance(current, strand[0])
    for target in strand[1:]:
        current = m.map_eval_array(current)
        worst = np.maximum(worst, circle_distance(current, target))
    return worst


def _shadow_strand(m: MorseSmaleCircleMap, strand: np.ndarray, eta: float,
                   refinements: int) -> Tuple[float, float]:
    """Best starting point for one strand and its sup distance"""
    steps = int(round(1.0 / eta))
    candidates = np.concatenate([np.arange(steps) / steps, [strand[0]]])
    sup = _strand_sup(m, candidates, strand)
    best = int(np.argmin(sup))
    z, value = float(candidates[best]), float(sup[best])

    width = eta
    for _ in range(refinements):
        local = np.mod(z + np.linspace(-width, width, 201), 1.0)
        local_sup = _strand_sup(m, local, strand)
        j = int(np.argmin(local_sup))
        if local_sup[j] < value:
            z, value = float(local[j]), float(local_sup[j])
        width /= 100.0
    return z, value


def shadow_finite_2f(m: MorseSmaleCircleMap, po: PseudoOrbit, epsilon: float, eta: float = 1e-4,
                     refinements: int = 2) -> Dict[str, Any]:
    """Shadow a labeled finite-set pseudo-orbit of 2^f strand by strand.

    Args:
        m: Circle map
        po: States are tuples of s points; strand j is the sequence of j-th entries
        epsilon: Target accuracy
        eta: Initial grid resolution
        refinements: Local zoom passes around the best grid point

    Returns:
        Report with the shadowing set A (points at index 0), the sup distance
        and verdict shadowed or inconclusive
    """
    ok, max_gap = verify_pseudo_orbit(po, lambda s: tuple(m.map_eval(x) for x in s),
                                      lambda a, b: float(np.max(circle_distance(np.array(a), np.array(b)))))
    if not ok:
        raise PreconditionError(f"Strands are not {po.delta}-pseudo-orbits (max gap {max_gap})")

    states = np.array(po.states, dtype=float)
    starts = []
    for j in range(states.shape[1]):
        strand = states[:, j]
        z, _ = _shadow_strand(m, strand, eta, refinements)
        starts.append(z)

    # independent re-evaluation through 2^f on sets
    current = FiniteSubset.from_points(starts)
    sup = 0.0
    for i in po.indices():
        target = FiniteSubset.from_points(po[i])
        sup = max(sup, hausdorff_finite(current, target).value)
        current = FiniteSubset.from_points(m.map_eval(x) for x in current)

    shadow_set = FiniteSubset.from_points(m.iterate_point(z, po.window) for z in starts)
    verdict = Verdict.SHADOWED if sup <= epsilon else Verdict.INCONCLUSIVE
    logger.info(f"2^f shadowing of {states.shape[1]} strands: sup {sup:.3g} ({verdict.value})")
    return {
        'strands': int(states.shape[1]),
        'window': po.window,
        'delta': po.delta,
        'epsilon': epsilon,
        'eta': eta,
        'shadow_set': list(shadow_set.points),
        'sup_distance': sup,
        'margin': epsilon - sup,
        'verdict': verdict,
    }
