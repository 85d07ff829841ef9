"""
A delta-pseudo-orbit of C(f) for the North-South map that no continuum
epsilon-shadows, certified over parametric candidate families
"""
import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.spatial import cKDTree

from ..errors import InvariantBreach, PreconditionError
from ..hyperspace.shadowing import FalsificationReport, PseudoOrbit, Verdict, verify_pseudo_orbit
from ..systems.sphere import Piece, SphereContinuum, chordal_distance, discretize, hausdorff_sphere, to_sphere
from ..utils.workers import chunked, parallel_map

logger = logging.getLogger(__name__)

GREAT_CIRCLE = SphereContinuum((Piece.ray(0j, 1), Piece.ray(0j, -1)))
FAMILIES = ('line', 'segment', 'circle_through_zero', 'centered_circle', 'detour')


def build_sphere_pseudo_orbit(delta: float, window: int) -> PseudoOrbit:
    """Real great circle at 0, its delta/2-truncations spliced on either side.

    x_1 = [-R, R] drops the delta/2 chordal collar of infinity and
    x_-1 = rays from +-rho drops the collar of 0; the tails are true orbits.
    """
    if not 0 < delta < 2:
        raise PreconditionError(f"delta must lie in (0, 2), got {delta}")
    c = delta / 2
    radius = math.sqrt((2 / c) ** 2 - 1)
    rho = c / math.sqrt(4 - c * c)

    states = {0: GREAT_CIRCLE,
              1: SphereContinuum((Piece.segment(-radius, radius),)),
              -1: SphereContinuum((Piece.ray(rho, 1), Piece.ray(-rho, -1)))}
    for i in range(1, window):
        states[i + 1] = states[i].image(1)
        states[-i - 1] = states[-i].image(-1)
    return PseudoOrbit(window, [states[i] for i in range(-window, window + 1)], delta)


def _closed(vertices: List[complex]) -> SphereContinuum:
    vertices = list(vertices) + [vertices[0]]
    return SphereContinuum.polyline(vertices)


def _random_radius(rng: np.random.Generator, lo: float = -6.0, hi: float = 6.0) -> float:
    return float(np.exp(rng.uniform(lo, hi)))


def sample_candidate(rng: np.random.Generator, family: str, theta: float, vertices: int = 32) -> SphereContinuum:
    """One continuum from a parametric family, biased toward the real great circle"""
    if family == 'line':
        angle = rng.uniform(-2 * theta, 2 * theta) if rng.random() < 0.5 else rng.uniform(-math.pi / 2, math.pi / 2)
        u = complex(math.cos(angle), math.sin(angle))
        return SphereContinuum((Piece.ray(0j, u), Piece.ray(0j, -u)))
    if family == 'segment':
        ends = []
        for sign in (-1, 1):
            phi = rng.uniform(-theta, theta)
            ends.append(sign * _random_radius(rng) * complex(math.cos(phi), math.sin(phi)))
        return SphereContinuum((Piece.segment(*ends),))
    if family == 'circle_through_zero':
        r, alpha = _random_radius(rng, -4, 4), rng.uniform(0, 2 * math.pi)
        center = r * complex(math.cos(alpha), math.sin(alpha))
        ts = alpha + math.pi + np.linspace(0, 2 * math.pi, vertices, endpoint=False)
        points = [center + r * complex(math.cos(t), math.sin(t)) for t in ts]
        points[0] = 0j
        return _closed(points)
    if family == 'centered_circle':
        r = _random_radius(rng, -4, 4)
        ts = np.linspace(0, 2 * math.pi, vertices, endpoint=False)
        return _closed([r * complex(math.cos(t), math.sin(t)) for t in ts])
    if family == 'detour':
        r, side = _random_radius(rng, -6, 2), (1 if rng.random() < 0.5 else -1)
        ts = np.linspace(0, math.pi, vertices // 2 + 1)
        arc = [r * complex(math.cos(t), side * math.sin(t)) for t in ts]
        arc[0], arc[-1] = complex(r), complex(-r)
        return SphereContinuum((Piece.ray(r, 1), Piece.ray(-r, -1))).union(SphereContinuum.polyline(arc))
    raise PreconditionError(f"Unknown candidate family {family!r}")


def wedge_lines(theta: float) -> Tuple[SphereContinuum, SphereContinuum]:
    """The lines through 0 at angles +theta and -theta, bounding the wedge around the real great circle"""
    lines = []
    for sign in (1, -1):
        u = complex(math.cos(sign * theta), math.sin(sign * theta))
        lines.append(SphereContinuum((Piece.ray(0j, u), Piece.ray(0j, -u))))
    return lines[0], lines[1]


def _gap_to_great_circle(height: np.ndarray) -> np.ndarray:
    """Chordal distance to the real great circle (the plane Y = 0) from sphere points at height |Y|"""
    return 2 * np.sin(np.arcsin(np.clip(np.abs(height), 0.0, 1.0)) / 2)


def _moduli(points: np.ndarray) -> np.ndarray:
    with np.errstate(divide='ignore'):
        return np.sqrt(np.clip(1 + points[:, 2], 0.0, None) / np.clip(1 - points[:, 2], 0.0, None))


def _off_angles(points: np.ndarray) -> np.ndarray:
    lon = np.abs(np.arctan2(points[:, 1], points[:, 0]))
    return np.minimum(lon, math.pi - lon)


def claim_annotations(candidate: SphereContinuum, theta: float, eta: float) -> Tuple[bool, bool]:
    """(meets 0 or infinity, leaves the wedge |arg z mod pi| <= theta), at resolution eta"""
    points = discretize(candidate, eta)
    fixed = to_sphere(np.array([0j, complex(math.inf, 0)]))
    meets_fixed = bool(np.min(np.linalg.norm(points[:, None, :] - fixed[None, :, :], axis=-1)) <= eta)

    moduli = _moduli(points)
    regular = (moduli > 0) & np.isfinite(moduli)
    leaves_wedge = bool(np.any(_off_angles(points[regular]) > theta + 1e-12))
    return meets_fixed, leaves_wedge


def predict_failure(candidate: SphereContinuum, theta: float, delta: float, window: int, threshold: float,
                    eta: float) -> Tuple[Optional[str], Optional[int]]:
    """Index at which the fixed-point and wedge arguments force d_H(step^i A, x_i) > threshold.

    'zero': a point of A near 0 stays near 0 under backward steps while
    x_-i retreats toward infinity. 'infinity' is the forward mirror.
    'escape': a point of A outside the wedge is rescaled to modulus about 1,
    where it is farthest from the real great circle. 'wedge': A stays in
    one half of the wedge and misses the far half of x_0. Each lower bound
    must clear threshold + 2*eta; (None, None) when none does in the window.
    """
    c = delta / 2
    radius, rho = math.sqrt((2 / c) ** 2 - 1), c / math.sqrt(4 - c * c)
    margin = threshold + 2 * eta
    points = discretize(candidate, eta)
    moduli = _moduli(points)

    nearest, farthest = float(moduli.min()), float(moduli.max())
    if nearest < rho / 2:
        for i in range(1, window + 1):
            if chordal_distance(complex(nearest * 2.0 ** i), complex(rho * 2.0 ** (i - 1))) > margin:
                return 'zero', -i
    if farthest > 2 * radius:
        for i in range(1, window + 1):
            if chordal_distance(complex(farthest * 2.0 ** -i), complex(radius * 2.0 ** (1 - i))) > margin:
                return 'infinity', i

    regular = (moduli > 0) & np.isfinite(moduli)
    off = _off_angles(points[regular])
    outside = off > theta + 1e-12
    if np.any(outside):
        m = moduli[regular][outside]
        shift = np.clip(np.rint(np.log2(m)), -window, window)
        scaled = m * 2.0 ** -shift
        height = 2 * scaled * np.sin(off[outside]) / (1 + scaled ** 2)
        gaps = _gap_to_great_circle(height)
        best = int(np.argmax(gaps))
        if gaps[best] > margin:
            return 'escape', int(shift[best])
        return None, None

    halves = np.cos(np.arctan2(points[regular, 1], points[regular, 0])) > 0
    if halves.size and (halves.all() or not halves.any()) and math.sqrt(2) > margin:
        return 'wedge', 0
    return None, None


class _Targets:
    """Discretized pseudo-orbit states with their search trees"""

    def __init__(self, po: PseudoOrbit, eta: float):
        self.points = {i: discretize(po[i], eta) for i in po.indices()}
        self.trees = {i: cKDTree(pts) for i, pts in self.points.items()}

    def distance(self, i: int, candidate_points: np.ndarray) -> float:
        forward = self.trees[i].query(candidate_points)[0].max()
        backward = cKDTree(candidate_points).query(self.points[i])[0].max()
        return float(max(forward, backward))


def _search_order(window: int) -> List[int]:
    order = [0]
    for i in range(1, window + 1):
        order += [i, -i]
    return order


def sphere_nonshadowing_sweep(epsilon: float = 0.2, delta: float = 0.02, window: int = 50, eta: float = 2e-3,
                              per_family: int = 2000, audit_samples: int = 100, seed: int = 0,
                              keep_candidates: bool = False) -> FalsificationReport:
    """Certify that no candidate continuum epsilon-shadows the great-circle pseudo-orbit.

    Indices are tried in the order 0, 1, -1, 2, -2, ...; a candidate fails
    once some d_H(step^i A, x_i) exceeds epsilon + 2*eta.

    Every candidate is also given the index its fixed-point or wedge bound
    predicts (see predict_failure); claims_consistent records that the
    measured distance exceeds the threshold there.

    Args:
        epsilon: Shadowing accuracy
        delta: Pseudo-orbit gap
        window: N
        eta: Chordal discretization resolution
        per_family: Candidates drawn per parametric family
        audit_samples: Failures re-checked at resolution eta/2
        seed: Candidate and audit seed
        keep_candidates: Attach per-candidate rows to the report details

    Returns:
        FalsificationReport with verdict falsified when every candidate fails
    """
    if not 0 < delta < epsilon:
        raise PreconditionError(f"Need 0 < delta < epsilon, got delta={delta}, epsilon={epsilon}")
    if not 0 < 2 * eta < epsilon:
        raise PreconditionError(f"Resolution eta={eta} too coarse for epsilon={epsilon}")

    po = build_sphere_pseudo_orbit(delta, window)
    _, max_gap = verify_pseudo_orbit(po, lambda c: c.image(1), lambda a, b: hausdorff_sphere(a, b, eta).value)
    if max_gap > delta + 2 * eta:
        raise InvariantBreach(f"Sphere pseudo-orbit has gap {max_gap} > {delta} + 2*eta")

    theta = min(2 * math.asin(min(epsilon, 1.0)), math.pi / 2)
    clearance = min(float(_gap_to_great_circle(discretize(line, eta)[:, 1]).max()) for line in wedge_lines(theta))
    if not clearance > epsilon:
        raise PreconditionError(f"Wedge lines at angle {theta} stay within the {epsilon}-collar of the great circle")
    rng = np.random.default_rng(seed)
    candidates = [('great_circle', GREAT_CIRCLE)]
    candidates += [(family, sample_candidate(rng, family, theta)) for family in FAMILIES for _ in range(per_family)]
    targets = _Targets(po, eta)
    order = _search_order(window)
    threshold = epsilon + 2 * eta
    logger.info(f"Sphere non-shadowing sweep: {len(candidates)} candidates, window {window}, "
                f"eps={epsilon}, delta={delta}, eta={eta}")

    def sweep(block: List[Tuple[str, SphereContinuum]]) -> List[Dict[str, Any]]:
        rows = []
        for family, candidate in block:
            margin, failing, values = -math.inf, None, {}
            for i in order:
                values[i] = targets.distance(i, discretize(candidate.image(i), eta))
                margin = max(margin, values[i] - epsilon)
                if values[i] > threshold:
                    failing = i
                    break
            meets_fixed, leaves_wedge = claim_annotations(candidate, theta, eta)
            claim, claim_index = predict_failure(candidate, theta, delta, window, threshold, eta)
            confirmed = None
            if claim is not None:
                if claim_index not in values:
                    values[claim_index] = targets.distance(claim_index, discretize(candidate.image(claim_index), eta))
                confirmed = values[claim_index] > threshold
            rows.append({'family': family, 'margin': margin, 'failing_index': failing,
                         'meets_fixed': meets_fixed, 'leaves_wedge': leaves_wedge,
                         'claim': claim, 'claim_index': claim_index, 'claim_confirmed': confirmed})
        return rows

    rows = [row for part in parallel_map(sweep, chunked(candidates, 25), desc="sphere sweep") for row in part]

    failed = [row for row in rows if row['failing_index'] is not None]
    worst_margin = min(row['margin'] for row in rows)
    survivors = len(rows) - len(failed)
    verdict = Verdict.FALSIFIED if survivors == 0 else Verdict.INCONCLUSIVE
    contradicted = sum(1 for row in rows if row['claim_confirmed'] is False)
    unresolved = sum(1 for row in rows if row['claim'] is None)
    if contradicted:
        logger.warning(f"{contradicted} candidates pass at the index their fixed-point or wedge bound predicts")

    counts: Dict[Tuple[str, Optional[int]], int] = {}
    for row in rows:
        key = (row['family'], row['failing_index'])
        counts[key] = counts.get(key, 0) + 1
    ordered = sorted(counts.items(), key=lambda item: (item[0][0], item[0][1] is None, item[0][1] or 0))
    histogram = [{'kind': family, 'failing_index': index, 'count': count} for (family, index), count in ordered]

    audit = _audit(candidates, rows, po, epsilon, eta, audit_samples, seed)
    report = FalsificationReport(
        epsilon=epsilon, delta=delta, candidates_tested=len(rows), worst_margin=worst_margin, verdict=verdict,
        window=window, eta=eta, max_gap=max_gap, survivors=survivors, failure_histogram=histogram, audit=audit,
        details={
            'theta': theta,
            'families': {family: per_family for family in FAMILIES},
            'fixed_point_candidates': sum(row['meets_fixed'] for row in rows),
            'wedge_leaving_candidates': sum(row['leaves_wedge'] for row in rows),
            'forward_failures': sum(1 for row in failed if row['failing_index'] > 0),
            'backward_failures': sum(1 for row in failed if row['failing_index'] < 0),
            'immediate_failures': sum(1 for row in failed if row['failing_index'] == 0),
            'wedge_clearance': clearance,
            'claim_counts': {claim: sum(1 for row in rows if row['claim'] == claim)
                             for claim in ('zero', 'infinity', 'escape', 'wedge')},
            'claims_unresolved': unresolved,
            'claims_contradicted': contradicted,
            'claims_consistent': contradicted == 0,
        })
    if keep_candidates:
        report.details['candidates'] = rows
    if not audit['passed']:
        raise InvariantBreach(f"Sphere sweep audit failed: {audit['mismatches']} mismatches")

    logger.info(f"Sphere sweep verdict {verdict.value}: worst margin {worst_margin:.4g}, {survivors} survivors")
    return report


def _audit(candidates: List[Tuple[str, SphereContinuum]], rows: List[Dict[str, Any]], po: PseudoOrbit,
           epsilon: float, eta: float, samples: int, seed: int) -> Dict[str, Any]:
    """Re-check certified failures at the finer resolution eta/2"""
    failed = [k for k, row in enumerate(rows) if row['failing_index'] is not None]
    rng = np.random.default_rng(seed + 1)
    chosen = rng.choice(failed, size=min(samples, len(failed)), replace=False) if failed else []

    mismatches = 0
    for k in chosen:
        i = rows[k]['failing_index']
        value = hausdorff_sphere(candidates[k][1].image(i), po[i], eta / 2).value
        if not value > epsilon:
            mismatches += 1
            logger.warning(f"Audit mismatch for candidate {k} ({candidates[k][0]}) at index {i}: {value}")
    return {'samples': len(chosen), 'mismatches': mismatches, 'seed': seed, 'eta': eta / 2,
            'passed': mismatches == 0}
