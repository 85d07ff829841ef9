"""
Recurrence structure of 2^f and C(f) on the circle: periodic orbit closures,
homoclinic witnesses, fixed continua and wandering certificates
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import InvariantBreach, PreconditionError
from ..systems.circle import CircleContinuum, ContinuumKind, MorseSmaleCircleMap, circle_distance
from ..utils.workers import chunked, parallel_map
from .metric import FiniteSubset, hausdorff_arrays, hausdorff_continua, hausdorff_finite, induced_2f_step

logger = logging.getLogger(__name__)

FIXED_TOL = 1e-12


def _require_not_fixed(m: MorseSmaleCircleMap, x: float):
    fixed = m.fixed_coordinates()
    if fixed and float(circle_distance(np.array(fixed), x).min()) <= FIXED_TOL:
        raise PreconditionError(f"Base point {x} is a fixed point; its orbit closure degenerates")


@dataclass
class OrbitClosureApprox:
    """Truncated orbit closure {f^(stride*i)(x): |i| <= trunc} together with Fix(f)"""
    base: float
    stride: int
    trunc: int
    points: FiniteSubset
    defect: float
    periodicity: List[Dict[str, float]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'base': self.base,
            'stride': self.stride,
            'trunc': self.trunc,
            'size': len(self.points),
            'defect': self.defect,
            'periodicity': self.periodicity,
        }


def _step_power(m: MorseSmaleCircleMap, a: FiniteSubset, power: int) -> FiniteSubset:
    for _ in range(power):
        a = induced_2f_step(m, a)
    return a


def build_orbit_closure(m: MorseSmaleCircleMap, x: float, stride: int, trunc: int,
                        periodicity_checks: int = 5) -> OrbitClosureApprox:
    """Approximate the stride-periodic point of 2^f generated by x.

    Args:
        m: Circle map
        x: Base point, not fixed
        stride: Period of the orbit closure under 2^f
        trunc: Number of strides kept on each side
        periodicity_checks: j range of the periodicity table

    Returns:
        OrbitClosureApprox with defect d_H((2^f)^stride(points), points)
    """
    _require_not_fixed(m, x)
    if stride < 1 or trunc < 0:
        raise PreconditionError(f"stride must be >= 1 and trunc >= 0, got {stride}, {trunc}")

    forward, backward = [x], [x]
    for _ in range(trunc):
        forward.append(m.iterate_point(forward[-1], stride))
        backward.append(m.iterate_point(backward[-1], -stride))
    points = FiniteSubset.from_points(forward + backward[1:] + m.fixed_coordinates())

    defect = hausdorff_finite(_step_power(m, points, stride), points).value

    periodicity = []
    image = points
    for j in range(1, periodicity_checks + 1):
        image = _step_power(m, image, stride)
        periodicity.append({'j': j, 'distance': hausdorff_finite(image, points).value})

    logger.debug(f"Orbit closure of {x} (stride {stride}, trunc {trunc}): defect {defect:.3e}")
    return OrbitClosureApprox(x, stride, trunc, points, defect, periodicity)


def homoclinic_witness(m: MorseSmaleCircleMap, x: float, window: int,
                       approximant_window: Optional[int] = None) -> Dict[str, Any]:
    """Non-recurrent, non-wandering point K = Fix(f) + {x} of 2^f.

    Args:
        m: Circle map
        x: Point off Fix(f)
        window: N for the non-recurrence bound
        approximant_window: Range of j for the approximants K_j (defaults to window)

    Returns:
        Report with epsilon_star, epsilon_0 and the approximant tables
    """
    _require_not_fixed(m, x)
    approximant_window = approximant_window or window
    fixed = m.fixed_coordinates()
    k_set = FiniteSubset.from_points(fixed + [x])

    orbit = [x]
    for _ in range(max(window, approximant_window)):
        orbit.append(m.map_eval(orbit[-1]))

    image = k_set
    distances = []
    for n in range(1, window + 1):
        image = induced_2f_step(m, image)
        expected = FiniteSubset.from_points(fixed + [orbit[n]])
        if image != expected:
            raise InvariantBreach(f"(2^f)^{n}(K) differs from Fix(f) + f^{n}(x)")
        distances.append(hausdorff_finite(k_set, image).value)

    epsilon_star = min(distances)
    orbit_gap = min(circle_distance(orbit[n], x) for n in range(1, window + 1))
    fixed_gap = float(circle_distance(np.array(fixed), x).min())
    epsilon_0 = 0.5 * min(orbit_gap, fixed_gap)
    if epsilon_star < epsilon_0:
        raise InvariantBreach(f"epsilon* {epsilon_star} below the bound {epsilon_0}")

    rows = []
    preimage = x
    for j in range(1, approximant_window + 1):
        preimage = m.map_inverse(preimage)
        k_j = FiniteSubset.from_points(fixed + [x, preimage])
        pushed = FiniteSubset.from_points(fixed + [x, orbit[j]])
        rows.append({
            'j': j,
            'approximant_distance': hausdorff_finite(k_j, k_set).value,
            'pushed_distance': hausdorff_finite(pushed, k_set).value,
        })

    tail = rows[len(rows) // 2:]
    report = {
        'base': x,
        'window': window,
        'epsilon_star': epsilon_star,
        'epsilon_0': epsilon_0,
        'non_recurrent': epsilon_star >= epsilon_0 > 0,
        'approximants': rows,
        'approximant_final': rows[-1]['approximant_distance'] if rows else None,
        'pushed_final': rows[-1]['pushed_distance'] if rows else None,
        'monotone_tail': all(b['approximant_distance'] <= a['approximant_distance'] + 1e-12
                             and b['pushed_distance'] <= a['pushed_distance'] + 1e-12
                             for a, b in zip(tail, tail[1:])),
    }
    logger.info(f"Homoclinic witness at {x}: epsilon*={epsilon_star:.4g}, epsilon_0={epsilon_0:.4g}")
    return report


class ArcClass(Enum):
    DEGENERATE_D_ARC = "degenerate-d-arc"
    D_ARC = "d-arc"
    D_STAR_MIX_ARC = "d-star-mix-arc"
    D_MIX_ARC = "d-mix-arc"
    FULL = "full"


@dataclass(frozen=True)
class DArc:
    """A continuum whose boundary lies in the periodic set, with its C(f)-period"""
    continuum: CircleContinuum
    period: int
    arc_class: ArcClass

    def to_dict(self) -> Dict[str, Any]:
        return {'continuum': self.continuum.to_dict(), 'period': self.period,
                'class': self.arc_class.value}


def classify_continuum_period(m: MorseSmaleCircleMap, c: CircleContinuum,
                              fixed: Optional[List[float]] = None) -> DArc:
    """Exact C(f)-period (1 or 2) and taxonomy of a continuum with periodic boundary"""
    fixed = m.fixed_coordinates() if fixed is None else fixed
    image = m.continuum_image(c)
    if image == c:
        period = 1
    elif m.continuum_image(image) == c:
        period = 2
    else:
        raise InvariantBreach(f"{c.to_dict()} is not periodic under C(f)")

    if c.kind is ContinuumKind.FULL:
        arc_class = ArcClass.FULL
    elif c.kind is ContinuumKind.POINT:
        arc_class = ArcClass.DEGENERATE_D_ARC
    elif c.a in fixed and c.b in fixed:
        arc_class = ArcClass.D_ARC
    elif c.b == m.map_eval(c.a) and c.a not in fixed:
        arc_class = ArcClass.D_STAR_MIX_ARC
    else:
        arc_class = ArcClass.D_MIX_ARC
    return DArc(c, period, arc_class)


def enumerate_fixed_continua(m: MorseSmaleCircleMap) -> List[DArc]:
    """Fix(C(f)) for preserving maps; Fix(C(f)) and Per_2(C(f)) for reversing maps.

    Every returned continuum is checked against C(f) (or C(f)^2) exactly.
    """
    periodic = [pt.coordinate for pt in m.fixed_points()]
    fixed = m.fixed_coordinates()

    candidates = [CircleContinuum.point(p) for p in periodic]
    candidates += [CircleContinuum.arc(a, b) for a in periodic for b in periodic if a != b]
    candidates.append(CircleContinuum.full())

    result = [classify_continuum_period(m, c, fixed) for c in candidates]
    if not m.reversing and any(item.period != 1 for item in result):
        raise InvariantBreach("A D-arc of an orientation-preserving map moved")

    logger.info(f"Enumerated {len(result)} periodic continua for k={m.pairs} ({m.orientation.value})")
    return result


def _is_d_arc(m: MorseSmaleCircleMap, c: CircleContinuum) -> bool:
    periodic = [pt.coordinate for pt in m.fixed_points()]
    return c.a in periodic and c.b in periodic


def wandering_certificate(m: MorseSmaleCircleMap, arc: CircleContinuum, epsilon: float,
                          eta: float, window: int) -> Dict[str, Any]:
    """Grid evidence that a non-D-arc is a wandering point of C(f).

    Sweeps all arcs J with endpoints on the eta-grid within epsilon of the arc
    endpoints, computes min over 1 <= n <= window of d_H(C(f)^n(J), I), and
    halves epsilon' until every J with d_H(J, I) < epsilon' stays farther than
    epsilon' away.

    Returns:
        Report with status "certified" or "inconclusive"
    """
    if arc.kind is not ContinuumKind.ARC:
        raise PreconditionError("wandering_certificate takes an arc")
    if _is_d_arc(m, arc):
        raise PreconditionError(f"{arc.to_dict()} is a D-arc, hence a fixed point of C(f)")
    if epsilon <= 0:
        raise PreconditionError(f"epsilon must be positive, got {epsilon}")

    steps = int(round(1.0 / eta))
    grid = np.arange(steps) / steps

    def near(center: float) -> np.ndarray:
        return grid[circle_distance(grid, center) < epsilon]

    starts, ends = near(arc.a), near(arc.b)
    g1, g2 = np.meshgrid(starts, ends, indexing='ij')
    g1, g2 = g1.ravel(), g2.ravel()
    valid = g1 != g2
    g1, g2 = g1[valid], g2[valid]

    s_ref, l_ref = arc.start_length()
    wraps = g1 > g2
    initial = hausdorff_arrays(g1, np.where(wraps, 1.0 - g1 + g2, g2 - g1), s_ref, l_ref)

    def sweep(indices: List[int]) -> np.ndarray:
        idx = np.asarray(indices)
        a_lift, b_lift = g1[idx], g2[idx]
        best = np.full(idx.size, np.inf)
        for n in range(1, window + 1):
            a_lift, b_lift = m.lift(a_lift), m.lift(b_lift)
            s, l = m.arc_images(a_lift, b_lift, wraps[idx], n)
            best = np.minimum(best, hausdorff_arrays(s, l, s_ref, l_ref))
        return best

    blocks = chunked(list(range(g1.size)), 4096)
    returns = np.concatenate(parallel_map(sweep, blocks, desc="wandering sweep")) if blocks else np.array([])

    status, eps_prime, worst = "inconclusive", epsilon, None
    while eps_prime >= eta:
        mask = initial < eps_prime
        if mask.any():
            worst = float(returns[mask].min())
            if worst > eps_prime:
                status = "certified"
                break
        eps_prime *= 0.5

    report = {
        'arc': arc.to_dict(),
        'epsilon': epsilon,
        'eta': eta,
        'window': window,
        'candidates': int(g1.size),
        'status': status,
        'epsilon_prime': eps_prime if status == "certified" else None,
        'min_return_distance': worst,
        'self_return_distance': float(min(hausdorff_continua(m.iterate_continuum(arc, n), arc).value
                                          for n in range(1, window + 1))),
    }
    logger.info(f"Wandering certificate for {arc.to_dict()}: {status} (epsilon'={report['epsilon_prime']})")
    return report
