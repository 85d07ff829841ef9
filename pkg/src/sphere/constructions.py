"""
Continua of the North-South sphere map: the invariant spine, periodic and
homoclinic continua, and the conjugacy of an invariant special dendrite
with the comb dendrite
"""
import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import config
from ..errors import InvariantBreach, PreconditionError
from ..systems.dendrite import P_END, Q_END, DendriteMap, DendritePoint, dendrite_distance
from ..systems.sphere import (INF, Piece, SphereContinuum, chordal_distance, hausdorff_sphere,
                              is_infinite, ns_iterate)

logger = logging.getLogger(__name__)

FIXED_POINTS = (Piece.point(0j), Piece.point(INF))


def _require_regular(x: complex):
    if x == 0 or is_infinite(x):
        raise PreconditionError("x must differ from the fixed points 0 and infinity")


def build_fixed_spine(x: complex) -> SphereContinuum:
    """Closure of the orbit of [x/2, x]: the ray from 0 through x, closed by infinity"""
    _require_regular(x)
    return SphereContinuum((Piece.ray(0j, x),))


def windowed_orbit(gamma: SphereContinuum, stride: int, window: int) -> SphereContinuum:
    """Union of the images of gamma under steps j*stride, |j| <= window, with 0 and infinity"""
    pieces = list(FIXED_POINTS)
    for j in range(-window, window + 1):
        pieces += gamma.image(j * stride).pieces
    return SphereContinuum.of(pieces)


def default_detour(x: complex, period: int, vertices: int = 8) -> List[complex]:
    """Polyline from x to x/2^period: straight for period 1, else a semicircle on the left of the ray"""
    end = x / 2 ** period
    if period == 1:
        return [x, end]
    center, radius = 0.5 * (x + end), 0.5 * abs(x - end)
    unit = x / abs(x)
    angles = np.linspace(0.0, math.pi, vertices)
    points = [center + radius * unit * complex(math.cos(t), math.sin(t)) for t in angles]
    points[0], points[-1] = x, end
    return points


def _polyline_distance(vertices: Sequence[complex], z: complex) -> float:
    """Plane distance from z to a polyline"""
    best = math.inf
    for a, b in zip(vertices, list(vertices[1:]) or list(vertices)):
        e = b - a
        u = 0.0 if e == 0 else min(max(((z - a) * e.conjugate()).real / abs(e) ** 2, 0.0), 1.0)
        best = min(best, abs(z - (a + u * e)))
    return best


def build_periodic_continuum(period: int, x: complex = 1 + 0j, detour: Optional[Sequence[complex]] = None,
                             window: int = 20, eta: Optional[float] = None) -> Dict[str, Any]:
    """Windowed period-N continuum from a detour joining x to f^N(x).

    step^N is 2^N-Lipschitz for the chordal metric, so the 2N-step distance
    is bounded by (1 + 2^N) times the defect.

    Returns:
        Report with the continuum, its defect d_H(step^N K, K) and the
        2N-step check
    """
    _require_regular(x)
    if period < 1:
        raise PreconditionError(f"period must be >= 1, got {period}")
    eta = config.SPHERE_RESOLUTION if eta is None else eta
    vertices = list(detour) if detour is not None else default_detour(x, period)
    if abs(vertices[0] - x) > 1e-12 or abs(vertices[-1] - x / 2 ** period) > 1e-12:
        raise PreconditionError("Detour must join x to f^N(x)")

    forbidden = [x * 2.0 ** (-j) for j in range(-period + 1, period) if j != 0]
    for z in forbidden:
        if _polyline_distance(vertices, z) <= config.MEMBERSHIP_TOL:
            raise PreconditionError(f"Detour passes through the iterate {z} of x")

    gamma = SphereContinuum.polyline(vertices)
    k_window = windowed_orbit(gamma, period, window)
    defect = hausdorff_sphere(k_window.image(period), k_window, eta)
    double = hausdorff_sphere(k_window.image(2 * period), k_window, eta)

    report = {
        'period': period,
        'x': x,
        'window': window,
        'eta': eta,
        'detour': vertices,
        'pieces': len(k_window.pieces),
        'defect': defect.value,
        'double_step_distance': double.value,
        'double_step_bound': (1 + 2 ** period) * defect.value + 1e-12,
        'double_step_ok': double.value <= (1 + 2 ** period) * defect.value + 1e-12,
        'error_bound': 2 * eta,
    }
    logger.info(f"Periodic continuum N={period}, window {window}: defect {defect.value:.3e}")
    return report


def defect_schedule(period: int = 2, windows: Sequence[int] = (5, 10, 20, 40), x: complex = 1 + 0j,
                    eta: Optional[float] = None) -> Dict[str, Any]:
    rows = [{'window': w, 'defect': build_periodic_continuum(period, x, window=w, eta=eta)['defect']}
            for w in windows]
    monotone = all(b['defect'] <= a['defect'] + 1e-12 for a, b in zip(rows, rows[1:]))
    return {'period': period, 'rows': rows, 'non_increasing': monotone}


def _beta_segment(x: complex, beta: Optional[complex]) -> Tuple[complex, complex]:
    tip = x + 0.5j * x / abs(x) if beta is None else beta
    return x, tip


def build_homoclinic_witness(x: complex = 1 + 0j, beta_tip: Optional[complex] = None, window: int = 40,
                             eta: Optional[float] = None) -> Dict[str, Any]:
    """K = P + beta for the spine P through x and a segment beta attached at x.

    Returns:
        Report with the homoclinic table d_H(step^n K, P), the non-recurrence
        bound min_n d_H(step^n K, K) and the approximant tables
    """
    _require_regular(x)
    eta = config.SPHERE_RESOLUTION if eta is None else eta
    spine = build_fixed_spine(x)
    base, tip = _beta_segment(x, beta_tip)
    unit = x / abs(x)

    # beta may touch the spine only at x
    samples = base + (tip - base) * np.linspace(0.0, 1.0, 257)[1:]
    along = (samples * unit.conjugate()).real
    off_ray = np.where(along >= 0, np.abs((samples * unit.conjugate()).imag), np.abs(samples))
    if off_ray.min() <= config.MEMBERSHIP_TOL:
        raise PreconditionError("beta meets the spine away from its attachment point")

    beta = SphereContinuum((Piece.segment(base, tip),))
    for j in range(1, window + 1):
        if _polyline_distance([base * 2.0 ** -j, tip * 2.0 ** -j], tip) <= config.MEMBERSHIP_TOL:
            raise PreconditionError(f"beta meets its {j}-th iterate")

    k_set = spine.union(beta)
    homoclinic, recurrence = [], []
    for n in range(-window, window + 1):
        if n == 0:
            continue
        moved = k_set.image(n)
        homoclinic.append({'n': n, 'distance_to_spine': hausdorff_sphere(moved, spine, eta).value})
        if n > 0:
            recurrence.append(hausdorff_sphere(moved, k_set, eta).value)

    approximants = []
    for n in range(1, window + 1):
        k_n = k_set.union(beta.image(-n))
        approximants.append({
            'n': n,
            'approximant_distance': hausdorff_sphere(k_n, k_set, eta).value,
            'pushed_distance': hausdorff_sphere(k_n.image(n), k_set, eta).value,
        })

    tail = [row['distance_to_spine'] for row in homoclinic if abs(row['n']) == window]
    report = {
        'x': x,
        'beta': [base, tip],
        'window': window,
        'eta': eta,
        'error_bound': 2 * eta,
        'homoclinic': homoclinic,
        'homoclinic_tail': max(tail),
        'non_recurrence_eta': min(recurrence),
        'approximants': approximants,
        'approximant_final': approximants[-1]['approximant_distance'],
        'pushed_final': approximants[-1]['pushed_distance'],
    }
    logger.info(f"Homoclinic witness: tail {report['homoclinic_tail']:.3e}, "
                f"non-recurrence {report['non_recurrence_eta']:.3g}")
    return report


# ---- conjugacy with the comb dendrite ------------------------------------


def _block(ratio: float) -> Tuple[float, int]:
    """ratio = s * 2^-n with s in (1/2, 1]"""
    mantissa, exponent = math.frexp(ratio)
    if mantissa == 0.5:
        return 1.0, 1 - exponent
    return mantissa, -exponent


class SpecialDendriteConjugacy:
    """H = F^n o G o f^-n from the orbit of gamma + beta onto the comb dendrite.

    gamma = [x/2, x] goes onto the spine block [0, 1/2) by G(x*s) = 1 - s and
    beta = [x, x + c*i*x/|x|] onto leg 0 by height/c; 0 goes to q and infinity to p.
    """

    def __init__(self, x: complex = 1 + 0j, beta_tip: Optional[complex] = None):
        if not (x.imag == 0 and x.real > 0):
            raise PreconditionError("The conjugacy is tabulated for x on the positive real axis")
        self.x = x.real
        base, tip = _beta_segment(x, beta_tip)
        if tip.real != base.real or tip.imag <= 0:
            raise PreconditionError("beta must be a vertical segment above x")
        self.height = tip.imag
        self.dendrite = DendriteMap(1)

    def __call__(self, z: complex) -> DendritePoint:
        if is_infinite(z):
            return P_END
        if z == 0:
            return Q_END
        if z.real <= 0 or z.imag < 0:
            raise InvariantBreach(f"{z} lies outside the block decomposition")
        s, n = _block(z.real / self.x)
        if z.imag == 0:
            point = DendritePoint.spine(1 - Fraction(s))
        else:
            if s != 1.0:
                raise InvariantBreach(f"{z} is off every iterate of beta")
            y = z.imag * 2.0 ** n
            if y > self.height:
                raise InvariantBreach(f"{z} is above the tip of an iterate of beta")
            point = DendritePoint.leg(0, Fraction(y) / Fraction(self.height))
        return self.dendrite.iterate(point, n)

    def mesh(self, rng: np.random.Generator, size: int, window: int) -> List[complex]:
        """Seeded points of the windowed invariant dendrite, fixed points included"""
        points = [0j, INF]
        for _ in range(size - 2):
            n = int(rng.integers(-window, window + 1))
            scale = 2.0 ** (-n)
            if rng.random() < 0.5:
                s = 1.0 - 0.5 * rng.random()
                points.append(complex(self.x * s * scale, 0.0))
            else:
                points.append(complex(self.x * scale, self.height * rng.random() * scale))
        return points


def conjugacy_to_dendrite(x: complex = 1 + 0j, beta_tip: Optional[complex] = None, window: int = 30,
                          mesh_size: int = 1000, seed: int = 0,
                          radii: Sequence[float] = (0.1, 0.05, 0.01)) -> Dict[str, Any]:
    """Tabulate H on a mesh and check H(f(z)) = F(H(z)) exactly.

    Returns:
        Report with the residual, endpoint images and continuity moduli at
        0, infinity and the junctions f^n(x)
    """
    h_map = SpecialDendriteConjugacy(x, beta_tip)
    rng = np.random.default_rng(seed)
    mesh = h_map.mesh(rng, mesh_size, window)
    fmap = DendriteMap(1)

    residual = 0.0
    images = []
    for z in mesh:
        hz = h_map(z)
        images.append(hz)
        residual = max(residual, dendrite_distance(h_map(ns_iterate(z, 1)), fmap(hz)))

    mesh_arr = np.array(mesh)
    moduli = []
    anchors = [('zero', 0j, Q_END), ('infinity', INF, P_END)]
    anchors += [(f'junction_{n}', complex(h_map.x * 2.0 ** -n, 0.0), None) for n in range(-2, 3)]
    for name, anchor, target in anchors:
        target = target if target is not None else h_map(anchor)
        near = chordal_distance(mesh_arr, anchor)
        for r in radii:
            values = [dendrite_distance(images[i], target) for i in np.nonzero(near < r)[0]]
            moduli.append({'anchor': name, 'radius': r, 'points': len(values),
                           'modulus': max(values) if values else 0.0})

    shrinking = True
    for name, _, _ in anchors:
        series = [row['modulus'] for row in moduli if row['anchor'] == name]
        shrinking = shrinking and all(b <= a + 1e-12 for a, b in zip(series, series[1:]))

    report = {
        'x': x,
        'window': window,
        'mesh_size': len(mesh),
        'seed': seed,
        'residual': residual,
        'h_zero': Q_END.to_dict(),
        'h_infinity': P_END.to_dict(),
        'continuity': moduli,
        'moduli_shrink': shrinking,
        'passed': residual <= 1e-9 and shrinking,
    }
    logger.info(f"Special dendrite conjugacy: residual {residual:.3g} over {len(mesh)} mesh points")
    return report
