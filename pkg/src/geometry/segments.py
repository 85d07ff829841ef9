"""
Exact Hausdorff distance between finite unions of plane segments
"""
import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from ..errors import PreconditionError

logger = logging.getLogger(__name__)

Segment = Tuple[Tuple[float, float], Tuple[float, float]]
Quadratic = Tuple[float, float, float]


def _as_array(segments: Sequence[Segment]) -> np.ndarray:
    arr = np.asarray(segments, dtype=float).reshape(-1, 2, 2)
    if arr.shape[0] == 0:
        raise PreconditionError("Segment unions must be nonempty")
    return arr


def point_segment_distance(points: np.ndarray, segments: np.ndarray) -> np.ndarray:
    """Matrix of Euclidean distances from points (m, 2) to segments (s, 2, 2)"""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    q0 = segments[:, 0, :][None, :, :]
    e = (segments[:, 1, :] - segments[:, 0, :])[None, :, :]
    rel = points[:, None, :] - q0
    norm2 = np.sum(e * e, axis=-1)
    u = np.where(norm2 > 0, np.sum(rel * e, axis=-1) / np.where(norm2 > 0, norm2, 1.0), 0.0)
    u = np.clip(u, 0.0, 1.0)
    foot = q0 + u[..., None] * e
    return np.linalg.norm(points[:, None, :] - foot, axis=-1)


def _distance_pieces(p0: np.ndarray, d: np.ndarray, seg: np.ndarray) -> List[Tuple[float, float, Quadratic]]:
    """Squared distance from p0 + t*d to one segment as quadratics on pieces of [0, 1]"""
    q0, q1 = seg
    e = q1 - q0
    norm2 = float(e @ e)

    def to_point(q: np.ndarray) -> Quadratic:
        r0 = p0 - q
        return float(d @ d), 2.0 * float(r0 @ d), float(r0 @ r0)

    if norm2 == 0.0:
        return [(0.0, 1.0, to_point(q0))]

    alpha = float((p0 - q0) @ e) / norm2
    beta = float(d @ e) / norm2
    r0 = p0 - q0 - alpha * e
    r1 = d - beta * e
    inside = (float(r1 @ r1), 2.0 * float(r0 @ r1), float(r0 @ r0))

    cuts = [0.0, 1.0]
    if beta != 0.0:
        cuts += [t for t in (-alpha / beta, (1.0 - alpha) / beta) if 0.0 < t < 1.0]
    cuts = sorted(set(cuts))

    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        u = alpha + beta * 0.5 * (lo + hi)
        quad = to_point(q0) if u <= 0.0 else to_point(q1) if u >= 1.0 else inside
        pieces.append((lo, hi, quad))
    return pieces


def _crossings(f: List[Tuple[float, float, Quadratic]], g: List[Tuple[float, float, Quadratic]]) -> List[float]:
    """Parameters in (0, 1) where two piecewise quadratics agree"""
    cuts = sorted({t for lo, hi, _ in f + g for t in (lo, hi)})
    roots = list(cuts)
    for lo, hi in zip(cuts, cuts[1:]):
        mid = 0.5 * (lo + hi)
        qf = next(q for a, b, q in f if a <= mid <= b)
        qg = next(q for a, b, q in g if a <= mid <= b)
        a, b, c = (x - y for x, y in zip(qf, qg))
        if abs(a) < 1e-300:
            if abs(b) > 1e-300:
                roots.append(-c / b)
            continue
        disc = b * b - 4 * a * c
        if disc < 0:
            continue
        sq = math.sqrt(disc)
        roots += [(-b - sq) / (2 * a), (-b + sq) / (2 * a)]
    return [t for t in roots if 0.0 <= t <= 1.0]


def directed_segments(a: Sequence[Segment], b: Sequence[Segment]) -> float:
    """sup over x in the union A of the distance from x to the union B.

    Distance to a segment is convex along a segment of A, so on every stretch
    where one segment of B is nearest the supremum sits at a stretch end;
    stretch ends are 0, 1 and the crossings of the distance functions.
    """
    sa, sb = _as_array(a), _as_array(b)
    worst = 0.0
    for p0, p1 in sa:
        d = p1 - p0
        pieces = [_distance_pieces(p0, d, seg) for seg in sb]
        candidates = {0.0, 1.0}
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                candidates.update(_crossings(pieces[i], pieces[j]))
        ts = np.array(sorted(candidates))
        points = p0[None, :] + ts[:, None] * d[None, :]
        worst = max(worst, float(point_segment_distance(points, sb).min(axis=1).max()))
    return worst


def hausdorff_segments(a: Sequence[Segment], b: Sequence[Segment]) -> float:
    """Exact Hausdorff distance between two segment unions"""
    return max(directed_segments(a, b), directed_segments(b, a))


def sample_segments(segments: Sequence[Segment], eta: float) -> np.ndarray:
    """Points of the union with spacing at most eta along every segment"""
    out = []
    for p0, p1 in _as_array(segments):
        count = max(int(math.ceil(np.linalg.norm(p1 - p0) / eta)), 1) + 1
        t = np.linspace(0.0, 1.0, count)[:, None]
        out.append(p0[None, :] + t * (p1 - p0)[None, :])
    return np.concatenate(out)


def hausdorff_point_clouds(p: np.ndarray, q: np.ndarray) -> float:
    """Hausdorff distance between two finite point clouds"""
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    if p.shape[0] * q.shape[0] <= 1_000_000:
        matrix = cdist(p, q)
        return float(max(matrix.min(axis=1).max(), matrix.min(axis=0).max()))
    forward = cKDTree(q).query(p)[0].max()
    backward = cKDTree(p).query(q)[0].max()
    return float(max(forward, backward))


def hausdorff_segments_sampled(a: Sequence[Segment], b: Sequence[Segment], eta: float) -> float:
    """Brute-force value on eta-samples; within eta of the exact distance"""
    return hausdorff_point_clouds(sample_segments(a, eta), sample_segments(b, eta))
