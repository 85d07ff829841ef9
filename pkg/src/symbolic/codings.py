"""
Codings into shift spaces: subsets of the sparse subshift, strands of a
circle map, and cone continua over the Hilbert cube
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from ..errors import InvariantBreach, PreconditionError
from ..systems.circle import MorseSmaleCircleMap, circle_distance
from .sequences import (SPARSE_FIXED, Alphabet, FiniteSupportSequence, hilbert_cube_distance, shift_step,
                        sparse_point, sparse_valid)

logger = logging.getLogger(__name__)


def random_sparse_point(rng: np.random.Generator, window: int, max_symbol: int = 10,
                        max_terms: int = 3) -> FiniteSupportSequence:
    """A valid sparse-subshift point with 1 to max_terms exceptions inside the window"""
    terms = int(rng.integers(1, max_terms + 1))
    indices = rng.choice(np.arange(-window, window + 1), size=terms, replace=False)
    symbols = rng.choice(np.arange(1, max_symbol + 1), size=terms, replace=False)
    values = {int(n): Fraction(1, int(p)) for n, p in zip(indices, symbols)}
    return FiniteSupportSequence.of(values, Fraction(0), Alphabet.SPARSE)


def return_floor(x: FiniteSupportSequence) -> Fraction:
    """Lower bound for D(shift^k x, x) valid for every k != 0.

    Each symbol occurs once, so x_{n+k} != x_n at every exception n; the
    entry that replaces x_n is 0 or another symbol of x.
    """
    values = [Fraction(v) for _, v in x.exceptions]
    best = Fraction(0)
    for n, v in x.exceptions:
        gap = min(abs(Fraction(v) - w) for w in values + [Fraction(0)] if w != Fraction(v))
        best = max(best, gap / 2 ** abs(n))
    return best


def sparse_shift_wandering_evidence(window: int, samples: Iterable[FiniteSupportSequence]) -> Dict[str, Any]:
    """Return distances r(x) = min_{1<=k<=window} D(shift^k x, x) against their floors.

    Returns:
        Report with one row per sample; passed when every r(x) is at least
        its floor and the floor is positive
    """
    rows = []
    for x in samples:
        if not sparse_valid(x):
            raise PreconditionError(f"Not a point of the sparse subshift: {x.to_dict()}")
        if x == SPARSE_FIXED:
            continue
        shifted, distances = x, []
        for _ in range(window):
            shifted = shift_step(shifted, 1)
            distances.append(hilbert_cube_distance(shifted, x))
        r = min(distances)
        floor = return_floor(x)
        rows.append({'point': x.to_dict(), 'return_distance': r, 'floor': floor,
                     'certified': floor > 0 and r >= floor})

    passed = all(row['certified'] for row in rows)
    logger.info(f"Sparse shift wandering evidence: {len(rows)} points, passed={passed}")
    return {'window': window, 'rows': rows, 'passed': passed}


def _pattern_bits(x: FiniteSupportSequence, r: int) -> Optional[Tuple[int, int]]:
    """(n, p) when x is the single-symbol point with 1/p at n and p <= r"""
    if len(x.exceptions) != 1:
        return None
    n, v = x.exceptions[0]
    v = Fraction(v)
    if v.numerator != 1 or v.denominator > r:
        return None
    return n, v.denominator


def code_sparse_subset(a: Iterable[FiniteSupportSequence], r: int) -> FiniteSupportSequence:
    """Sequence over {0,1}^r whose bit i at index n says whether 1/(i+1) at n lies in A"""
    bits: Dict[int, List[int]] = {}
    for x in a:
        if not sparse_valid(x):
            raise PreconditionError(f"Not a point of the sparse subshift: {x.to_dict()}")
        found = _pattern_bits(x, r)
        if found is None:
            continue
        n, p = found
        bits.setdefault(n, [0] * r)[p - 1] = 1
    zero = tuple([0] * r)
    return FiniteSupportSequence.of({n: tuple(v) for n, v in bits.items()}, zero, Alphabet.BINARY)


def sparse_subset_preimage(word: Mapping[int, Tuple[int, ...]], r: int) -> List[FiniteSupportSequence]:
    """A finite subset whose coding is the given window word"""
    subset = [SPARSE_FIXED]
    for n, bits in sorted(word.items()):
        if len(bits) != r:
            raise PreconditionError(f"Word entry at {n} has {len(bits)} bits, expected {r}")
        subset += [sparse_point(n, i + 1) for i, bit in enumerate(bits) if bit]
    return subset


def sparse_coding_check(r: int = 2, window: int = 10, samples: int = 1000, seed: int = 0) -> Dict[str, Any]:
    """Equivariance code(shift(A)) = shift(code(A)) and surjectivity onto window words"""
    rng = np.random.default_rng(seed)
    equivariant = surjective = 0
    for _ in range(samples):
        a = [random_sparse_point(rng, window, max_symbol=r + 2) for _ in range(int(rng.integers(1, 6)))]
        a += [sparse_point(int(n), int(p)) for n, p in zip(rng.integers(-window, window + 1, 3),
                                                             rng.integers(1, r + 1, 3))]
        image = [shift_step(x, 1) for x in a]
        if code_sparse_subset(image, r) == shift_step(code_sparse_subset(a, r), 1):
            equivariant += 1

        word = {n: tuple(int(b) for b in rng.integers(0, 2, r)) for n in range(-window, window + 1)}
        coded = code_sparse_subset(sparse_subset_preimage(word, r), r)
        if all(coded[n] == word[n] for n in word) and set(coded.support()) <= set(word):
            surjective += 1

    report = {'construction': 'sq', 'r': r, 'window': window, 'samples': samples, 'seed': seed,
              'equivariance_passed': equivariant, 'surjectivity_passed': surjective,
              'all_passed': equivariant == samples and surjective == samples}
    logger.info(f"Sparse subset coding: {equivariant}/{samples} equivariant, {surjective}/{samples} words hit")
    return report


# ---- strands of a circle map --------------------------------------------


@dataclass
class StrandCoding:
    """Table x^i_{-n} -> b^i_n for strands i < r and |n| <= window + 1"""
    map: MorseSmaleCircleMap
    window: int
    table: Dict[float, Tuple[int, int]]
    strands: List[List[float]]

    def code(self, x: float) -> FiniteSupportSequence:
        hit = self.table.get(x)
        if hit is None:
            return SPARSE_FIXED
        i, n = hit
        return sparse_point(n, i + 1)

    def point(self, i: int, n: int) -> float:
        """x^i_{-n}"""
        return self.strands[i][self.window + 1 - n]


def strand_starts(m: MorseSmaleCircleMap, r: int) -> List[float]:
    """Strand i starts in basin interval i mod 2k, spread over a fundamental domain"""
    if m.reversing:
        raise PreconditionError("Strand codings need an orientation-preserving map; pass to f^2")
    intervals = 2 * m.pairs
    per_interval = math.ceil(r / intervals)
    starts = []
    for i in range(r):
        j, slot = i % intervals, i // intervals
        center = (j + 0.5) / intervals
        starts.append(center + slot * (m.map_eval(center) - center) / per_interval)
    return starts


def strand_coding(m: MorseSmaleCircleMap, r: int, window: int, disjoint_tol: float = 1e-15,
                  off_strand_samples: int = 1000, seed: int = 0) -> Tuple[StrandCoding, Dict[str, Any]]:
    """Code r strands of backward orbits onto the sparse subshift and check it.

    Each strand is one exact forward orbit from f^-(window+1)(x_0), so f maps
    tabulated points onto tabulated points bit for bit.

    Raises:
        PreconditionError: strands meet each other or Fix(f) within disjoint_tol

    Returns:
        (coding, report with the equivariance, injectivity and off-strand counts)
    """
    depth = window + 1
    strands = []
    for x0 in strand_starts(m, r):
        z = m.iterate_point(x0, -depth)
        orbit = [z]
        for _ in range(2 * depth):
            orbit.append(m.map_eval(orbit[-1]))
        strands.append(orbit)

    points = np.array(strands).ravel()
    fixed = np.asarray(m.fixed_coordinates())
    gaps = circle_distance(points[:, None], points[None, :]) + np.diag(np.full(points.size, np.inf))
    to_fixed = circle_distance(points[:, None], fixed[None, :])
    if gaps.min() <= disjoint_tol or to_fixed.min() <= disjoint_tol:
        raise PreconditionError(f"Strands are not disjoint at tolerance {disjoint_tol}")

    table = {}
    for i, orbit in enumerate(strands):
        for pos, x in enumerate(orbit):
            table[x] = (i, depth - pos)
    coding = StrandCoding(m, window, table, strands)

    equivariant, checked = 0, 0
    for i in range(r):
        for n in range(-window, window + 1):
            x = coding.point(i, n)
            checked += 1
            if coding.code(m.map_eval(x)) == shift_step(coding.code(x), 1):
                equivariant += 1

    codes = [coding.code(x) for x in table]
    injective = len(set(codes)) == len(codes)

    rng = np.random.default_rng(seed)
    off = [x for x in rng.uniform(0.0, 1.0, off_strand_samples) if x not in table] + list(fixed)
    off_ok = sum(coding.code(float(x)) == SPARSE_FIXED for x in off)

    report = {
        'construction': 'finite-map',
        'map': m.to_dict(),
        'r': r,
        'window': window,
        'tabulated_points': len(table),
        'equivariance_checked': checked,
        'equivariance_passed': equivariant,
        'injective': injective,
        'off_strand_checked': len(off),
        'off_strand_passed': off_ok,
        'min_strand_gap': float(gaps.min()),
        'all_passed': equivariant == checked and injective and off_ok == len(off),
    }
    if not injective:
        raise InvariantBreach("Strand coding is not injective on the tabulated points")
    logger.info(f"Strand coding r={r}, window={window}: {equivariant}/{checked} equivariant")
    return coding, report


# ---- cone continua --------------------------------------------------------


@dataclass(frozen=True)
class ConeContinuum:
    """Continuum containing the apex: spoke n is cut at height h_n (default 1, apex only)"""
    heights: Tuple[Tuple[int, float], ...] = ()

    @classmethod
    def from_heights(cls, heights: Mapping[int, float]) -> 'ConeContinuum':
        for n, h in heights.items():
            if not 0.0 <= h <= 1.0:
                raise PreconditionError(f"Height {h} at spoke {n} outside [0, 1]")
        return cls(tuple(sorted((int(n), h) for n, h in heights.items() if h != 1.0)))

    def height(self, n: int) -> float:
        return dict(self.heights).get(n, 1.0)

    def to_dict(self) -> Dict[str, Any]:
        return {'heights': [[n, h] for n, h in self.heights]}


def cone_code(a: ConeContinuum) -> FiniteSupportSequence:
    """t_n = 1 - h_n"""
    return FiniteSupportSequence.of({n: 1.0 - h for n, h in a.heights}, 0.0, Alphabet.UNIT)


def cone_step(a: ConeContinuum, direction: int = 1) -> ConeContinuum:
    """Base shift of the cone: spoke n moves to n + direction with its height"""
    if direction not in (1, -1):
        raise PreconditionError(f"direction must be +1 or -1, got {direction}")
    return ConeContinuum(tuple((n + direction, h) for n, h in a.heights))


def random_cone(rng: np.random.Generator, window: int) -> ConeContinuum:
    spokes = rng.choice(np.arange(-window, window + 1), size=int(rng.integers(0, 2 * window + 2)), replace=False)
    return ConeContinuum.from_heights({int(n): float(rng.uniform(0.0, 1.0)) for n in spokes})


def cone_coding_check(window: int = 10, samples: int = 1000, seed: int = 0) -> Dict[str, Any]:
    """code(step(A)) = shift^-1(code(A)) and code(step^-1(A)) = shift(code(A))"""
    rng = np.random.default_rng(seed)
    forward = backward = 0
    for _ in range(samples):
        a = random_cone(rng, window)
        if cone_code(cone_step(a, 1)) == shift_step(cone_code(a), -1):
            forward += 1
        if cone_code(cone_step(a, -1)) == shift_step(cone_code(a), 1):
            backward += 1

    report = {'construction': 'cone', 'window': window, 'samples': samples, 'seed': seed,
              'forward_passed': forward, 'backward_passed': backward,
              'all_passed': forward == samples and backward == samples}
    logger.info(f"Cone coding: {forward}/{samples} forward, {backward}/{samples} backward")
    return report
