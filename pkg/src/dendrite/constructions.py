"""
Entropy witnesses on the comb dendrite: stub trees separated under C(F)^-1
and full cones conjugate to a full shift
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import InvariantBreach, PreconditionError
from ..symbolic.sequences import Alphabet, FiniteSupportSequence, shift_step
from ..systems.dendrite import (Subtree, hausdorff_subtrees, leg_height, node, subtree_image,
                                subtree_iterate)
from ..utils.workers import chunked, parallel_map

logger = logging.getLogger(__name__)


# ---- stub trees --------------------------------------------------------


def build_stub_tree(k: int, n: int, word: Sequence[int]) -> Subtree:
    """Stub of height word[j]/(k(j+1)) on leg j for j < n, spine [a_0, a_n-1].

    Leg 0 carries the graduation points i/k; leg j is its j-th image under F.
    """
    if k < 2 or n < 1:
        raise PreconditionError(f"Need k >= 2 and n >= 1, got k={k}, n={n}")
    word = tuple(int(w) for w in word)
    if len(word) != n or any(not 1 <= w <= k for w in word):
        raise PreconditionError(f"word must have {n} entries in 1..{k}, got {word}")
    legs = {j: Fraction(w, k * (j + 1)) for j, w in enumerate(word)}
    return Subtree.build(node(0), node(n - 1), legs)


def _max_backward_distance(backward: Dict[Tuple[int, ...], List[Subtree]], a: Tuple[int, ...],
                           b: Tuple[int, ...]) -> float:
    return max(hausdorff_subtrees(x, y) for x, y in zip(backward[a], backward[b]))


def verify_stub_tree_separation(k: int, n: int, delta: Optional[float] = None,
                                keep_pairs: bool = False) -> Dict[str, Any]:
    """Exhaustive (n, delta)-separation of all k^n stub trees under C(F)^-1.

    Args:
        k: Graduations on the base leg
        n: Word length
        delta: Separation to certify (defaults to 0.9 * min(1/k, 1/2))
        keep_pairs: Include the pairwise table in the report

    Returns:
        Certificate with delta_star = min over pairs of max_j d_H(F^-j C, F^-j C')
    """
    count = k ** n
    if count > 100:
        raise PreconditionError(f"k^n = {count} stub trees is too many to compare pairwise")
    delta = 0.9 * min(1.0 / k, 0.5) if delta is None else delta

    words = list(itertools.product(range(1, k + 1), repeat=n))
    backward = {}
    for word in words:
        tree = build_stub_tree(k, n, word)
        chain = [tree]
        for _ in range(n - 1):
            chain.append(subtree_image(chain[-1], -1))
        backward[word] = chain

    pairs = list(itertools.combinations(words, 2))
    logger.info(f"Verifying stub tree separation: k={k}, n={n}, {len(pairs)} pairs, delta={delta}")

    def block(items: List[Tuple[Tuple[int, ...], Tuple[int, ...]]]) -> List[float]:
        return [_max_backward_distance(backward, a, b) for a, b in items]

    distances = [d for part in parallel_map(block, chunked(pairs, 16), desc="stub pairs") for d in part]
    delta_star = min(distances) if distances else math.inf

    report = {
        'k': k,
        'n': n,
        'count': count,
        'pairs': len(pairs),
        'delta': delta,
        'delta_star': delta_star,
        'certified': delta_star > delta,
        'estimate': math.log(count) / n,
        'target': math.log(k),
    }
    if keep_pairs:
        report['pair_table'] = [{'a': ''.join(map(str, a)), 'b': ''.join(map(str, b)), 'distance': d}
                                for (a, b), d in zip(pairs, distances)]
    logger.info(f"Stub trees k={k}, n={n}: delta*={delta_star:.4g} (certified={report['certified']})")
    return report


# ---- full cones ----------------------------------------------------------


@dataclass(frozen=True)
class FullConeCode:
    """Selected full legs gamma_(i,n), one family per residue i mod r.

    Membership of (i, n) is `default` flipped on the finite set `toggled`,
    so tail "none" is default False and tail "all" is default True.
    """
    r: int
    toggled: FrozenSet[Tuple[int, int]] = frozenset()
    default: bool = False

    def __post_init__(self):
        if self.r < 1:
            raise PreconditionError(f"r must be >= 1, got {self.r}")
        if any(not 0 <= i < self.r for i, _ in self.toggled):
            raise PreconditionError(f"Family index outside [0, {self.r})")
        object.__setattr__(self, 'toggled', frozenset(self.toggled))

    @classmethod
    def from_selection(cls, r: int, selected, tail: str = "none", window: Optional[int] = None) -> 'FullConeCode':
        if tail not in ("none", "all"):
            raise PreconditionError(f"tail must be 'none' or 'all', got {tail!r}")
        selected = {(int(i), int(n)) for i, n in selected}
        if tail == "none":
            return cls(r, frozenset(selected), False)
        if window is None:
            raise PreconditionError("tail 'all' needs the window the selection refers to")
        missing = {(i, n) for i in range(r) for n in range(-window, window + 1)} - selected
        return cls(r, frozenset(missing), True)

    def selected(self, i: int, n: int) -> bool:
        return self.default != ((i, n) in self.toggled)

    @property
    def tail(self) -> str:
        return "all" if self.default else "none"

    def to_dict(self) -> Dict[str, Any]:
        return {'r': self.r, 'tail': self.tail, 'toggled': sorted(self.toggled)}


def full_cone_node(r: int, i: int, n: int) -> int:
    """Leg index carrying gamma_(i,n)"""
    return n * r + i


def full_cone_step(code: FullConeCode, direction: int = 1) -> FullConeCode:
    """C(F^r): every selected (i, n) moves to (i, n + direction)"""
    return FullConeCode(code.r, frozenset((i, n + direction) for i, n in code.toggled), code.default)


def full_cone_code(code: FullConeCode) -> FiniteSupportSequence:
    """Indicator sequence over {0,1}^r: bit i at index n says gamma_(i,n) is selected"""
    default = tuple([int(code.default)] * code.r)
    values: Dict[int, List[int]] = {}
    for i, n in code.toggled:
        values.setdefault(n, list(default))[i] = 1 - int(code.default)
    return FiniteSupportSequence.of({n: tuple(v) for n, v in values.items()}, default, Alphabet.BINARY)


def full_cone_decode(code: FullConeCode, window: int) -> Subtree:
    """Spine [-1, 1] with the full legs selected within |n| <= window"""
    legs = {}
    for i in range(code.r):
        for n in range(-window, window + 1):
            if code.selected(i, n):
                m = full_cone_node(code.r, i, n)
                legs[m] = leg_height(m)
    return Subtree.build(-1, 1, legs)


def full_cone_encode(tree: Subtree, r: int, window: int, tail: str = "none") -> FullConeCode:
    """Read the selection back from a decoded full cone"""
    legs = tree.leg_dict()
    selected = []
    for i in range(r):
        for n in range(-window, window + 1):
            m = full_cone_node(r, i, n)
            h = legs.get(m)
            if h is None:
                continue
            if h != leg_height(m):
                raise InvariantBreach(f"Leg {m} is not full (height {h})")
            selected.append((i, n))
    return FullConeCode.from_selection(r, selected, tail, window)


def leg_separation_table(window: int) -> List[Dict[str, Any]]:
    """Per leg |m| <= window: height, gap to the neighboring legs, separation floor"""
    rows = []
    for m in range(-window, window + 1):
        gap = min(abs(node(m) - node(m - 1)), abs(node(m + 1) - node(m)))
        height = leg_height(m)
        rows.append({'leg': m, 'height': height, 'neighbor_gap': gap, 'floor': min(height, gap),
                     'positive': min(height, gap) > 0})
    return rows


def geometric_separation(r: int, window: int) -> Fraction:
    """Lower bound on d_H between decodes of codes that differ within the window"""
    span = r * window + r - 1
    return min(row['floor'] for row in leg_separation_table(span))


def random_full_cone(rng: np.random.Generator, r: int, window: int) -> FullConeCode:
    selected = [(i, n) for i in range(r) for n in range(-window, window + 1) if rng.random() < 0.5]
    tail = "all" if rng.random() < 0.2 else "none"
    return FullConeCode.from_selection(r, selected, tail, window)


def enumerate_full_cones(r: int, window: int) -> List[FullConeCode]:
    """Every tail "none" code selecting legs only within |n| <= window"""
    slots = [(i, n) for n in range(-window, window + 1) for i in range(r)]
    return [FullConeCode(r, frozenset(slot for slot, bit in zip(slots, bits) if bit))
            for bits in itertools.product((0, 1), repeat=len(slots))]


def window_word(code: FullConeCode, window: int) -> Tuple[Tuple[int, ...], ...]:
    """Symbols of full_cone_code(code) at n = -window..window"""
    sequence = full_cone_code(code)
    return tuple(sequence[n] for n in range(-window, window + 1))


def full_cone_bijection_check(r: int, window: int) -> Dict[str, Any]:
    """Exhaustive check that full_cone_code is a bijection onto {0,1}^r words on the window.

    Also measures d_H between the decodes of every pair of distinct codes
    against geometric_separation(r, window).
    """
    slots = r * (2 * window + 1)
    if slots > 16:
        raise PreconditionError(f"Exhaustive window too large: 2^{slots} codes for r={r}, window={window}")
    codes = enumerate_full_cones(r, window)
    words = {window_word(c, window) for c in codes}
    symbols = list(itertools.product((0, 1), repeat=r))
    every_word = set(itertools.product(symbols, repeat=2 * window + 1))

    decodes = [full_cone_decode(c, window) for c in codes]
    pairs = list(itertools.combinations(range(len(codes)), 2))

    def pair_minimum(block: List[Tuple[int, int]]) -> float:
        return min(float(hausdorff_subtrees(decodes[a], decodes[b])) for a, b in block)

    min_distance = min(parallel_map(pair_minimum, chunked(pairs, 256), desc="full cone pairs"), default=math.inf)
    floor = geometric_separation(r, window)
    return {
        'enumerated_codes': len(codes),
        'injective': len(words) == len(codes),
        'surjective': words == every_word,
        'bijective': len(words) == len(codes) and words == every_word,
        'separation_pairs': len(pairs),
        'separation_floor': floor,
        'min_pair_distance': min_distance,
        'separated': min_distance >= float(floor) - 1e-12,
    }


def full_cone_conjugacy_check(r: int = 2, window: int = 4, samples: int = 1000, geometric_pairs: int = 50,
                              seed: int = 0, exhaustive_window: int = 1) -> Dict[str, Any]:
    """Conjugacy of C(F^r) on full cones with the shift.

    Checks code(step K) = shift^-1(code K) and code(step^-1 K) = shift(code K)
    symbolically on random codes, the round trip encode(decode(K)) = K on the
    window, and the geometric step decode(step K) = C(F^r)(decode K) on
    common legs. Bijectivity of the coding and the separation of decodes run
    over all codes of the smaller exhaustive_window.
    """
    rng = np.random.default_rng(seed)
    codes = [random_full_cone(rng, r, window) for _ in range(samples)]

    symbolic = sum(full_cone_code(full_cone_step(c, 1)) == shift_step(full_cone_code(c), -1)
                   and full_cone_code(full_cone_step(c, -1)) == shift_step(full_cone_code(c), 1)
                   for c in codes)

    round_trip = sum(full_cone_encode(full_cone_decode(c, window), r, window, c.tail) == c
                     for c in codes if all(abs(n) <= window for _, n in c.toggled))

    geometric = 0
    inner = window - 1
    for c in codes[:geometric_pairs]:
        pushed = subtree_iterate(full_cone_decode(c, window), r)
        stepped = full_cone_decode(full_cone_step(c, 1), window)
        pushed_legs = {m: h for m, h in pushed.legs if abs(m // r) <= inner}
        stepped_legs = {m: h for m, h in stepped.legs if abs(m // r) <= inner}
        if pushed_legs == stepped_legs:
            geometric += 1

    exhaustive = full_cone_bijection_check(r, min(exhaustive_window, window))
    report = {
        'construction': 'cone',
        'r': r,
        'window': window,
        'samples': samples,
        'seed': seed,
        'symbolic_passed': int(symbolic),
        'round_trip_passed': int(round_trip),
        'geometric_checked': min(geometric_pairs, samples),
        'geometric_passed': geometric,
        'delta_geom': geometric_separation(r, window),
        'exhaustive_window': min(exhaustive_window, window),
        **exhaustive,
    }
    report['all_passed'] = (report['symbolic_passed'] == samples and report['round_trip_passed'] == samples
                            and geometric == report['geometric_checked'] and report['bijective']
                            and report['separated'])
    logger.info(f"Full cone conjugacy r={r}, window={window}: all_passed={report['all_passed']}")
    return report
