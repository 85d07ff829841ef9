"""
Bi-infinite sequences with finite support, the shift, and the Hilbert-cube metric
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Hashable, Iterator, Mapping, Tuple

from ..errors import PreconditionError

logger = logging.getLogger(__name__)


class Alphabet(Enum):
    BINARY = "binary"       # r-tuples of bits
    UNIT = "unit"           # reals in [0, 1]
    SPARSE = "sparse"       # {0} and {1/p : p >= 1}


@dataclass(frozen=True)
class FiniteSupportSequence:
    """Sequence equal to `default` except at finitely many indices.

    Exceptions are kept sorted by index and never hold the default symbol,
    so equal sequences compare equal.
    """
    default: Hashable
    exceptions: Tuple[Tuple[int, Any], ...] = ()
    alphabet: Alphabet = Alphabet.UNIT

    @classmethod
    def of(cls, values: Mapping[int, Any], default: Hashable = 0,
           alphabet: Alphabet = Alphabet.UNIT) -> 'FiniteSupportSequence':
        items = tuple(sorted((int(n), v) for n, v in values.items() if v != default))
        return cls(default, items, alphabet)

    def __getitem__(self, n: int) -> Any:
        for index, value in self.exceptions:
            if index == n:
                return value
        return self.default

    def __iter__(self) -> Iterator[Tuple[int, Any]]:
        return iter(self.exceptions)

    def support(self) -> Tuple[int, ...]:
        return tuple(n for n, _ in self.exceptions)

    def as_dict(self) -> Dict[int, Any]:
        return dict(self.exceptions)

    def to_dict(self) -> Dict[str, Any]:
        return {'default': self.default, 'alphabet': self.alphabet.value,
                'exceptions': [[n, v] for n, v in self.exceptions]}


def shift_step(s: FiniteSupportSequence, direction: int = 1) -> FiniteSupportSequence:
    """new[n] = old[n + direction]"""
    if direction not in (1, -1):
        raise PreconditionError(f"direction must be +1 or -1, got {direction}")
    moved = tuple((n - direction, v) for n, v in s.exceptions)
    return FiniteSupportSequence(s.default, moved, s.alphabet)


def hilbert_cube_distance(s: FiniteSupportSequence, t: FiniteSupportSequence) -> Fraction:
    """sum_n |t_n - s_n| / 2^|n|, exactly

    Raises:
        PreconditionError: the defaults differ, so the sum has infinite support
    """
    if s.default != t.default:
        raise PreconditionError(f"Defaults differ ({s.default} vs {t.default}); D is not a finite sum")
    total = Fraction(0)
    for n in set(s.support()) | set(t.support()):
        total += abs(Fraction(t[n]) - Fraction(s[n])) / 2 ** abs(n)
    return total


# ---- the subshift of sequences where each 1/p occurs at most once ----

SPARSE_FIXED = FiniteSupportSequence(Fraction(0), (), Alphabet.SPARSE)


def sparse_point(n: int, p: int) -> FiniteSupportSequence:
    """The sequence with symbol 1/p at index n and 0 elsewhere"""
    if p < 1:
        raise PreconditionError(f"p must be >= 1, got {p}")
    return FiniteSupportSequence(Fraction(0), ((n, Fraction(1, p)),), Alphabet.SPARSE)


def sparse_valid(s: FiniteSupportSequence) -> bool:
    """0 default, symbols of the form 1/p, each used at most once"""
    if s.default != 0:
        return False
    symbols = [Fraction(v) for _, v in s.exceptions]
    if any(v <= 0 or v.numerator != 1 for v in symbols):
        return False
    return len(set(symbols)) == len(symbols)
