from fractions import Fraction

import pytest

from src.errors import PreconditionError
from src.symbolic import (SPARSE_FIXED, ConeContinuum, FiniteSupportSequence, code_sparse_subset,
                          cone_coding_check, hilbert_cube_distance, return_floor, shift_step,
                          sparse_coding_check, sparse_point, sparse_shift_wandering_evidence, sparse_valid,
                          strand_coding)


def test_shift_moves_support():
    s = FiniteSupportSequence.of({2: 0.5})
    assert shift_step(s, 1).support() == (1,)
    assert shift_step(s, -1).support() == (3,)
    with pytest.raises(PreconditionError):
        shift_step(s, 2)


def test_default_entries_are_dropped():
    assert FiniteSupportSequence.of({0: 0, 1: 1}).support() == (1,)


def test_hilbert_cube_distance_is_exact():
    s = FiniteSupportSequence.of({0: 1})
    t = FiniteSupportSequence.of({1: 1})
    assert hilbert_cube_distance(s, t) == Fraction(3, 2)
    with pytest.raises(PreconditionError):
        hilbert_cube_distance(s, FiniteSupportSequence.of({}, default=1))


def test_sparse_validity():
    assert sparse_valid(sparse_point(3, 2))
    repeated = FiniteSupportSequence.of({0: Fraction(1, 2), 1: Fraction(1, 2)}, Fraction(0))
    assert not sparse_valid(repeated)


def test_return_floor_and_wandering():
    assert return_floor(sparse_point(0, 1)) == 1
    report = sparse_shift_wandering_evidence(5, [sparse_point(0, 1), sparse_point(2, 3), SPARSE_FIXED])
    assert report['passed']
    assert len(report['rows']) == 2


def test_sparse_subset_code():
    subset = [SPARSE_FIXED, sparse_point(0, 1), sparse_point(0, 2), sparse_point(4, 1)]
    code = code_sparse_subset(subset, 2)
    assert code[0] == (1, 1)
    assert code[4] == (1, 0)
    assert code[1] == (0, 0)


def test_sparse_coding_check():
    assert sparse_coding_check(r=2, window=5, samples=100, seed=1)['all_passed']


def test_strand_coding(circle_map):
    coding, report = strand_coding(circle_map, 2, 5)
    assert report['all_passed'], report
    assert report['tabulated_points'] == 2 * 13
    assert coding.code(0.5) == SPARSE_FIXED


def test_cone_coding():
    assert cone_coding_check(window=5, samples=100, seed=2)['all_passed']
    with pytest.raises(PreconditionError):
        ConeContinuum.from_heights({0: 1.5})
