import math

import pytest

from src.errors import PreconditionError
from src.geometry import directed_segments, hausdorff_segments, hausdorff_segments_sampled


def test_parallel_segments():
    a = [((0.0, 0.0), (1.0, 0.0))]
    b = [((0.0, 1.0), (1.0, 1.0))]
    assert hausdorff_segments(a, b) == pytest.approx(1.0)


def test_nested_segments_are_asymmetric():
    a = [((0.0, 0.0), (2.0, 0.0))]
    b = [((0.0, 0.0), (1.0, 0.0))]
    assert directed_segments(b, a) == pytest.approx(0.0)
    assert directed_segments(a, b) == pytest.approx(1.0)


def test_supremum_at_a_crossing():
    # the farthest point of a sits midway between the two points of b
    a = [((0.0, 0.0), (2.0, 0.0))]
    b = [((0.0, 1.0), (0.0, 1.0)), ((2.0, 1.0), (2.0, 1.0))]
    assert directed_segments(a, b) == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_sampled_value_is_close():
    a = [((0.0, 0.0), (1.0, 0.0)), ((0.5, 0.0), (0.5, 0.7))]
    b = [((0.0, 0.1), (1.2, 0.1))]
    exact = hausdorff_segments(a, b)
    assert abs(hausdorff_segments_sampled(a, b, 1e-3) - exact) <= 1e-3


def test_empty_union_rejected():
    with pytest.raises(PreconditionError):
        hausdorff_segments([], [((0.0, 0.0), (1.0, 0.0))])
