import math

import numpy as np
import pytest

from src.entropy import (arc_system, bowen_hausdorff, circle_system, coding_equivariance_check,
                         cylinder_representatives, dn_distance, entropy_estimate, exact_separated_family,
                         full_shift_greedy_check, full_shift_system, fundamental_domain_points, greedy_separated,
                         orbit_indicator_coding, rotation_system, tail_slope, verify_separated)
from src.errors import PreconditionError
from src.hyperspace.metric import FiniteSubset, hausdorff_finite


def test_greedy_on_dyadic_grid(circle_map):
    sys = circle_system(circle_map)
    grid = np.arange(1024) / 1024
    result = greedy_separated(sys, grid, 1, 0.1)
    # picks 0, 103/1024, ..., 824/1024; 927/1024 sits 97/1024 from 0
    assert result.count == 9
    assert verify_separated(sys, grid[result.indices], 1, 0.1)


def test_dn_distance_grows_along_orbits(circle_map):
    sys = circle_system(circle_map)
    x, y = np.array([0.01]), np.array([0.02])
    assert dn_distance(sys, x, y, 5)[0] > dn_distance(sys, x, y, 1)[0]
    with pytest.raises(PreconditionError):
        dn_distance(sys, x, y, 0)


def test_rotation_is_an_isometry():
    sys = rotation_system((math.sqrt(5) - 1) / 2)
    x, y = np.array([0.1]), np.array([0.3])
    assert dn_distance(sys, x, y, 7)[0] == pytest.approx(0.2)


def test_full_shift_exact_counts():
    sys = full_shift_system(2)
    # d > 0.1 needs a difference at |i| <= 3
    assert sys.exact_count(3, 0.1) == 2 ** 9
    report = entropy_estimate(sys, [0.1], [4, 5, 6])
    assert report.extrapolated_h == pytest.approx(math.log(2), abs=1e-9)
    assert all(row['method'] == 'exact' for row in report.rows)


@pytest.mark.parametrize('symbols, n', [(2, 1), (2, 4), (3, 3)])
def test_greedy_matches_full_shift_count(symbols, n):
    sys = full_shift_system(symbols, window=8)
    cylinders = cylinder_representatives(symbols, n, window=8)
    # extra random points share a word with some cylinder point and add nothing
    samples = np.concatenate([cylinders, sys.sample(200, 1)])
    result = greedy_separated(sys, samples, n, 0.5)
    assert result.count == symbols ** n == sys.exact_count(n, 0.5)
    assert result.indices == list(range(len(cylinders)))
    assert verify_separated(sys, samples[result.indices], n, 0.5)


def test_greedy_on_random_full_shift_points_stays_below_exact_count():
    sys = full_shift_system(2, window=8)
    result = greedy_separated(sys, sys.sample(300, 4), 3, 0.5)
    assert result.count <= sys.exact_count(3, 0.5) == 8


def test_full_shift_greedy_check_rows():
    rows = full_shift_greedy_check(2, [1, 2, 3])
    assert [row['greedy'] for row in rows] == [2, 4, 8]
    assert all(row['agrees'] for row in rows)
    with pytest.raises(PreconditionError):
        cylinder_representatives(2, 10, window=8)


def test_arc_system_counts_grow_polynomially(circle_map):
    sys = arc_system(circle_map)
    report = entropy_estimate(sys, [0.1], [1, 2, 3, 4], samples=300, seed=0)
    assert report.polynomial_growth
    assert not report.partial
    assert len(report.rows) == 4


def test_arc_system_inverse_undoes_forward(circle_map):
    sys = arc_system(circle_map)
    x = sys.sample(100, 0)
    back = sys.inverse(sys.forward(x))
    assert np.max(sys.metric(back, x)) <= 1e-9


def test_zero_budget_reports_partial(circle_map):
    report = entropy_estimate(circle_system(circle_map), [0.1], [1, 2], samples=50, budget=0)
    assert report.partial
    assert report.rows == []
    assert report.extrapolated_h is None


def test_schedules_must_be_monotone(circle_map):
    sys = circle_system(circle_map)
    with pytest.raises(PreconditionError):
        entropy_estimate(sys, [0.05, 0.1], [1, 2])
    with pytest.raises(PreconditionError):
        entropy_estimate(sys, [0.1], [2, 1])


def test_tail_slope_of_exponential_counts():
    assert tail_slope([1, 2, 3], [2, 4, 8]) == pytest.approx(math.log(2))


def test_exact_separated_family(circle_map):
    report = exact_separated_family(circle_map, 2, 3)
    assert report['count'] == 64
    assert report['pairs_checked'] == 2016
    assert report['min_pair_distance'] > report['delta']
    assert report['estimate'] == pytest.approx(2 * math.log(2), abs=1e-12)
    assert report['certified_time'] == 0
    assert report['min_pair_distance'] >= 2 * report['delta']
    assert report['dn_pairs'] == 64
    assert report['dn_at_least_time_0']


def test_bowen_distance_dominates_time_zero(circle_map):
    base = fundamental_domain_points(circle_map, 1)
    orbit = list(circle_map.orbit_array(np.asarray(base), 2).ravel())
    anchors = circle_map.fixed_coordinates()
    a = FiniteSubset.from_points(orbit[:1] + anchors)
    b = FiniteSubset.from_points(orbit[:2] + anchors)
    d0 = float(hausdorff_finite(a, b))
    assert bowen_hausdorff(circle_map, a, b, 1) == pytest.approx(d0)
    assert bowen_hausdorff(circle_map, a, b, 3) >= d0


def test_exact_family_size_cap(circle_map):
    with pytest.raises(PreconditionError):
        exact_separated_family(circle_map, 3, 5)


def test_indicator_coding_marks_members(circle_map):
    base = fundamental_domain_points(circle_map, 2)
    a = FiniteSubset.from_points([base[1]] + circle_map.fixed_coordinates())
    bits = orbit_indicator_coding(circle_map, base, a, window=3).bits
    assert bits.sum() == 1
    assert bits[1, 3] == 1


def test_coding_commutes_with_2f(circle_map):
    report = coding_equivariance_check(circle_map, r=2, window=4, samples=50, seed=2)
    assert report['all_passed'], report


def test_basin_codings_need_preserving_map(reversing_map):
    with pytest.raises(PreconditionError):
        fundamental_domain_points(reversing_map, 2)
