import numpy as np
import pytest

from src.errors import PreconditionError
from src.hyperspace.metric import (FiniteSubset, discretization_agreement, hausdorff_continua, hausdorff_finite,
                                   induced_2f_step, induced_cf_step, metric_axiom_check, neighborhood_contains,
                                   set_distance, to_continuum)
from src.systems.circle import CircleContinuum, ContinuumKind


@pytest.mark.parametrize('c1, c2, expected', [
    (CircleContinuum.point(0.1), CircleContinuum.point(0.3), 0.2),
    (CircleContinuum.point(0.05), CircleContinuum.point(0.95), 0.1),
    (CircleContinuum.full(), CircleContinuum.point(0.25), 0.5),
    (CircleContinuum.arc(0.1, 0.3), CircleContinuum.arc(0.15, 0.25), 0.05),
    (CircleContinuum.full(), CircleContinuum.arc(0.0, 0.5), 0.25),
    (CircleContinuum.arc(0.9, 0.1), CircleContinuum.point(0.0), 0.1),
])
def test_closed_form_hausdorff(c1, c2, expected):
    assert hausdorff_continua(c1, c2).value == pytest.approx(expected, abs=1e-12)
    assert hausdorff_continua(c2, c1).value == pytest.approx(expected, abs=1e-12)


def test_metric_axioms_hold():
    report = metric_axiom_check(samples=2000, seed=3)
    assert report['passed'], report


def test_closed_form_matches_brute_force():
    report = discretization_agreement(samples=200, eta=1e-3, seed=1)
    assert report['passed'], report
    assert report['vectorized_matches_scalar']


def test_finite_subset_deduplicates_and_sorts():
    a = FiniteSubset.from_points([0.7, 0.1, 1.1, 0.1 + 1e-14])
    assert len(a) == 2
    assert a.points[0] == pytest.approx(0.1)
    assert a.points[1] == pytest.approx(0.7)


def test_finite_subset_rejects_empty():
    with pytest.raises(PreconditionError):
        FiniteSubset.from_points([])


def test_finite_hausdorff_uses_circle_wrap():
    a = FiniteSubset.from_points([0.1])
    b = FiniteSubset.from_points([0.2, 0.9])
    assert hausdorff_finite(a, b).value == pytest.approx(0.2)


def test_2f_fixes_the_fixed_set(circle_map):
    fixed = FiniteSubset.from_points(circle_map.fixed_coordinates())
    assert induced_2f_step(circle_map, fixed) == fixed


def test_cf_moves_arc_endpoints(circle_map):
    image = induced_cf_step(circle_map, CircleContinuum.arc(0.25, 0.75))
    assert hausdorff_continua(image, CircleContinuum.arc(0.35, 0.65)).value <= 1e-12
    assert induced_cf_step(circle_map, CircleContinuum.full()).kind is ContinuumKind.FULL


def test_neighborhoods():
    arc = CircleContinuum.arc(0.2, 0.4)
    assert set_distance(arc, 0.5) == pytest.approx(0.1)
    assert neighborhood_contains(arc, 0.11, 0.5)
    assert not neighborhood_contains(arc, 0.1, 0.55)
    with pytest.raises(PreconditionError):
        neighborhood_contains(arc, 0.0, 0.3)


def test_to_continuum_edge_lengths():
    assert to_continuum(0.3, 0.0).kind is ContinuumKind.POINT
    assert to_continuum(0.3, 1.0).kind is ContinuumKind.FULL
    arc = to_continuum(0.9, 0.2)
    assert arc.wraps and np.isclose(arc.b, 0.1)
