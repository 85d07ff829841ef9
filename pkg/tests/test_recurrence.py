import pytest

from src.errors import PreconditionError
from src.hyperspace.recurrence import (ArcClass, build_orbit_closure, classify_continuum_period,
                                       enumerate_fixed_continua, homoclinic_witness, wandering_certificate)
from src.systems.circle import CircleContinuum


def test_orbit_closure_is_nearly_invariant(circle_map):
    approx = build_orbit_closure(circle_map, 0.25, stride=1, trunc=50)
    assert approx.defect <= 1e-6
    assert all(row['distance'] <= 1e-6 for row in approx.periodicity)
    assert 0.25 in approx.points.points


def test_orbit_closure_rejects_fixed_base(circle_map):
    with pytest.raises(PreconditionError):
        build_orbit_closure(circle_map, 0.5, stride=1, trunc=10)


def test_homoclinic_witness(circle_map):
    report = homoclinic_witness(circle_map, 0.25, window=20)
    assert report['non_recurrent']
    assert report['epsilon_star'] >= report['epsilon_0'] > 0
    assert report['approximant_final'] < 1e-3
    assert report['pushed_final'] < 1e-3
    assert report['monotone_tail']


@pytest.mark.parametrize('fixture, expected', [('circle_map', 5), ('k2_map', 17)])
def test_fixed_continua_count(request, fixture, expected):
    m = request.getfixturevalue(fixture)
    result = enumerate_fixed_continua(m)
    assert len(result) == expected
    assert all(item.period == 1 for item in result)


def test_arc_taxonomy(circle_map):
    assert classify_continuum_period(circle_map, CircleContinuum.arc(0.0, 0.5)).arc_class is ArcClass.D_ARC
    assert classify_continuum_period(circle_map, CircleContinuum.point(0.5)).arc_class is ArcClass.DEGENERATE_D_ARC
    assert classify_continuum_period(circle_map, CircleContinuum.full()).arc_class is ArcClass.FULL


def test_wandering_arc_is_certified(circle_map):
    report = wandering_certificate(circle_map, CircleContinuum.arc(0.1, 0.2), epsilon=0.05, eta=1e-3, window=20)
    assert report['status'] == 'certified'
    assert report['min_return_distance'] > report['epsilon_prime']
    assert report['self_return_distance'] > 0


def test_d_arcs_have_no_wandering_certificate(circle_map):
    with pytest.raises(PreconditionError):
        wandering_certificate(circle_map, CircleContinuum.arc(0.0, 0.5), epsilon=0.05, eta=1e-3, window=5)
