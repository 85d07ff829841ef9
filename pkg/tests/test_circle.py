import math

import numpy as np
import pytest

from src.errors import ConfigError, ConvergenceError, PreconditionError
from src.systems.circle import (CircleContinuum, ContinuumKind, MorseSmaleCircleMap, Stability, circle_distance,
                                normalize)


def test_normalize_wraps_negative_zero():
    assert normalize(-1e-17) == 0.0
    assert normalize(1.25) == pytest.approx(0.25)


def test_circle_distance_is_shortest_arc():
    assert circle_distance(0.9, 0.1) == pytest.approx(0.2)
    assert circle_distance(0.0, 0.5) == pytest.approx(0.5)
    assert np.allclose(circle_distance(np.array([0.1, 0.6]), 0.0), [0.1, 0.4])


def test_amplitude_bound_is_enforced():
    with pytest.raises(PreconditionError):
        MorseSmaleCircleMap(1, 0.2)
    with pytest.raises(PreconditionError):
        MorseSmaleCircleMap(0, 0.1)


def test_from_dict_rejects_bad_system():
    with pytest.raises(ConfigError):
        MorseSmaleCircleMap.from_dict({'kind': 'circle_ms', 'k': 1, 'amplitude': 0.5})
    with pytest.raises(ConfigError):
        MorseSmaleCircleMap.from_dict({'kind': 'torus'})


def test_fixed_points_alternate(k2_map):
    points = k2_map.fixed_points()
    assert [p.coordinate for p in points] == [0.0, 0.25, 0.5, 0.75]
    assert [p.stability for p in points] == [Stability.REPELLER, Stability.ATTRACTOR] * 2
    for p in points:
        assert k2_map.map_eval(p.coordinate) == p.coordinate


def test_reversing_map_fixed_points(reversing_map):
    assert reversing_map.fixed_coordinates() == [0.0, 0.5]


def test_inverse_round_trip(circle_map):
    xs = np.linspace(0.0, 1.0, 101)[:-1]
    back = circle_map.map_inverse_array(circle_map.map_eval_array(xs))
    assert np.max(circle_distance(back, xs)) <= 1e-11


def test_inverse_iteration_cap(circle_map):
    with pytest.raises(ConvergenceError):
        circle_map.lift_inverse(0.3, tol=1e-12, max_iter=10)


def test_degenerate_arc_rejected():
    with pytest.raises(PreconditionError):
        CircleContinuum.arc(0.3, 0.3)


def test_arc_around_attractor_contracts(circle_map):
    image = circle_map.continuum_image(CircleContinuum.arc(0.4, 0.6))
    shift = 0.1 * math.sin(0.8 * math.pi)
    assert image.kind is ContinuumKind.ARC
    assert image.a == pytest.approx(0.4 + shift)
    assert image.b == pytest.approx(0.6 - shift)


def test_arc_around_repeller_grows_and_wraps(circle_map):
    image = circle_map.continuum_image(CircleContinuum.arc(0.9, 0.1))
    assert image.wraps
    assert image.length == pytest.approx(0.2 + 2 * 0.1 * math.sin(0.2 * math.pi))


def test_full_circle_is_fixed(circle_map):
    assert circle_map.continuum_image(CircleContinuum.full()) == CircleContinuum.full()


def test_preimage_undoes_image(circle_map, reversing_map):
    for m in (circle_map, reversing_map):
        arc = CircleContinuum.arc(0.12, 0.37)
        back = m.continuum_preimage(m.continuum_image(arc))
        assert circle_distance(back.a, arc.a) <= 1e-11
        assert circle_distance(back.b, arc.b) <= 1e-11


def test_distance_to_arc():
    arc = CircleContinuum.arc(0.8, 0.1)
    assert arc.distance_to(0.95) == 0.0
    assert arc.distance_to(0.3) == pytest.approx(0.2)
    assert arc.distance_to(0.6) == pytest.approx(0.2)
