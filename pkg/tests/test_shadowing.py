import pytest

from src.errors import PreconditionError
from src.hyperspace.metric import FiniteSubset
from src.hyperspace.shadowing import (Verdict, build_collar_pseudo_orbit, decompose_strands, exact_strand_orbit,
                                      falsify_cf_shadowing, random_strand_pseudo_orbit, shadow_finite_2f,
                                      verify_pseudo_orbit)
from src.systems.circle import ContinuumKind


def test_collar_pseudo_orbit_gaps(circle_map):
    po = build_collar_pseudo_orbit(circle_map, 0.01, 10)
    assert po[0].kind is ContinuumKind.FULL
    ok, max_gap = verify_pseudo_orbit(po, circle_map.continuum_image)
    assert ok
    assert max_gap == pytest.approx(0.005, abs=1e-9)


def test_collar_pseudo_orbit_needs_preserving_map(reversing_map):
    with pytest.raises(PreconditionError):
        build_collar_pseudo_orbit(reversing_map, 0.01, 5)


def test_collar_pseudo_orbit_is_not_shadowed(circle_map):
    report = falsify_cf_shadowing(circle_map, epsilon=0.1, delta=0.01, window=40, eta=5e-3, audit_samples=30)
    assert report.verdict is Verdict.FALSIFIED
    assert report.worst_margin > 0
    assert report.survivors == 0
    assert report.audit['passed']
    assert report.details['dichotomy_consistent']
    assert report.candidates_tested == 200 * 200 + 1


def test_falsifier_rejects_large_epsilon(circle_map):
    with pytest.raises(PreconditionError):
        falsify_cf_shadowing(circle_map, epsilon=0.3, delta=0.01, window=5, eta=0.01)


def test_2f_shadows_random_strands(circle_map):
    po = random_strand_pseudo_orbit(circle_map, strands=3, delta=1e-3, window=20, seed=4)
    report = shadow_finite_2f(circle_map, po, epsilon=0.05, eta=1e-3)
    assert report['verdict'] is Verdict.SHADOWED
    assert report['sup_distance'] <= 0.05
    assert 1 <= len(report['shadow_set']) <= 3


def test_true_orbit_is_shadowed_by_itself(circle_map):
    po = exact_strand_orbit(circle_map, [0.1, 0.3, 0.8], window=10)
    report = shadow_finite_2f(circle_map, po, epsilon=1e-6, eta=1e-3)
    assert report['verdict'] is Verdict.SHADOWED


def test_strand_decomposition(circle_map):
    po = exact_strand_orbit(circle_map, [0.1, 0.8], window=5)
    states = [FiniteSubset.from_points(s) for s in po.states]
    labeled = decompose_strands(states, circle_map, 1e-9, 5)
    assert labeled is not None
    assert verify_pseudo_orbit(labeled, lambda s: tuple(circle_map.map_eval(x) for x in s),
                               lambda a, b: max(abs(x - y) for x, y in zip(a, b)))[0]

    states[3] = FiniteSubset.from_points([0.4])
    assert decompose_strands(states, circle_map, 1e-9, 5) is None
