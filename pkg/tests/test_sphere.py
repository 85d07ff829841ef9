import math

import numpy as np
import pytest

from src.errors import PreconditionError
from src.hyperspace.shadowing import Verdict, verify_pseudo_orbit
from src.sphere import (FAMILIES, SpecialDendriteConjugacy, build_fixed_spine,
                        build_homoclinic_witness, build_periodic_continuum, build_sphere_pseudo_orbit,
                        conjugacy_to_dendrite, default_detour, defect_schedule, predict_failure, sample_candidate,
                        sphere_nonshadowing_sweep, wedge_lines)
from src.sphere.nonshadowing import GREAT_CIRCLE
from src.systems.dendrite import P_END, Q_END, DendritePoint
from src.systems.sphere import (INF, Piece, SphereContinuum, chordal_axiom_check, chordal_distance,
                                hausdorff_sphere, ns_iterate, ns_map)


def test_chordal_distance_values():
    assert chordal_distance(0j, INF) == pytest.approx(2.0)
    assert chordal_distance(1.0, -1.0) == pytest.approx(2.0)
    assert chordal_distance(1.0, 1j) == pytest.approx(math.sqrt(2.0))
    assert chordal_distance(INF, INF) == 0.0


def test_chordal_axioms():
    assert chordal_axiom_check(samples=2000, seed=5)['passed']


def test_north_south_map():
    assert ns_map(0j) == 0j
    assert ns_map(INF) == INF
    assert ns_map(2 + 2j) == 1 + 1j
    assert ns_map(1 + 1j, -1) == 2 + 2j
    assert ns_iterate(4 + 0j, 2) == 1 + 0j


def test_rays_through_zero_are_invariant():
    spine = build_fixed_spine(1 + 0j)
    assert spine.image(3) == spine
    assert hausdorff_sphere(spine.image(1), spine).value == 0.0
    with pytest.raises(PreconditionError):
        build_fixed_spine(0j)


def test_sphere_hausdorff_of_nested_segments():
    short = SphereContinuum((Piece.segment(0j, 1 + 0j),))
    long = SphereContinuum((Piece.segment(0j, 3 + 0j),))
    # the far end 3 against the nearest point 1
    expected = chordal_distance(3 + 0j, 1 + 0j)
    assert hausdorff_sphere(short, long, 1e-4).value == pytest.approx(expected, abs=2e-4)


def test_default_detour_endpoints():
    assert default_detour(1 + 0j, 1) == [1 + 0j, 0.5 + 0j]
    path = default_detour(1 + 0j, 2)
    assert path[0] == 1 + 0j and path[-1] == 0.25 + 0j
    assert max(abs(z.imag) for z in path) > 0


def test_periodic_continuum_defect():
    report = build_periodic_continuum(2, window=12, eta=1e-3)
    assert report['defect'] <= 1e-5
    assert report['double_step_ok']


def test_periodic_continuum_rejects_bad_detour():
    with pytest.raises(PreconditionError):
        build_periodic_continuum(2, detour=[1 + 0j, 0.5 + 0j], window=5)
    with pytest.raises(PreconditionError):
        build_periodic_continuum(2, detour=[1 + 0j, 0.5 + 0j, 0.25 + 0j], window=5)


def test_defect_schedule_decreases():
    assert defect_schedule(2, (5, 10), eta=1e-3)['non_increasing']


def test_homoclinic_witness_on_the_sphere():
    report = build_homoclinic_witness(window=20, eta=1e-3)
    assert report['homoclinic_tail'] <= 1e-4
    assert report['non_recurrence_eta'] >= 0.1
    assert report['approximant_final'] <= 1e-4
    assert report['pushed_final'] <= 1e-4


def test_conjugacy_endpoints_and_base_leg():
    h = SpecialDendriteConjugacy()
    assert h(0j) == Q_END
    assert h(INF) == P_END
    assert h(1 + 0.5j) == DendritePoint.leg(0, 1)
    assert h(0.5 + 0.25j) == DendritePoint.leg(1, 0.5)
    with pytest.raises(PreconditionError):
        SpecialDendriteConjugacy(1j)


def test_conjugacy_residual_vanishes():
    report = conjugacy_to_dendrite(window=10, mesh_size=200, seed=1)
    assert report['residual'] <= 1e-9
    assert report['moduli_shrink']
    assert report['passed']


def test_sphere_pseudo_orbit_gaps():
    po = build_sphere_pseudo_orbit(0.02, 5)
    assert po[0] == GREAT_CIRCLE
    ok, gap = verify_pseudo_orbit(po, lambda c: c.image(1), lambda a, b: hausdorff_sphere(a, b, 1e-3).value)
    assert gap <= 0.02 + 2e-3
    with pytest.raises(PreconditionError):
        build_sphere_pseudo_orbit(3.0, 5)


def test_candidate_families():
    rng = np.random.default_rng(0)
    for family in FAMILIES:
        assert sample_candidate(rng, family, 0.4).pieces
    with pytest.raises(PreconditionError):
        sample_candidate(rng, 'spiral', 0.4)


def test_nonshadowing_sweep():
    report = sphere_nonshadowing_sweep(epsilon=0.2, delta=0.02, window=12, eta=5e-3, per_family=10,
                                       audit_samples=10, seed=0, keep_candidates=True)
    assert report.verdict is Verdict.FALSIFIED
    assert report.survivors == 0
    assert report.candidates_tested == 1 + 10 * len(FAMILIES)
    assert report.audit['passed']
    assert len(report.details['candidates']) == report.candidates_tested


def test_nonshadowing_preconditions():
    with pytest.raises(PreconditionError):
        sphere_nonshadowing_sweep(epsilon=0.01, delta=0.02, window=3, per_family=1)


def test_wedge_lines_clear_the_collar():
    theta = 2 * math.asin(0.2)
    upper, lower = wedge_lines(theta)
    assert upper.pieces[0].a == 0j and lower.pieces[0].a == 0j
    # the unit point of each line is 2*sin(theta/2) = 0.4 from the real circle
    assert chordal_distance(complex(math.cos(theta), math.sin(theta)), 1.0) == pytest.approx(0.4)


@pytest.mark.parametrize('candidate, expected', [
    (GREAT_CIRCLE, ('zero', -6)),
    (SphereContinuum((Piece.ray(2 + 0j, 1),)), ('infinity', 6)),
    (SphereContinuum((Piece.segment(0.5 + 0j, 2 + 0j),)), ('wedge', 0)),
    (SphereContinuum.polyline([8 * complex(math.cos(t), math.sin(t)) for t in np.linspace(0, 2 * math.pi, 33)]),
     ('escape', 3)),
])
def test_predicted_failure_index(candidate, expected):
    theta = 2 * math.asin(0.2)
    assert predict_failure(candidate, theta, delta=0.02, window=12, threshold=0.21, eta=5e-3) == expected


def test_sweep_failures_agree_with_fixed_point_and_wedge_bounds():
    report = sphere_nonshadowing_sweep(epsilon=0.2, delta=0.02, window=12, eta=5e-3, per_family=10,
                                       audit_samples=5, seed=2, keep_candidates=True)
    details = report.details
    assert details['claims_consistent']
    assert details['claims_unresolved'] == 0
    assert sum(details['claim_counts'].values()) == report.candidates_tested
    assert details['wedge_clearance'] > 0.2

    great_circle = details['candidates'][0]
    assert great_circle['family'] == 'great_circle'
    # the brute-force search meets the forward failure first, the bound certifies the backward one
    assert great_circle['failing_index'] > 0
    assert great_circle['claim'] == 'zero' and great_circle['claim_confirmed']
