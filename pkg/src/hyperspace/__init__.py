"""Hyperspaces over the circle: Hausdorff metric, recurrence and shadowing"""
from .. import systems as _systems  # noqa: F401  (import order: systems.sphere imports hyperspace.metric)
from .metric import (FiniteSubset, HausdorffValue, circle_pairwise, discretization_agreement,
                     hausdorff_arrays, hausdorff_continua, hausdorff_discretized, hausdorff_finite,
                     induced_2f_step, induced_cf_step, metric_axiom_check, neighborhood_contains,
                     set_distance, to_continuum)
from .recurrence import (ArcClass, DArc, OrbitClosureApprox, build_orbit_closure, classify_continuum_period,
                         enumerate_fixed_continua, homoclinic_witness, wandering_certificate)
from .shadowing import (FalsificationReport, PseudoOrbit, Verdict, build_collar_pseudo_orbit,
                        decompose_strands, exact_strand_orbit, falsify_cf_shadowing,
                        random_strand_pseudo_orbit, shadow_finite_2f, verify_pseudo_orbit)

__all__ = [
    'ArcClass',
    'DArc',
    'FalsificationReport',
    'FiniteSubset',
    'HausdorffValue',
    'OrbitClosureApprox',
    'PseudoOrbit',
    'Verdict',
    'build_collar_pseudo_orbit',
    'build_orbit_closure',
    'circle_pairwise',
    'classify_continuum_period',
    'decompose_strands',
    'discretization_agreement',
    'enumerate_fixed_continua',
    'exact_strand_orbit',
    'falsify_cf_shadowing',
    'hausdorff_arrays',
    'hausdorff_continua',
    'hausdorff_discretized',
    'hausdorff_finite',
    'homoclinic_witness',
    'induced_2f_step',
    'induced_cf_step',
    'metric_axiom_check',
    'neighborhood_contains',
    'random_strand_pseudo_orbit',
    'set_distance',
    'shadow_finite_2f',
    'to_continuum',
    'verify_pseudo_orbit',
]
