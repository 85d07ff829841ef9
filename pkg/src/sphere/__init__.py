"""North-South dynamics on the sphere: invariant continua and non-shadowing"""
from .constructions import (SpecialDendriteConjugacy, build_fixed_spine, build_homoclinic_witness,
                            build_periodic_continuum, conjugacy_to_dendrite, default_detour, defect_schedule,
                            windowed_orbit)
from .nonshadowing import (FAMILIES, build_sphere_pseudo_orbit, claim_annotations, predict_failure,
                           sample_candidate, sphere_nonshadowing_sweep, wedge_lines)

__all__ = [
    'FAMILIES',
    'SpecialDendriteConjugacy',
    'build_fixed_spine',
    'build_homoclinic_witness',
    'build_periodic_continuum',
    'build_sphere_pseudo_orbit',
    'claim_annotations',
    'conjugacy_to_dendrite',
    'default_detour',
    'defect_schedule',
    'predict_failure',
    'sample_candidate',
    'sphere_nonshadowing_sweep',
    'wedge_lines',
    'windowed_orbit',
]
