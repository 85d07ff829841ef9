"""Separated-set entropy estimation and entropy codings"""
from .coding import (CodingMatrix, bowen_hausdorff, coding_equivariance_check, exact_separated_family,
                     fundamental_domain_points, orbit_grid, orbit_indicator_coding)
from .estimator import (GreedyResult, MetricSystem, SeparatedReport, arc_system, circle_system,
                        cylinder_representatives, dn_distance, entropy_estimate, full_shift_greedy_check,
                        full_shift_system, greedy_separated, rotation_system, tail_slope, verify_separated)

__all__ = [
    'CodingMatrix',
    'GreedyResult',
    'MetricSystem',
    'SeparatedReport',
    'arc_system',
    'bowen_hausdorff',
    'circle_system',
    'coding_equivariance_check',
    'cylinder_representatives',
    'dn_distance',
    'entropy_estimate',
    'exact_separated_family',
    'full_shift_greedy_check',
    'full_shift_system',
    'fundamental_domain_points',
    'greedy_separated',
    'orbit_grid',
    'orbit_indicator_coding',
    'rotation_system',
    'tail_slope',
    'verify_separated',
]
