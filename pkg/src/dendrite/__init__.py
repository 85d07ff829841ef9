"""Constructions on the comb dendrite"""
from .constructions import (FullConeCode, build_stub_tree, enumerate_full_cones, full_cone_bijection_check,
                            full_cone_code, full_cone_conjugacy_check, full_cone_decode, full_cone_encode,
                            full_cone_node, full_cone_step, geometric_separation, leg_separation_table,
                            random_full_cone, verify_stub_tree_separation, window_word)

__all__ = [
    'FullConeCode',
    'build_stub_tree',
    'enumerate_full_cones',
    'full_cone_bijection_check',
    'full_cone_code',
    'full_cone_conjugacy_check',
    'full_cone_decode',
    'full_cone_encode',
    'full_cone_node',
    'full_cone_step',
    'geometric_separation',
    'leg_separation_table',
    'random_full_cone',
    'verify_stub_tree_separation',
    'window_word',
]
