"""Base dynamical systems: circle, dendrite and sphere models"""
from .circle import (CircleContinuum, CirclePoint, ContinuumKind, MorseSmaleCircleMap, Orientation,
                     PeriodicPoint, Stability, circle_distance, normalize, normalize_array)
from .dendrite import (P_END, Q_END, DendriteMap, DendritePoint, Location, Subtree, dendrite_distance,
                       dendrite_map_check, full_dendrite, hausdorff_subtrees, leg_height, node, subtree_image,
                       subtree_iterate)
from .sphere import (INF, Piece, PieceKind, SphereContinuum, chordal_axiom_check, chordal_distance,
                     discretize, hausdorff_sphere, ns_iterate, ns_map, to_sphere)

__all__ = [
    'CircleContinuum',
    'CirclePoint',
    'ContinuumKind',
    'DendriteMap',
    'DendritePoint',
    'INF',
    'Location',
    'MorseSmaleCircleMap',
    'Orientation',
    'P_END',
    'PeriodicPoint',
    'Piece',
    'PieceKind',
    'Q_END',
    'SphereContinuum',
    'Stability',
    'Subtree',
    'chordal_axiom_check',
    'chordal_distance',
    'circle_distance',
    'dendrite_distance',
    'dendrite_map_check',
    'discretize',
    'full_dendrite',
    'hausdorff_sphere',
    'hausdorff_subtrees',
    'leg_height',
    'node',
    'normalize',
    'normalize_array',
    'ns_iterate',
    'ns_map',
    'subtree_image',
    'subtree_iterate',
    'to_sphere',
]
