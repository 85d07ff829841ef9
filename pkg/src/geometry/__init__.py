"""Plane geometry: segment unions and their Hausdorff distance"""
from .segments import (Segment, directed_segments, hausdorff_point_clouds, hausdorff_segments,
                       hausdorff_segments_sampled, point_segment_distance, sample_segments)

__all__ = [
    'Segment',
    'directed_segments',
    'hausdorff_point_clouds',
    'hausdorff_segments',
    'hausdorff_segments_sampled',
    'point_segment_distance',
    'sample_segments',
]
