"""Utility modules for HyperLab"""

from .logger import setup_logging
from .workers import chunked, parallel_map

__all__ = [
    'chunked',
    'parallel_map',
    'setup_logging'
]
