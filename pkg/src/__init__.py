"""
HyperLab - Hyperspace dynamics of Morse-Smale maps
"""

__version__ = "1.0.0"
__author__ = "HyperLab Team"

# Bumped whenever a module changes the numbers it reports
MODULE_VERSIONS = {
    "systems.circle": "1.0",
    "systems.dendrite": "1.0",
    "systems.sphere": "1.0",
    "geometry.segments": "1.0",
    "hyperspace": "1.0",
    "entropy": "1.0",
    "symbolic": "1.0",
    "dendrite": "1.0",
    "sphere": "1.0",
    "experiments": "1.0",
}
