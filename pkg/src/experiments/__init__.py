"""Experiment configs, dispatch and the acceptance suite"""
from .runner import (EXIT_CODES, Criterion, Outcome, RunResult, acceptance_criteria, random_wandering_arcs,
                     reproduce_all, run_experiment)
from .schema import DEFAULTS, EXPERIMENTS, MODES, ExperimentConfig

__all__ = [
    'DEFAULTS',
    'EXIT_CODES',
    'EXPERIMENTS',
    'MODES',
    'Criterion',
    'ExperimentConfig',
    'Outcome',
    'RunResult',
    'acceptance_criteria',
    'random_wandering_arcs',
    'reproduce_all',
    'run_experiment',
]
