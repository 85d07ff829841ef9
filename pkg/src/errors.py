"""
Exception hierarchy for HyperLab

Inconclusive numerical outcomes are verdicts, not exceptions.
"""


class HyperlabError(Exception):
    """Base class for all HyperLab errors"""


class ConfigError(HyperlabError, ValueError):
    """Experiment configuration failed validation"""


class PreconditionError(HyperlabError, ValueError):
    """An operation was called outside its domain"""


class ConvergenceError(HyperlabError, RuntimeError):
    """An iterative solver hit its iteration cap"""


class InvariantBreach(HyperlabError, RuntimeError):
    """An internal identity or certificate failed to hold"""
