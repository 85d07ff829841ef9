"""
Experiment configuration schema

A config file is a JSON object:

    {
      "experiment": "shadow",
      "system": {"kind": "circle_ms", "k": 1, "amplitude": 0.1, "orientation": "preserving"},
      "params": {"mode": "falsify-cf", "epsilon": 0.1},
      "seed": 0,
      "output": {"dir": "reports", "name": "falsify_cf"}
    }

Every parameter left out takes the default below, and the effective values
are written back into the report.
"""
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..errors import ConfigError
from ..systems.circle import MorseSmaleCircleMap

logger = logging.getLogger(__name__)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

EXPERIMENTS: Dict[str, str] = {
    'hausdorff': 'Closed-form circle Hausdorff distance against brute force, metric axioms',
    'recurrence': 'Orbit-closure periodic points, homoclinic witness, fixed continua, wandering certificates',
    'shadow': 'Collar pseudo-orbit falsifier for C(f), constructive shadowing for 2^f',
    'entropy': 'Separated-set entropy tables and the exact separated family',
    'coding': 'Bit-exact coding identities onto shifts',
    'dendrite': 'Stub-tree separation, full-cone conjugacy and the comb-dendrite map',
    'sphere': 'North-South continua, special-dendrite conjugacy, non-shadowing sweep',
}

MODES: Dict[str, Dict[str, List[str]]] = {
    'shadow': {'mode': ['falsify-cf', 'shadow-2f', 'verify']},
    'entropy': {'system': ['arc', 'circle', 'rotation', 'full_shift', 'separated_family']},
    'coding': {'construction': ['sq', 'finite-map', 'cone', 'phi2f']},
    'dendrite': {'mode': ['csigma', 'fullcone', 'conjugacy']},
    'sphere': {'mode': ['periodic', 'homoclinic', 'conjugacy', 'nonshadowing']},
}

# None marks a default resolved per mode by the runner
DEFAULTS: Dict[str, Dict[str, Any]] = {
    'hausdorff': {'samples': 10_000, 'eta': 1e-4},
    'recurrence': {
        'x': 0.25, 'stride': 1, 'trunc': 50, 'trunc_schedule': [10, 20, 30, 40, 50, 60, 70, 80, 90, 100],
        'window': 40, 'wandering_samples': 20, 'wandering_epsilon': 0.05, 'wandering_eta': 1e-3,
        'wandering_window': 20,
    },
    'shadow': {
        'mode': 'falsify-cf', 'epsilon': None, 'delta': None, 'window': None, 'grid': 1e-3,
        'audit_samples': 100, 'per_candidate': False, 'strands': 3, 'trials': 20,
    },
    'entropy': {
        'system': 'arc', 'eps_schedule': [0.1, 0.05], 'n_schedule': list(range(1, 13)), 'samples': 2000,
        'budget': None, 'alpha': GOLDEN, 'symbols': 2, 'r': 2, 'n_max': 3,
    },
    'coding': {'construction': 'phi2f', 'r': 2, 'window': 10, 'samples': 1000},
    'dendrite': {
        'mode': 'csigma', 'k': 2, 'n': 2, 'delta': None, 'pairs': False, 'r': 2, 'window': 4, 'samples': 1000,
        'mesh': 1000,
    },
    'sphere': {
        'mode': 'periodic', 'period': 2, 'x': [1.0, 0.0], 'window': None, 'eta': None, 'epsilon': 0.2,
        'delta': 0.02, 'per_family': 2000, 'mesh': 1000, 'per_candidate': False,
    },
}

DEFAULT_SYSTEM: Dict[str, Any] = {'kind': 'circle_ms', 'k': 1, 'amplitude': 0.1, 'orientation': 'preserving'}


def _coerce(kind: str, name: str, value: Any, default: Any) -> Any:
    """Check a parameter against the type of its default"""
    where = f"{kind}.params.{name}"
    if default is None:
        if value is not None and (isinstance(value, bool) or not isinstance(value, (int, float))):
            raise ConfigError(f"{where} must be a number or null, got {value!r}")
        return value
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{where} must be a boolean, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where} must be an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where} must be a number, got {value!r}")
        return float(value)
    if isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(f"{where} must be a string, got {value!r}")
        return value
    if isinstance(default, list):
        if not isinstance(value, list) or not value:
            raise ConfigError(f"{where} must be a nonempty list, got {value!r}")
        return [_coerce(kind, name, item, default[0]) for item in value]
    return value


@dataclass
class ExperimentConfig:
    """Validated experiment configuration with all defaults applied"""
    kind: str
    system: Dict[str, Any] = field(default_factory=lambda: dict(DEFAULT_SYSTEM))
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EXPERIMENTS:
            raise ConfigError(f"Unknown experiment {self.kind!r}; expected one of {sorted(EXPERIMENTS)}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")

        defaults = DEFAULTS[self.kind]
        unknown = sorted(set(self.params) - set(defaults))
        if unknown:
            raise ConfigError(f"Unknown {self.kind} parameters: {unknown}")
        params = dict(defaults)
        for name, value in self.params.items():
            params[name] = _coerce(self.kind, name, value, defaults[name])
        for name, choices in MODES.get(self.kind, {}).items():
            if params[name] not in choices:
                raise ConfigError(f"{self.kind}.params.{name} must be one of {choices}, got {params[name]!r}")
        self.params = params

        self.system = self.circle_map().to_dict()

        unknown_out = sorted(set(self.output) - {'dir', 'name'})
        if unknown_out:
            raise ConfigError(f"Unknown output fields: {unknown_out}")

    def circle_map(self) -> MorseSmaleCircleMap:
        system = dict(DEFAULT_SYSTEM)
        system.update(self.system or {})
        return MorseSmaleCircleMap.from_dict(system)

    @property
    def name(self) -> str:
        return self.output.get('name') or self.kind

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'ExperimentConfig':
        if not isinstance(payload, dict):
            raise ConfigError("Experiment config must be a JSON object")
        unknown = sorted(set(payload) - {'experiment', 'system', 'params', 'seed', 'output'})
        if unknown:
            raise ConfigError(f"Unknown config fields: {unknown}")
        if 'experiment' not in payload:
            raise ConfigError("Config is missing the 'experiment' field")
        for key in ('system', 'params', 'output'):
            if not isinstance(payload.get(key, {}), dict):
                raise ConfigError(f"'{key}' must be a JSON object")
        return cls(kind=payload['experiment'], system=payload.get('system', {}), params=payload.get('params', {}),
                   seed=payload.get('seed', 0), output=payload.get('output', {}))

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'ExperimentConfig':
        """Read and validate a JSON config file

        Raises:
            ConfigError: unreadable file, malformed JSON or schema violation
        """
        try:
            payload = json.loads(Path(path).read_text(encoding='utf-8'))
        except OSError as exc:
            raise ConfigError(f"Cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Malformed JSON in {path}: {exc}") from exc
        config = cls.from_dict(payload)
        logger.debug(f"Loaded {config.kind} config from {path}")
        return config

    def with_overrides(self, seed: Optional[int] = None, **params: Any) -> 'ExperimentConfig':
        """Copy with a new seed and/or parameters, validated again"""
        merged = dict(self.params)
        merged.update({k: v for k, v in params.items() if v is not None})
        return ExperimentConfig(self.kind, dict(self.system), merged, self.seed if seed is None else seed,
                                dict(self.output))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'experiment': self.kind,
            'system': self.system,
            'params': self.params,
            'seed': self.seed,
            'output': self.output,
        }
