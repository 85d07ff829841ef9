"""
Report exporter for HyperLab experiment results
"""
import hashlib
import io
import json
import logging
import math
import os
import tempfile
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..config import config

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Convert report values into plain JSON types.

    Fractions become "p/q" strings, enums their value, numpy scalars Python
    numbers, and non-finite floats the strings "inf", "-inf" or "nan".
    """
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict())
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in value]
        return sorted(items, key=repr) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [to_jsonable(value.real), to_jsonable(value.imag)]
    if isinstance(value, float):
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if isinstance(value, Path):
        return value.as_posix()
    return value


def canonical_json(payload: Any) -> str:
    """Compact, key-sorted JSON used for hashing"""
    return json.dumps(to_jsonable(payload), sort_keys=True, separators=(',', ':'))


def config_hash(payload: Dict[str, Any]) -> str:
    """sha256 of the canonical JSON of an effective configuration"""
    return hashlib.sha256(canonical_json(payload).encode('utf-8')).hexdigest()


def provenance(kind: str, effective_config: Dict[str, Any]) -> Dict[str, Any]:
    """Provenance block embedded in every JSON report

    Args:
        kind: Experiment kind
        effective_config: Config after defaults were applied

    Returns:
        Dictionary with config hash, versions and effective defaults
    """
    from .. import MODULE_VERSIONS, __version__

    return {
        'experiment': kind,
        'config_sha256': config_hash(effective_config),
        'package_version': __version__,
        'module_versions': dict(MODULE_VERSIONS),
        'library_versions': {
            'numpy': np.__version__,
            'pandas': pd.__version__,
        },
        'defaults': config.effective(),
    }


class ReportExporter:
    """Write JSON and CSV reports atomically"""

    def __init__(self, out_dir: Optional[Union[str, Path]] = None):
        """Initialize exporter

        Args:
            out_dir: Target directory (defaults to config.OUTPUT_DIR)
        """
        self.export_dir = Path(out_dir) if out_dir else Path(config.OUTPUT_DIR)
        self.export_dir.mkdir(exist_ok=True, parents=True)

    def _atomic_write(self, filepath: Path, data: bytes) -> Path:
        fd, tmp_name = tempfile.mkstemp(dir=filepath.parent, prefix=f".{filepath.name}.", suffix='.tmp')
        try:
            with os.fdopen(fd, 'wb') as handle:
                handle.write(data)
            os.replace(tmp_name, filepath)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise
        return filepath

    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        """Write a JSON report (sorted keys, 2-space indent)

        Args:
            name: File stem
            payload: Report dictionary

        Returns:
            Path of the written file
        """
        filepath = self.export_dir / f"{name}.json"
        text = json.dumps(to_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
        self._atomic_write(filepath, text.encode('utf-8'))
        logger.info(f"Exported report to {filepath}")
        return filepath

    def write_csv(self, name: str, rows: Union[pd.DataFrame, Sequence[Dict[str, Any]]],
                  columns: Optional[List[str]] = None) -> Path:
        """Write a CSV table (header row, CRLF line endings)

        Args:
            name: File stem
            rows: DataFrame or list of row dictionaries
            columns: Preferred column order

        Returns:
            Path of the written file
        """
        df = rows.copy() if isinstance(rows, pd.DataFrame) else pd.DataFrame(
            [{k: to_jsonable(v) for k, v in row.items()} for row in rows])

        # Reorder columns if specified
        if columns:
            existing = [col for col in columns if col in df.columns]
            df = df[existing + [col for col in df.columns if col not in existing]]

        buffer = io.StringIO()
        df.to_csv(buffer, index=False, lineterminator="\r\n", float_format="%.12g")

        filepath = self.export_dir / f"{name}.csv"
        self._atomic_write(filepath, buffer.getvalue().encode('utf-8'))
        logger.info(f"Exported {len(df)} rows to {filepath}")
        return filepath
