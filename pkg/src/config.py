"""
Zero-Configuration management for HyperLab
All settings have sensible defaults - no .env required
"""
import os
from pathlib import Path
from typing import Any, Dict

from dotenv import load_dotenv


class Config:
    """Application configuration with zero-config defaults"""

    # Application paths (auto-created)
    BASE_DIR: Path = Path(__file__).parent.parent
    LOGS_DIR: Path = BASE_DIR / 'logs'
    OUTPUT_DIR: Path = BASE_DIR / 'reports'
    CONFIGS_DIR: Path = BASE_DIR / 'configs'

    # Numerical tolerances
    DEDUP_TOL: float = 1e-12
    INVERSE_TOL: float = 1e-12
    INVERSE_MAX_ITER: int = 200
    MEMBERSHIP_TOL: float = 1e-9
    SPHERE_RESOLUTION: float = 1e-4

    # Worker pool
    MAX_WORKERS: int = os.cpu_count() or 1

    # Logging defaults
    LOG_LEVEL: str = 'INFO'
    SHOW_PROGRESS: bool = False

    def __init__(self):
        """Initialize configuration"""
        # Optional .env next to the project root
        load_dotenv(self.BASE_DIR / '.env')

        self._load_env_overrides()

        self.LOGS_DIR.mkdir(exist_ok=True, parents=True)

    def _load_env_overrides(self):
        """Load any environment variable overrides (optional)"""
        if os.getenv('HYPERLAB_THREADS'):
            self.MAX_WORKERS = max(1, min(self.MAX_WORKERS, int(os.getenv('HYPERLAB_THREADS'))))
        if os.getenv('HYPERLAB_LOG_LEVEL'):
            self.LOG_LEVEL = os.getenv('HYPERLAB_LOG_LEVEL').upper()
        if os.getenv('HYPERLAB_DEDUP_TOL'):
            self.DEDUP_TOL = float(os.getenv('HYPERLAB_DEDUP_TOL'))
        if os.getenv('HYPERLAB_INVERSE_TOL'):
            self.INVERSE_TOL = float(os.getenv('HYPERLAB_INVERSE_TOL'))
        if os.getenv('HYPERLAB_MEMBERSHIP_TOL'):
            self.MEMBERSHIP_TOL = float(os.getenv('HYPERLAB_MEMBERSHIP_TOL'))
        if os.getenv('HYPERLAB_SPHERE_RESOLUTION'):
            self.SPHERE_RESOLUTION = float(os.getenv('HYPERLAB_SPHERE_RESOLUTION'))
        if os.getenv('HYPERLAB_PROGRESS'):
            self.SHOW_PROGRESS = os.getenv('HYPERLAB_PROGRESS').lower() in ('1', 'true', 'yes')
        if os.getenv('HYPERLAB_OUTPUT_DIR'):
            self.OUTPUT_DIR = Path(os.getenv('HYPERLAB_OUTPUT_DIR'))

    def effective(self) -> Dict[str, Any]:
        """Effective numerical settings, embedded in every report.

        Paths and the worker count are left out: they do not change results.
        """
        return {
            'dedup_tol': self.DEDUP_TOL,
            'inverse_tol': self.INVERSE_TOL,
            'inverse_max_iter': self.INVERSE_MAX_ITER,
            'membership_tol': self.MEMBERSHIP_TOL,
            'sphere_resolution': self.SPHERE_RESOLUTION,
        }


# Create singleton instance
config = Config()
