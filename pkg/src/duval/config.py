"""
Runtime configuration

Settings come from the environment, optionally seeded from a local .env
file. Scripts use these values as argparse defaults.
"""

import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()

REPO_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..', '..'))


@dataclass(frozen=True)
class Settings:
    """Toolkit settings resolved from the environment"""

    fixture_dir: str
    jet_cap: int
    reduction_jet: int
    log_level: str


def get_settings() -> Settings:
    """
    Read settings from the environment

    Returns:
        Settings with defaults filled in
    """
    return Settings(
        fixture_dir=os.getenv('DUVAL_FIXTURE_DIR', os.path.join(REPO_ROOT, 'fixtures')),
        jet_cap=int(os.getenv('DUVAL_JET_CAP', '24')),
        reduction_jet=int(os.getenv('DUVAL_REDUCTION_JET', '8')),
        log_level=os.getenv('DUVAL_LOG_LEVEL', 'WARNING').upper(),
    )
