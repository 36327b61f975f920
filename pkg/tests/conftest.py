import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make tests/oracles.py importable

from gradkit.graduation import MortalityTable

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
SICILY_CSV = DATA_DIR / "sicily2008m.csv"


def random_table(rng, omega, with_exposures=True):
    """A plausible mortality table: roughly exponential rates plus noise."""
    ages = np.arange(omega + 1)
    q = np.clip(0.002 * np.exp(0.07 * ages) * np.exp(rng.normal(0, 0.2, omega + 1)),
                1e-6, 0.9)
    e = rng.integers(50, 50_000, omega + 1).astype(float) if with_exposures else None
    return MortalityTable(omega=omega, crude_rates=q, exposures=e)


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)


@pytest.fixture
def sicily_table():
    """Full Sicily 2008 male table, truncated to omega=85; skips when the CSV is absent."""
    if not SICILY_CSV.exists():
        pytest.skip(
            "data/sicily2008m.csv not present (dataset could not be sourced in this "
            "environment); see data/README.md for how to generate it"
        )
    from gradkit.tableio import read_table

    return read_table(SICILY_CSV, omega=85)
