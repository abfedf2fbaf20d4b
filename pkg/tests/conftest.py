import numpy as np
import pytest

from satcoop.channel.link_budget import LinkBudget
from satcoop.config.loader import validate_config


@pytest.fixture(autouse=True)
def _no_disk_cache(monkeypatch):
    # keep moment caches in memory so tests never read results of older runs
    monkeypatch.delenv("SATCOOP_CACHE_DIR", raising=False)
    monkeypatch.delenv("SATCOOP_THREADS", raising=False)


@pytest.fixture(scope="session")
def baseline_config():
    return validate_config("london-two-shell")


@pytest.fixture
def short_config(baseline_config):
    """A one-minute run with a light moment estimate, for fast end-to-end checks."""
    return baseline_config.with_experiment(
        duration_s=60.0, L_values=[1, 4, 12], epsilon_values=[0.0, 3.0]
    ).with_channel(moment_samples=20_000)


@pytest.fixture
def baseline_link():
    return LinkBudget(
        power_dbw=-2.0,
        tx_gain_db=5.0,
        rx_gain_db=35.0,
        carrier_hz=6e9,
        bandwidth_hz=500e6,
        noise_temperature_k=290.0,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
