import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from polartomo import dataio

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
angles = st.floats(min_value=-360.0, max_value=360.0, allow_nan=False)


def rng_of(seed):
    return np.random.default_rng(seed)


@pytest.fixture(scope="session")
def tomo_data():
    return dataio.read_tomography_csv(dataio.data_path("tomography.csv"))


@pytest.fixture(scope="session")
def bell_records():
    return dataio.read_bell_csv(dataio.data_path("bell_chsh.csv"))


@pytest.fixture(scope="session")
def visibility_records():
    return dataio.read_bell_csv(dataio.data_path("visibility.csv"))


@pytest.fixture(scope="session")
def reference_rho():
    return dataio.reference_rho()
