import pytest

from app.schemas.network import NetworkConfig, PowerModel

BASELINE_CONFIG = """\
# baseline scenario
lambda_b = 1e-5
lambda_u = 1e-3
lambda_r = 1e-4
n_tx = 4
n_rx = 8
kappa = 4
alpha = 2.7
bandwidth_hz = 20e6
p_tx_dbm = 43
gamma_c_db = 2      # dB
gamma_r_db = 2
h_bs = 25
h_ue = 1.5
h_t = 1.5
r_area = 250

p_tx_bar_dbm = 43
eta_eff = 0.5
p_circ_dbm = 51.14
"""


@pytest.fixture
def network() -> NetworkConfig:
    return NetworkConfig()


@pytest.fixture
def power() -> PowerModel:
    return PowerModel()


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "baseline.conf"
    path.write_text(BASELINE_CONFIG, encoding="utf-8")
    return path
