"""
Monte Carlo Package
PPP scene sampling, array processing and the snapshot simulator
"""

from .beamforming import mvdr_filter, steering_vector, zf_precoder
from .geometry import build_scene, sample_ppp, snapshot_rng
from .simulator import (
    estimate_interference_mgf,
    estimate_metrics,
    run_comm_snapshot,
    run_radar_snapshot,
    sample_interference,
)

__all__ = [
    'sample_ppp',
    'build_scene',
    'snapshot_rng',
    'zf_precoder',
    'mvdr_filter',
    'steering_vector',
    'run_comm_snapshot',
    'run_radar_snapshot',
    'estimate_metrics',
    'sample_interference',
    'estimate_interference_mgf',
]
