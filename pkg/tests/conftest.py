import numpy as np
import pytest

from stirap5.presets import PRESETS
from stirap5.propagate import propagate


def preset(name):
    return PRESETS[name]


@pytest.fixture(scope="session")
def trajectories():
    """One converged propagation per preset, shared across the suite."""
    cache = {}

    def get(name, include_decay=True):
        key = (name, include_decay)
        if key not in cache:
            cfg = PRESETS[name]
            cache[key] = propagate(cfg.system, cfg.pulses(), include_decay=include_decay)
        return cache[key]

    return get


def dense_hamiltonian(rabis):
    """Test-local dense assembly, independent of the package builder."""
    h = np.zeros((5, 5), dtype=complex)
    h[0, 1] = rabis.pump
    h[0, 4] = rabis.control
    h[1, 2] = rabis.stokes3
    h[1, 3] = rabis.stokes4
    h[2, 4] = rabis.branch3
    h[3, 4] = rabis.branch4
    return h + h.conj().T
