import numpy as np
import pytest

from tissue_fingers.errors import ResonanceError
from tissue_fingers.params import LabParams, companion_params, from_lab_units, validate

CONTRACTILITIES = (0.0, -6.0, -12.0, -18.0, -24.0, -30.0)


def random_params(n, seed=20240611, zeta_i_min=0.0):
    """n valid, non-resonant parameter sets drawn around the companion values."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        lab = LabParams(mu=rng.uniform(5.0, 60.0), zeta=-rng.uniform(0.0, 40.0),
                        zeta_i=rng.uniform(zeta_i_min, 0.4), xi=rng.uniform(20.0, 400.0),
                        gamma=rng.uniform(0.0, 1.0), Lc=rng.uniform(10.0, 50.0))
        try:
            out.append(validate(from_lab_units(lab)))
        except ResonanceError:
            continue
    return out


@pytest.fixture(scope="session")
def draws():
    return random_params(100)


@pytest.fixture(scope="session")
def p20():
    return companion_params(-20.0)


@pytest.fixture(scope="session")
def p30():
    return companion_params(-30.0)
