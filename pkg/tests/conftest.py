import warnings

import numpy as np
import pytest

# numba's TBB version probe warns on this box; the workqueue layer it falls
# back to is fine for the suite.
warnings.filterwarnings("ignore", message=".*TBB.*")


@pytest.fixture
def rng():
    return np.random.default_rng(20230915)
