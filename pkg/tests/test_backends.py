import os
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from polybergman._backend import (
    HAVE_NUMBA,
    zonal_matrix_numba,
    zonal_matrix_numpy,
)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_backends_agree(n):
    rng = np.random.default_rng(n)
    t = rng.uniform(-1.0, 1.0, size=500)
    a = zonal_matrix_numpy(t, 60, n)
    b = zonal_matrix_numba(t, 60, n)
    assert_allclose(a, b, rtol=1e-13, atol=1e-13)


def test_numpy_backend_basic_values():
    out = zonal_matrix_numpy(np.array([1.0]), 5, 3)
    # diagonal values are the spherical-harmonic dimensions 2m+1
    assert_allclose(out[:, 0], [1.0, 3.0, 5.0, 7.0, 9.0, 11.0], rtol=1e-13)


def _backend_name_under_env(value):
    env = dict(os.environ)
    if value is None:
        env.pop("POLYBERGMAN_BACKEND", None)
    else:
        env["POLYBERGMAN_BACKEND"] = value
    out = subprocess.run(
        [sys.executable, "-c", "from polybergman._backend import BACKEND_NAME; print(BACKEND_NAME)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return out.stdout.strip()


def test_env_flag_selects_numpy():
    assert _backend_name_under_env("numpy") == "numpy"


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")
def test_env_flag_selects_numba():
    assert _backend_name_under_env("numba") == "numba"


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")
def test_default_prefers_numba():
    assert _backend_name_under_env(None) == "numba"
