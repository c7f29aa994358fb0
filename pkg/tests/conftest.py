import random
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qcountsim.program.dsl import parse_program  # noqa: E402


@pytest.fixture(scope="session", autouse=True)
def net_cache(tmp_path_factory):
    """Keep built nets out of the user's cache directory."""
    mp = pytest.MonkeyPatch()
    path = tmp_path_factory.mktemp("nets")
    mp.setenv("QCOUNTSIM_NET_CACHE", str(path))
    yield path
    mp.undo()


@pytest.fixture(scope="session")
def net(net_cache):
    from qcountsim.skcompile import build_net

    return build_net(12)


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def nrng():
    return np.random.default_rng(20240601)


HFH = """qprog 1
qubits 1
U H 0
U F 0
U H 0
MEASURE 0 { 0: ACCEPT 1: REJECT }
"""


@pytest.fixture
def hfh():
    return parse_program(HFH)
