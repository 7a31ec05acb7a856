import numpy as np
import pytest

from ratetree import calibrate_bdt, calibrate_zbdt, kernels
from ratetree.lattice import ZbdtParams
from ratetree.reference import EXAMPLE, REAL_CASE

import acceptance_log


@pytest.fixture(scope="session")
def example_bdt():
    return calibrate_bdt(EXAMPLE.curve)[0]


@pytest.fixture(scope="session")
def example_zbdt():
    return calibrate_zbdt(EXAMPLE.curve, EXAMPLE.zbdt_params)[0]


@pytest.fixture(scope="session")
def real_bdt():
    return calibrate_bdt(REAL_CASE.curve)[0]


@pytest.fixture(scope="session")
def real_zbdt():
    return calibrate_zbdt(REAL_CASE.curve, REAL_CASE.zbdt_params)[0]


@pytest.fixture(scope="session")
def example_trees(example_bdt, example_zbdt):
    return {"bdt": example_bdt, "zbdt": example_zbdt}


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    return request.param


@pytest.fixture(scope="session")
def zero_jump_params():
    return ZbdtParams(p=0.0, q=0.01, x0=0.0025)


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_log.lines():
        terminalreporter.write_line(line)
