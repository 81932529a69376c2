from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from quadrifold.fibration import FibrationSpec
from quadrifold.gfpoly import BinaryForm, gf
from quadrifold.io import load_fibration

DATA = Path(__file__).resolve().parent.parent / "data"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def data_path(name):
    return DATA / name


@pytest.fixture(scope="session")
def f3():
    return gf(3)


@pytest.fixture(scope="session")
def f5():
    return gf(5)


@pytest.fixture(scope="session")
def worked_f3():
    """diag(u, v, u+v, u-v) over F_3 with d = 0, e = 1."""
    return load_fibration(data_path("f3_worked.json"))


@pytest.fixture(scope="session")
def worked_f5():
    """diag(u, v, u+v, u-2v) over F_5 with d = 0, e = 1."""
    return load_fibration(data_path("f5_weak_approx.json"))


@pytest.fixture(scope="session")
def hecke_f3():
    return load_fibration(data_path("f3_hecke_worked.json"))


@pytest.fixture(scope="session")
def surgery_f3():
    """A square-free F_3 example with split smooth fibers over [1:0] and [1:1]."""
    return load_fibration(data_path("f3_surgery.json"))


@pytest.fixture(scope="session")
def split_f5():
    """diag(u, v, u+v, u+2v) over F_5; the fiber over [1:1] has rational lines."""
    F = gf(5)
    return FibrationSpec.diagonal(F, (0, 0, 0, 0), 1, [[1, 0], [0, 1], [1, 1], [1, 2]])


def lin(F, a, b):
    return BinaryForm(F, [a, b])
