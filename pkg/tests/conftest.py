import numpy as np
import pytest

from qsskit import codebook
from qsskit.qssverify import build_qss_state
from qsskit.qstate import PureState


@pytest.fixture(scope="session")
def five_state():
    return build_qss_state(codebook.five_qubit_encoding())


@pytest.fixture(scope="session")
def steane_state():
    return build_qss_state(codebook.steane_encoding())


def random_state(n, rng):
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return PureState(n, v / np.linalg.norm(v))


def basis_state(label):
    amps = np.zeros(2 ** len(label))
    amps[int(label, 2)] = 1
    return PureState(len(label), amps)


def ghz(n):
    amps = np.zeros(2 ** n)
    amps[0] = amps[-1] = 1 / np.sqrt(2)
    return PureState(n, amps)


@pytest.fixture(scope="session")
def reports():
    """Classification reports keyed by n ("7h" is the homogeneous n=7 run), with wall times."""
    import time

    from qsskit.classify import classify

    out = {}
    times = {}
    for key, n, homog in ((3, 3, False), (4, 4, False), (5, 5, False), (6, 6, False), ("7h", 7, True)):
        t0 = time.perf_counter()
        out[key] = classify(n, homogeneous_only=homog)
        times[key] = time.perf_counter() - t0
    out["times"] = times
    return out


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
