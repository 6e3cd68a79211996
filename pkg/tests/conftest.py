import numpy as np
import pytest

from pumcode import PumCode, get_field

ACCEPTANCE_LINES: list[str] = []


def make_code(p, m, n, k, k1, phi):
    return PumCode(get_field(p, m), n, k, k1, phi)


@pytest.fixture(scope="session")
def ref1():
    return make_code(2, 3, 7, 3, 2, 1)


@pytest.fixture(scope="session")
def ref2():
    return make_code(2, 3, 7, 5, 4, 3)


@pytest.fixture(scope="session")
def phi0():
    return make_code(2, 3, 7, 3, 2, 0)


@pytest.fixture(scope="session")
def gf9_code():
    return make_code(3, 2, 8, 4, 2, 1)


def random_info(code, length, rng):
    return [[int(x) for x in rng.integers(0, code.field.q, size=code.k)] for _ in range(length)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def report():
    def emit(label: str, ok: bool, detail: str) -> None:
        line = f"{label} {'PASS' if ok else 'FAIL'}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
