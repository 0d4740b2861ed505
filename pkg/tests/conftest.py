import numpy as np
import pytest

from flatsphere import KernelSpec, build_system, fekete_points


def random_sphere(rng, count, dim=3):
    x = rng.standard_normal((count, dim))
    return x / np.linalg.norm(x, axis=1)[:, None]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def system_l8():
    pts = fekete_points(2, 8, 0.2)
    return build_system(pts, KernelSpec(2, 8, 0.2))


@pytest.fixture(scope="session")
def system_l20():
    pts = fekete_points(2, 20, 0.2)
    return build_system(pts, KernelSpec(2, 20, 0.2))


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one status line per acceptance criterion."""

    def log(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line, flush=True)
        return ok

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
