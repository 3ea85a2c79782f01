import numpy as np
import pytest

from bergman_content import MapCoeffs

_CRITERIA = []


def random_univalent_map(rng: np.random.Generator, max_degree: int = 6) -> MapCoeffs:
    """Random polynomial map with |phi'/a_1 - 1| < 1 on the disk, hence univalent."""
    n = int(rng.integers(1, max_degree + 1))
    a1 = complex(rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0, 2 * np.pi)))
    if n == 1:
        return MapCoeffs((a1,))
    raw = rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1)
    k = np.arange(2, n + 1)
    budget = rng.uniform(0.2, 0.9)
    raw *= budget / np.sum(k * np.abs(raw))
    return MapCoeffs((a1,) + tuple(a1 * raw))


@pytest.fixture
def criterion():
    """Record one pass/fail line for the acceptance summary."""

    def record(number, title, ok, detail=""):
        _CRITERIA.append((number, title, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(_CRITERIA, key=lambda c: c[0]):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title}  {detail}")
