import numpy as np
import pytest

from affinestruct.affine_core import AffineMap

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def assert_maps_close(f: AffineMap, g: AffineMap, atol=1e-9):
    np.testing.assert_allclose(f.linear, g.linear, atol=atol, rtol=1e-9)
    np.testing.assert_allclose(f.translation, g.translation, atol=atol, rtol=1e-9)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
