import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from isodensity.geometry import FourierStar, random_polygon, random_star

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def mild_stars(seed: int, n: int, K: int = 3, spread: float = 0.12):
    """Random origin-centred stars gentle enough for the Theodorsen iteration."""
    g = np.random.default_rng(seed)
    return [random_star(g, K=K, a0=float(g.uniform(0.6, 1.8)), spread=spread, min_ratio=0.5)
            for _ in range(n)]


def off_origin_domains(seed: int, n: int):
    """Random stars and polygons placed away from the origin (origin outside)."""
    g = np.random.default_rng(seed)
    out = []
    for i in range(n):
        center = complex(*g.uniform(-4, 4, 2))
        while abs(center) < 2.5:
            center = complex(*g.uniform(-4, 4, 2))
        if i % 2:
            out.append(random_polygon(g, int(g.integers(3, 9)), center=center, scale=1.0))
        else:
            out.append(random_star(g, K=5, spread=0.3, center=center))
    return out


UNIT_STAR = FourierStar(0j, 1.0, [0.0, 0.2])


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""

    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
