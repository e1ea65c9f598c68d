import sys

import numpy as np
import pytest

from fuzzylevy.fuzzy import AlphaGrid, FuzzyVector
from fuzzylevy.geometry import ConeSpec, ConvexPolygon, minkowski_sum, scale_set, translate


def random_polygon(rng, radius=1.0, k=None):
    k = k or int(rng.integers(1, 9))
    return ConvexPolygon(rng.normal(scale=radius, size=(k, 2)))


def random_fuzzy(rng, grid, spread=1.0, center=None):
    """Nested stack: core + s_i (B - centroid) with s_i shrinking in alpha."""
    B = random_polygon(rng, spread)
    B = translate(B, -B.vertices.mean(axis=0))
    core = random_polygon(rng, 0.3 * spread, k=int(rng.integers(1, 4)))
    c = rng.normal(size=2) if center is None else np.asarray(center, dtype=float)
    s = np.sort(rng.uniform(0.0, 1.0, size=len(grid)))[::-1]
    s[-1] = 0.0 if rng.random() < 0.3 else s[-1]
    cuts = [translate(minkowski_sum(core, scale_set(si, B)) if si > 0 else core, c) for si in s]
    return FuzzyVector(grid, cuts)


def shift_into_cone(x, K, margin=0.0):
    """Translate x along the cone's interior direction until every vertex is in K."""
    m = K.generators.sum(axis=0)
    m = m / np.hypot(*m)
    v = x.cuts[0].vertices
    dots = K.normals @ m
    need = max(0.0, float(np.max(-(v @ K.normals.T) / dots[None, :])))
    shift = (need + margin) * m
    return FuzzyVector(x.grid, [translate(c, shift) for c in x.cuts])


def random_k_positive(rng, grid, K, spread=1.0):
    return shift_into_cone(random_fuzzy(rng, grid, spread), K, margin=rng.uniform(0.0, 1.0))


CONES = {
    "quadrant": ConeSpec.first_quadrant(),
    "narrow": ConeSpec.from_generators([[1.0, 0.0], [1.0, 1.0]]),
    "wide": ConeSpec.from_generators([[1.0, 0.0], [-1.0, 1.0]]),
}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def grid8():
    return AlphaGrid.uniform(8)


@pytest.fixture
def grid4():
    return AlphaGrid.uniform(4)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
