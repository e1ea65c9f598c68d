import math

import numpy as np
import pytest

from fuzzylevy.embedding import SphereGrid, embed, lp_norm
from fuzzylevy.fuzzy import AlphaGrid, crisp
from fuzzylevy.geometry import ConeSpec
from fuzzylevy.levy import LevyModel, LevyTriplet, tail_mass
from fuzzylevy.stats import (
    continuity,
    independence,
    jump_counts,
    ks_critical,
    ks_stationarity,
    path_statistics,
    poisson_count_tests,
    simulate_ensemble,
)

AG = AlphaGrid.uniform(3)
SG = SphereGrid(8)
K = ConeSpec.first_quadrant()


def triplet():
    atoms = []
    for pt in ((1, 1), (2, 0.3)):
        f = embed(crisp(pt, AG), SG)
        atoms.append(f / lp_norm(f))
    m = LevyModel(0.5, atoms, [0.5, 0.5], K, AG, SG)
    return LevyTriplet.centered(m, embed(crisp((1, 1), AG), SG), 0.2)


def test_ks_critical_value():
    assert ks_critical(1000, 1000, 0.01) == pytest.approx(1.6276 * math.sqrt(2 / 1000), rel=1e-4)


def test_poisson_tests_accept_poisson_and_reject_shift():
    r = np.random.default_rng(0)
    c = r.poisson(4.0, size=2000)
    assert all(t.passed for t in poisson_count_tests(c, 4.0))
    assert not all(t.passed for t in poisson_count_tests(c, 5.0))
    over = r.negative_binomial(2, 1 / 3, size=2000)  # mean 4, variance 12
    res = poisson_count_tests(over, 4.0)
    assert res[0].passed and not res[1].passed


def test_ks_and_independence_helpers():
    r = np.random.default_rng(1)
    a, b = r.standard_cauchy(1000), r.standard_cauchy(1000)
    assert ks_stationarity(a, b).passed
    assert not ks_stationarity(a, b + 1.0).passed
    assert independence(a, b).passed
    assert not independence(a, a**3 + 0.1 * b).passed


def test_continuity_band():
    r = np.random.default_rng(2)
    h, rate = 0.01, 20.0
    p = 1 - math.exp(-h * rate)
    assert continuity(r.random(5000) < p, h, rate).passed
    assert not continuity(r.random(5000) < 3 * p, h, rate).passed


def test_ensemble_independent_of_jobs():
    tr = triplet()
    a = simulate_ensemble(tr, 1.0, 0.05, 123, 6, jobs=1)
    b = simulate_ensemble(tr, 1.0, 0.05, 123, 6, jobs=2)
    assert len(a) == len(b) == 6
    for x, y in zip(a, b):
        assert x.seed == y.seed
        assert np.array_equal(x.times, y.times) and np.array_equal(x.magnitudes, y.magnitudes)


@pytest.mark.slow
def test_expected_jump_count_matches_tail_mass():
    tr = triplet()
    trajs = simulate_ensemble(tr, 1.0, 0.05, 9, 1000)
    counts = jump_counts(trajs, tr.model, 0.05)
    res = poisson_count_tests(counts, tail_mass(tr.model, 0.05))
    assert all(t.passed for t in res), res


def test_path_statistics_rows():
    tr = triplet()
    trajs = simulate_ensemble(tr, 1.0, 0.05, 4, 300)
    rows = path_statistics(tr, trajs, eps_levels=[0.1], probes=[])
    names = [r.name for r in rows]
    assert names == ["poisson_eps=0.1_mean", "poisson_eps=0.1_variance", "ks_stationarity", "independence", "continuity"]
    assert all(r.passed for r in rows), rows
