import numpy as np
import pytest

from conftest import random_fuzzy
from fuzzylevy.exceptions import EmptyCut, GridMismatch, NestednessViolation
from fuzzylevy.fuzzy import (
    AlphaGrid,
    FuzzyVector,
    add,
    alpha_cut,
    crisp,
    d_infty,
    is_K_positive,
    make_fuzzy,
    membership,
    multiply,
    scalar_mul,
)
from fuzzylevy.geometry import ConeSpec, ConvexPolygon, EmptyRegion, hausdorff


def box(x0, y0, x1, y1):
    return ConvexPolygon([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])


def test_alpha_grid_rules():
    g = AlphaGrid.uniform(4)
    assert g.levels == (0.25, 0.5, 0.75, 1.0)
    assert np.allclose(g.weights, 0.25)
    assert AlphaGrid((0.1, 0.5, 1.0)).weights.tolist() == pytest.approx([0.1, 0.4, 0.5])
    for bad in [(1.0,), (0.0, 1.0), (0.5, 0.9), (0.5, 0.5, 1.0), (0.7, 0.3, 1.0)]:
        with pytest.raises(ValueError):
            AlphaGrid(bad)


def test_nestedness_is_enforced():
    g = AlphaGrid((0.5, 1.0))
    make_fuzzy(g, [box(0, 0, 2, 2), box(0.5, 0.5, 1, 1)])
    with pytest.raises(NestednessViolation) as ei:
        make_fuzzy(g, [box(0, 0, 1, 1), box(0.5, 0.5, 2, 2)])
    assert ei.value.level == 1


def test_empty_cut_rejected():
    g = AlphaGrid((0.5, 1.0))
    with pytest.raises(EmptyCut):
        make_fuzzy(g, [box(0, 0, 1, 1), EmptyRegion()])


def test_alpha_cut_uses_next_level_up():
    g = AlphaGrid((0.25, 0.5, 1.0))
    x = make_fuzzy(g, [box(0, 0, 4, 4), box(1, 1, 3, 3), box(2, 2, 2.5, 2.5)])
    assert alpha_cut(x, 0.1) == x.cuts[0]
    assert alpha_cut(x, 0.25) == x.cuts[0]
    assert alpha_cut(x, 0.3) == x.cuts[1]
    assert alpha_cut(x, 1.0) == x.cuts[2]
    with pytest.raises(ValueError):
        alpha_cut(x, 0.0)


def test_membership_step_function():
    g = AlphaGrid((0.25, 0.5, 1.0))
    x = make_fuzzy(g, [box(0, 0, 4, 4), box(1, 1, 3, 3), box(2, 2, 2.5, 2.5)])
    assert membership(x, (2.2, 2.2)) == 1.0
    assert membership(x, (1.5, 1.5)) == 0.5
    assert membership(x, (0.5, 3.9)) == 0.25
    assert membership(x, (5, 5)) == 0.0


def test_crisp_arithmetic():
    g = AlphaGrid.uniform(3)
    a, b = crisp((1, 2), g), crisp((3, -1), g)
    assert add(a, b) == crisp((4, 1), g)
    assert scalar_mul(2.0, a) == crisp((2, 4), g)
    assert a + b == add(a, b)
    assert 2.0 * a == scalar_mul(2.0, a)
    assert multiply(a, b) == crisp((3, -2), g)


def test_addition_commutes_levelwise(rng, grid8):
    for _ in range(20):
        x, y = random_fuzzy(rng, grid8), random_fuzzy(rng, grid8)
        assert add(x, y).isclose(add(y, x), 1e-12)


def test_grid_mismatch():
    a = crisp((0, 0), AlphaGrid.uniform(2))
    b = crisp((0, 0), AlphaGrid.uniform(3))
    for op in (add, multiply, d_infty):
        with pytest.raises(GridMismatch):
            op(a, b)


def test_literal_round_trip(rng, grid4):
    x = random_fuzzy(rng, grid4)
    assert FuzzyVector.from_literal(x.to_literal()) == x
    lit = {"cuts": x.to_literal()["cuts"]}
    assert FuzzyVector.from_literal(lit, grid4) == x
    with pytest.raises(ValueError):
        FuzzyVector.from_literal(lit)


def test_k_positivity():
    K = ConeSpec.first_quadrant()
    g = AlphaGrid.uniform(2)
    assert is_K_positive(make_fuzzy(g, [box(0, 0, 1, 1), box(0, 0, 0.5, 0.5)]), K)
    assert not is_K_positive(make_fuzzy(g, [box(-0.1, 0, 1, 1), box(0, 0, 0.5, 0.5)]), K)
    assert is_K_positive(crisp((0, 0), g), K)


def test_d_infty_matches_worst_level(rng, grid4):
    x, y = random_fuzzy(rng, grid4), random_fuzzy(rng, grid4)
    assert d_infty(x, y) == max(hausdorff(a, b) for a, b in zip(x.cuts, y.cuts))
    assert d_infty(x, x) == 0.0


def test_immutable(grid4):
    x = crisp((1, 1), grid4)
    with pytest.raises(AttributeError):
        x.cuts = ()
