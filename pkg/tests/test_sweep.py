from fractions import Fraction

import pytest

from src.enumeration.scalar import SeedPair
from src.errors import InvalidConfigError, ResourceGuardError
from src.simulation.sweep import beta_grid, mean_growth_sweep


def test_default_grid():
    grid = beta_grid("0.1:1.5:0.01")
    assert len(grid) == 141
    assert grid[0] == Fraction(1, 10)
    assert grid[-1] == Fraction(3, 2)
    assert grid == sorted(grid)


def test_rational_grid():
    assert beta_grid("1/2:1:1/4") == [Fraction(1, 2), Fraction(3, 4), 1]


@pytest.mark.parametrize("text", ["0.1:1.5", "1:0:0.1", "0:1:0", "a:b:c"])
def test_bad_grid(text):
    with pytest.raises(InvalidConfigError):
        beta_grid(text)


def test_exact_points():
    points = mean_growth_sweep([Fraction(1, 2), 1], 3)
    assert points[1].mean_abs == Fraction(7, 4)
    assert points[0].beta == Fraction(1, 2)
    assert all(p.mode == "exact" and p.level == 3 for p in points)


def test_mc_agrees_with_exact():
    exact = mean_growth_sweep([1], 6)[0]
    mc = mean_growth_sweep([1], 6, mode="mc", samples=40_000, rng_seed=11)[0]
    assert abs(mc.mean_abs - float(exact.mean_abs)) <= 5 * mc.stderr


def test_mc_is_reproducible():
    first = mean_growth_sweep([0.5, 0.8], 8, mode="mc", samples=1_000, rng_seed=4)
    second = mean_growth_sweep([0.5, 0.8], 8, mode="mc", samples=1_000, rng_seed=4)
    assert first == second


def test_seed_pair_is_used():
    points = mean_growth_sweep([1], 1, seed=SeedPair(0, 1))
    # children of (0, 1) are |0 - 1| and 0 + 1
    assert points[0].mean_abs == 1


def test_unknown_mode():
    with pytest.raises(InvalidConfigError):
        mean_growth_sweep([1], 3, mode="float")


def test_level_guard():
    with pytest.raises(ResourceGuardError):
        mean_growth_sweep([1], 30)


def assert_mc_tracks_exact(grid, level, samples, rng_seed):
    exact = mean_growth_sweep(grid, level)
    mc = mean_growth_sweep(grid, level, mode="mc", samples=samples, rng_seed=rng_seed)
    for e, m in zip(exact, mc):
        assert m.beta == float(e.beta)
        assert abs(m.mean_abs - float(e.mean_abs)) <= 5 * m.stderr, e.beta


def test_mc_tracks_exact_on_coarse_grid():
    assert_mc_tracks_exact(beta_grid("0.1:1.5:0.1"), 10, 20_000, 5)


@pytest.mark.slow
def test_mc_tracks_exact_on_default_grid():
    assert_mc_tracks_exact(beta_grid("0.1:1.5:0.01"), 10, 100_000, 42)
