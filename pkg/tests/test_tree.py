"""Sign-tree enumeration against hand-computed rows and the unaggregated oracle."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.enumeration.scalar import Mode, SeedPair, normalize
from src.enumeration.tree import (
    NodeState,
    brute_force_leaves,
    enumerate_rows,
    iter_rows,
    root_row,
    row_stats,
    step_row,
    summarize_leaves,
)
from src.errors import InvalidConfigError, ResourceGuardError


def test_unit_beta_row_sums(unit_seed):
    summaries = enumerate_rows(unit_seed, 1, 3)
    assert [s.S for s in summaries] == [1, 2, 6, 14]
    assert [s.count for s in summaries] == [1, 2, 4, 8]


def test_unit_beta_level_three_states(unit_seed):
    rows = list(iter_rows(unit_seed, 1, 3))
    assert dict(rows[2].states) == {(0, 1): 2, (2, 1): 1, (2, 3): 1}
    assert dict(rows[3].states) == {(1, 1): 5, (1, 3): 1, (3, 1): 1, (3, 5): 1}


def test_half_beta_first_row():
    summary = enumerate_rows(SeedPair(1, 1), Fraction(1, 2), 1)[1]
    assert summary.S == 2
    assert summary.mean_abs == 1
    assert summary.variance == Fraction(1, 4)


def test_root_row_holds_seed():
    row = root_row(SeedPair(0, 1), 1)
    assert dict(row.states) == {(0, 1): 1}
    assert row_stats(row).S == 1


def test_counts_sum_to_power_of_two(unit_seed):
    for row in iter_rows(unit_seed, Fraction(3, 7), 8):
        assert row.total_count() == 2 ** row.level


def test_raw_second_moment_follows_fibonacci_rule(unit_seed):
    raw = [s.raw_second for s in enumerate_rows(unit_seed, 1, 12)]
    for n in range(2, len(raw)):
        assert raw[n] == raw[n - 1] + raw[n - 2]


def test_threads_do_not_change_exact_rows(unit_seed):
    rows = list(iter_rows(unit_seed, Fraction(2, 3), 9))
    serial = step_row(rows[-1])
    threaded = step_row(rows[-1], workers=4, chunk_size=7)
    assert dict(serial.states) == dict(threaded.states)


def test_float_mode_tracks_exact(unit_seed):
    exact = enumerate_rows(unit_seed, Fraction(1, 2), 12)
    approx = enumerate_rows(unit_seed, 0.5, 12, Mode.FLOAT)
    for e, f in zip(exact, approx):
        assert f.S == pytest.approx(float(e.S), rel=1e-12)
        assert f.raw_second == pytest.approx(float(e.raw_second), rel=1e-12)


def test_float_rescaling_is_transparent(unit_seed):
    row = root_row(unit_seed, 3.0, Mode.FLOAT)
    plain = row
    for _ in range(8):
        row = step_row(row, rescale_exponent=4)
        plain = step_row(plain)
    assert row.scale_exp > 0
    assert row_stats(row).S == pytest.approx(row_stats(plain).S, rel=1e-12)
    assert row_stats(row).mean_abs == pytest.approx(row_stats(plain).mean_abs, rel=1e-12)


def test_level_cap(unit_seed):
    with pytest.raises(ResourceGuardError):
        enumerate_rows(unit_seed, 1, 40)


def test_state_cap(unit_seed):
    with pytest.raises(ResourceGuardError):
        enumerate_rows(unit_seed, 1, 5, state_cap=3)


@pytest.mark.parametrize("beta", [0, -1, Fraction(-1, 2)])
def test_nonpositive_beta(unit_seed, beta):
    with pytest.raises(InvalidConfigError):
        root_row(unit_seed, beta)


def test_float_beta_rejected_in_exact_mode(unit_seed):
    with pytest.raises(InvalidConfigError):
        root_row(unit_seed, 0.5, Mode.EXACT)


def test_negative_level(unit_seed):
    with pytest.raises(InvalidConfigError):
        enumerate_rows(unit_seed, 1, -1)


betas = st.fractions(min_value=Fraction(1, 12), max_value=3, max_denominator=12)
seeds = st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda p: p != (0, 0))


@settings(max_examples=40, deadline=None)
@given(beta=betas, seed=seeds, level=st.integers(0, 8))
def test_aggregation_matches_oracle(beta, seed, level):
    seed = SeedPair(*seed)
    aggregated = enumerate_rows(seed, beta, level)[-1]
    oracle = summarize_leaves(brute_force_leaves(seed, beta, level), level)
    assert aggregated == oracle


@pytest.mark.slow
def test_level_twenty_at_unit_beta(unit_seed):
    summaries = enumerate_rows(unit_seed, 1, 20)
    assert summaries[-1].count == 2 ** 20
    assert all(b.S > a.S for a, b in zip(summaries[1:], summaries[2:]))


def test_node_states_cover_the_row(unit_seed):
    row = list(iter_rows(unit_seed, 1, 3))[-1]
    nodes = sorted(row.node_states(), key=lambda node: (node.prev, node.curr))
    assert nodes == [NodeState(1, 1, 5), NodeState(1, 3, 1), NodeState(3, 1, 1), NodeState(3, 5, 1)]
    assert sum(node.count for node in nodes) == 8


def test_rescale_exponent_reaches_the_rows(unit_seed):
    tight = enumerate_rows(unit_seed, 3.0, 10, Mode.FLOAT, rescale_exponent=4)
    loose = enumerate_rows(unit_seed, 3.0, 10, Mode.FLOAT)
    assert list(iter_rows(unit_seed, 3.0, 10, Mode.FLOAT, rescale_exponent=4))[-1].scale_exp > 0
    for a, b in zip(tight, loose):
        assert a.S == pytest.approx(b.S, rel=1e-12)
        assert a.variance == pytest.approx(b.variance, rel=1e-9)


@pytest.mark.parametrize("kwargs", [dict(chunk_size=0), dict(rescale_exponent=0)])
def test_step_knobs_validated(unit_seed, kwargs):
    with pytest.raises(InvalidConfigError):
        step_row(root_row(unit_seed, 1), **kwargs)


@pytest.mark.parametrize("beta, seed", [
    (1, SeedPair(1, 1)),
    (Fraction(3, 7), SeedPair(1, 1)),
    (Fraction(5, 2), SeedPair(0, 1)),
    (Fraction(2, 3), SeedPair(3, 2)),
])
def test_signed_paths_land_on_aggregated_states(beta, seed):
    # the signed recursion x_{k+1} = x_{k-1} + s beta x_k, no absolute values along the way
    level, paths = 12, 250
    rows = list(iter_rows(seed, beta, level))
    rng = np.random.Generator(np.random.Philox(7))
    for signs in rng.choice((-1, 1), size=(paths, level)):
        prev, curr = Fraction(seed.x0), Fraction(seed.x1)
        for k, s in enumerate(signs, start=1):
            p, c = abs(prev), abs(curr)
            prev, curr = curr, prev + int(s) * beta * curr
            assert abs(curr) in (abs(p - beta * c), p + beta * c)
            assert rows[k].states.get((normalize(abs(prev)), normalize(abs(curr))), 0) > 0
