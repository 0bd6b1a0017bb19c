"""Level-by-level enumeration of the random Fibonacci sign tree.

Row n holds every value the sequence can reach after n sign choices. Signs are
folded away by storing absolute values: a node is the pair (prev, curr) of
nonnegative numbers, and its two children are

    (curr, |prev - beta * curr|)   and   (curr, prev + beta * curr).

Identical pairs are merged and carry a multiplicity, so a row stays a small
mapping even though it stands for 2^n leaves.
"""

import itertools
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Tuple

from tqdm import tqdm

from ..errors import InvalidConfigError, ResourceGuardError
from .scalar import Mode, Scalar, SeedPair, as_exact, normalize

DEFAULT_LEVEL_CAP = 26
DEFAULT_STATE_CAP = 5_000_000
DEFAULT_CHUNK_SIZE = 50_000
DEFAULT_RESCALE_EXPONENT = 512


@dataclass(frozen=True)
class NodeState:
    """One aggregated tree node: a normalized pair and how many leaves share it."""

    prev: Scalar
    curr: Scalar
    count: int


@dataclass(frozen=True)
class AggregatedRow:
    """
    One level of the sign tree.

    Attributes:
        level: Tree depth n; the counts sum to 2^n
        states: Read-only mapping (prev, curr) -> count
        beta: Multiplier on the current term
        mode: Mode.EXACT or Mode.FLOAT
        scale_exp: Float rows store values divided by 2^scale_exp (always 0 when exact)
    """

    level: int
    states: Mapping[Tuple[Scalar, Scalar], int]
    beta: Scalar
    mode: Mode = Mode.EXACT
    scale_exp: int = 0

    def __len__(self):
        return len(self.states)

    def node_states(self):
        """Iterate the stored states as NodeState records."""
        for (prev, curr), count in self.states.items():
            yield NodeState(prev, curr, count)

    def total_count(self):
        return sum(self.states.values())


@dataclass(frozen=True)
class RowSummary:
    """Exact (or float) statistics of one row."""

    level: int
    S: Scalar
    SS: Scalar
    count: int
    mean_abs: Scalar
    raw_second: Scalar
    variance: Scalar
    states: int = field(default=0, compare=False)


def _check_beta(beta, mode):
    if mode is Mode.EXACT:
        if isinstance(beta, float):
            raise InvalidConfigError(
                f"exact mode needs a rational beta given as 'p/q' or a decimal, got float {beta!r}"
            )
        beta = normalize(Fraction(beta))
    else:
        beta = float(beta)
    if beta <= 0:
        raise InvalidConfigError(f"beta must be positive, got {beta}")
    return beta


def root_row(seed, beta, mode=Mode.EXACT):
    """
    Build row 0, holding the seed pair once.

    Args:
        seed: SeedPair (x0, x1), not both zero
        beta: Positive multiplier; rational in exact mode
        mode: Mode.EXACT or Mode.FLOAT

    Returns:
        AggregatedRow at level 0
    """
    mode = Mode(mode)
    if not isinstance(seed, SeedPair):
        seed = SeedPair(*seed)
    seed = seed.in_mode(mode)
    beta = _check_beta(beta, mode)
    return AggregatedRow(
        level=0,
        states=MappingProxyType({(seed.x0, seed.x1): 1}),
        beta=beta,
        mode=mode,
    )


def _expand(items, beta):
    """Children of a batch of (key, count) items, merged by key."""
    out = {}
    get = out.get
    for (prev, curr), count in items:
        scaled = beta * curr
        diff = prev - scaled
        if diff < 0:
            diff = -diff
        key = (curr, diff)
        out[key] = get(key, 0) + count
        key = (curr, prev + scaled)
        out[key] = get(key, 0) + count
    return out


def _rescale(states, rescale_exponent):
    """Divide every value by 2^k; exact for floats away from the subnormal range."""
    rescaled = Counter()
    for (prev, curr), count in states.items():
        rescaled[(math.ldexp(prev, -rescale_exponent), math.ldexp(curr, -rescale_exponent))] += count
    return dict(rescaled)


def step_row(row, workers=1, chunk_size=DEFAULT_CHUNK_SIZE, state_cap=None,
             rescale_exponent=DEFAULT_RESCALE_EXPONENT):
    """
    Expand every node of a row into its two children and merge equal pairs.

    Args:
        row: AggregatedRow
        workers: Threads to spread the expansion over; partial maps are merged
            in partition order, so exact results do not depend on this
        chunk_size: States per partition when workers > 1
        state_cap: Raise ResourceGuardError if the new row has more states
        rescale_exponent: Float rows rescale by 2^-k once a value exceeds 2^k

    Returns:
        AggregatedRow at row.level + 1
    """
    if chunk_size < 1 or rescale_exponent < 1:
        raise InvalidConfigError(f"chunk_size and rescale_exponent must be >= 1, got {chunk_size}, {rescale_exponent}")
    items = list(row.states.items())
    if workers > 1 and len(items) > chunk_size:
        chunks = [items[i:i + chunk_size] for i in range(0, len(items), chunk_size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(lambda chunk: _expand(chunk, row.beta), chunks))
        merged = Counter()
        for partial in partials:
            merged.update(partial)
        states = dict(merged)
    else:
        states = _expand(items, row.beta)

    if state_cap is not None and len(states) > state_cap:
        raise ResourceGuardError(
            f"level {row.level + 1} has {len(states):,} aggregated states, above the cap of {state_cap:,}"
        )

    scale_exp = row.scale_exp
    if row.mode is Mode.FLOAT:
        largest = max(max(key) for key in states)
        if largest > math.ldexp(1.0, rescale_exponent):
            states = _rescale(states, rescale_exponent)
            scale_exp += rescale_exponent

    return AggregatedRow(
        level=row.level + 1,
        states=MappingProxyType(states),
        beta=row.beta,
        mode=row.mode,
        scale_exp=scale_exp,
    )


def row_stats(row):
    """
    Row sum, sum of squares and normalized moments of a row.

    Args:
        row: AggregatedRow

    Returns:
        RowSummary; exact Fractions/ints in exact mode, floats otherwise
    """
    count = row.total_count()
    nodes = list(row.node_states())
    if row.mode is Mode.EXACT:
        S = sum(node.count * node.curr for node in nodes)
        SS = sum(node.count * node.curr * node.curr for node in nodes)
        mean_abs = normalize(Fraction(S) / count)
        raw_second = normalize(Fraction(SS) / count)
        variance = normalize(raw_second - Fraction(mean_abs) ** 2)
        return RowSummary(row.level, normalize(Fraction(S)), normalize(Fraction(SS)), count,
                          mean_abs, raw_second, variance, states=len(row))

    # fsum is correctly rounded, so the result does not depend on state order
    S_scaled = math.fsum(node.count * node.curr for node in nodes)
    SS_scaled = math.fsum(node.count * node.curr * node.curr for node in nodes)
    exp = row.scale_exp
    S = math.ldexp(S_scaled, exp)
    SS = math.ldexp(SS_scaled, 2 * exp)
    mean_abs = math.ldexp(S_scaled, exp - row.level)
    raw_second = math.ldexp(SS_scaled, 2 * exp - row.level)
    variance = max(raw_second - mean_abs * mean_abs, 0.0)
    return RowSummary(row.level, S, SS, count, mean_abs, raw_second, variance, states=len(row))


def iter_rows(seed, beta, n_max, mode=Mode.EXACT, level_cap=DEFAULT_LEVEL_CAP,
              state_cap=DEFAULT_STATE_CAP, workers=1, chunk_size=DEFAULT_CHUNK_SIZE,
              rescale_exponent=DEFAULT_RESCALE_EXPONENT, progress=False):
    """Yield the aggregated rows for levels 0..n_max, checking the resource guards."""
    if not isinstance(n_max, int) or n_max < 0:
        raise InvalidConfigError(f"n_max must be a nonnegative integer, got {n_max!r}")
    if n_max > level_cap:
        raise ResourceGuardError(
            f"n_max={n_max} is above the enumeration cap of {level_cap} "
            f"(the tree has 2^{n_max} leaves); raise the cap or use float Monte Carlo"
        )

    row = root_row(seed, beta, mode)
    yield row
    levels = range(1, n_max + 1)
    if progress:
        levels = tqdm(levels, desc="Enumerating levels")
    for _ in levels:
        row = step_row(row, workers=workers, chunk_size=chunk_size, state_cap=state_cap,
                       rescale_exponent=rescale_exponent)
        yield row


def enumerate_rows(seed, beta, n_max, mode=Mode.EXACT, level_cap=DEFAULT_LEVEL_CAP,
                   state_cap=DEFAULT_STATE_CAP, workers=1, chunk_size=DEFAULT_CHUNK_SIZE,
                   rescale_exponent=DEFAULT_RESCALE_EXPONENT, progress=False):
    """
    Summaries of levels 0..n_max of the sign tree.

    Args:
        seed: SeedPair held by row 0
        beta: Positive multiplier; must be rational (int/Fraction) in exact mode
        n_max: Deepest level to compute
        mode: Mode.EXACT or Mode.FLOAT
        level_cap: n_max above this is refused
        state_cap: A row with more aggregated states than this is refused
        workers: Threads per step
        chunk_size: States per partition when workers > 1
        rescale_exponent: Float rows rescale by 2^-k once a value passes 2^k
        progress: Show a tqdm bar over levels

    Returns:
        List of RowSummary, one per level
    """
    return [
        row_stats(row)
        for row in iter_rows(seed, beta, n_max, mode, level_cap, state_cap,
                             workers, chunk_size, rescale_exponent, progress)
    ]


def brute_force_leaves(seed, beta, level):
    """
    |x| at every leaf of a level, by running the signed recursion on all 2^level sign sequences.

    No aggregation and no absolute values until the end; used as an independent oracle.
    """
    seed = seed if isinstance(seed, SeedPair) else SeedPair(*seed)
    x0, x1 = as_exact(seed.x0), as_exact(seed.x1)
    beta = as_exact(beta)
    leaves = []
    for signs in itertools.product((1, -1), repeat=level):
        prev, curr = x0, x1
        for sign in signs:
            prev, curr = curr, prev + sign * beta * curr
        leaves.append(abs(curr))
    return leaves


def summarize_leaves(leaves, level):
    """RowSummary of a flat list of exact leaf values."""
    count = len(leaves)
    S = sum(leaves)
    SS = sum(v * v for v in leaves)
    mean_abs = normalize(Fraction(S) / count)
    raw_second = normalize(Fraction(SS) / count)
    variance = normalize(raw_second - Fraction(mean_abs) ** 2)
    return RowSummary(level, normalize(Fraction(S)), normalize(Fraction(SS)), count,
                      mean_abs, raw_second, variance, states=count)
