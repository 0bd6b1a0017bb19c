"""Mean |x_n| at a fixed level as a function of beta."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from tqdm import tqdm

from ..enumeration.scalar import Mode, Scalar, SeedPair, as_exact, parse_scalar
from ..enumeration.tree import DEFAULT_LEVEL_CAP, DEFAULT_STATE_CAP, iter_rows, row_stats
from ..errors import InvalidConfigError
from .lyapunov import trial_generator

SWEEP_MODES = ("exact", "mc")


@dataclass(frozen=True)
class SweepPoint:
    beta: Scalar
    level: int
    mean_abs: Scalar
    mode: str
    stderr: Optional[float] = None


def beta_grid(text):
    """
    Parse 'start:stop:step' (inclusive of stop) into exact rationals.

    '0.1:1.5:0.01' gives the 141 values 1/10, 11/100, ..., 3/2.
    """
    parts = str(text).split(":")
    if len(parts) != 3:
        raise InvalidConfigError(f"grid must be 'start:stop:step', got {text!r}")
    start, stop, step = (Fraction(parse_scalar(p)) for p in parts)
    if step <= 0 or stop < start:
        raise InvalidConfigError(f"grid needs step > 0 and stop >= start, got {text!r}")
    count = math.floor((stop - start) / step) + 1
    return [as_exact(start + i * step) for i in range(count)]


def mc_mean_abs(beta, level, samples, generator, seed=SeedPair(1, 1)):
    """Sample mean and standard error of |x| at a level, from `samples` random sign paths."""
    beta = float(beta)
    prev = np.full(samples, float(seed.x0))
    curr = np.full(samples, float(seed.x1))
    if level > 0:
        signs = generator.integers(0, 2, size=(level, samples), dtype=np.int8)
        kicks = (2.0 * signs - 1.0) * beta
        for j in range(level):
            prev, curr = curr, prev + kicks[j] * curr
    values = np.abs(curr)
    stderr = float(np.std(values, ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return float(np.mean(values)), stderr


def mean_growth_sweep(betas, level, mode="exact", seed=SeedPair(1, 1), samples=100_000, rng_seed=42,
                      level_cap=DEFAULT_LEVEL_CAP, state_cap=DEFAULT_STATE_CAP, progress=False):
    """
    E|x_level| for each beta of a grid.

    Args:
        betas: Positive betas; exact mode needs rationals
        level: Row index n
        mode: "exact" (tree enumeration) or "mc" (sampled sign paths)
        seed: SeedPair held by row 0
        samples: Sign paths per beta in mc mode
        rng_seed: Master seed; point i draws from the substream (rng_seed, i)
        level_cap, state_cap: Enumeration guards for exact mode

    Returns:
        List of SweepPoint in grid order
    """
    if mode not in SWEEP_MODES:
        raise InvalidConfigError(f"sweep mode must be one of {SWEEP_MODES}, got {mode!r}")
    if not isinstance(level, int) or level < 0:
        raise InvalidConfigError(f"level must be a nonnegative integer, got {level!r}")
    seed = seed if isinstance(seed, SeedPair) else SeedPair(*seed)

    points = []
    grid = tqdm(list(enumerate(betas)), desc=f"Sweep ({mode})") if progress else enumerate(betas)
    for i, beta in grid:
        if mode == "exact":
            for row in iter_rows(seed, beta, level, Mode.EXACT, level_cap, state_cap):
                pass
            points.append(SweepPoint(row.beta, level, row_stats(row).mean_abs, mode))
        else:
            if samples < 1:
                raise InvalidConfigError(f"samples must be >= 1, got {samples}")
            mean, stderr = mc_mean_abs(beta, level, samples, trial_generator(rng_seed, i), seed)
            points.append(SweepPoint(float(beta), level, mean, mode, stderr))
    return points
