"""Monte Carlo estimates of the almost-sure growth rate of |x_n|."""

import math
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from ..enumeration.scalar import SeedPair
from ..errors import InvalidConfigError

LN2 = math.log(2.0)
SIGN_BLOCK = 4096  # steps of signs drawn per generator call

# Which term carries the random +-beta:
#   fibonacci: x_{n+1} = x_{n-1} +- beta x_n   (every step matrix has det -1, so gamma >= 0)
#   lagged:    x_{n+1} = x_n +- beta x_{n-1}   (decays below beta ~ 0.70258, grows above)
VARIANTS = ("fibonacci", "lagged")
CROSSING_VARIANT = "lagged"


@dataclass(frozen=True)
class LyapunovEstimate:
    beta: float
    gamma: float
    stderr: float
    growth_factor: float
    steps: int
    trials: int
    rng_seed: int
    variant: str = "fibonacci"


@dataclass(frozen=True)
class Crossing:
    """Result of a growth/decay bisection."""

    beta_star: float
    lo: float
    hi: float
    variant: str
    evaluations: int
    fibonacci_gamma: float  # gamma of x_{n+1} = x_{n-1} +- beta x_n at beta_star


def trial_generator(rng_seed, trial):
    """Counter-based generator for one trial, derived from (rng_seed, trial) only."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(rng_seed, spawn_key=(trial,))))


def _renormalize(prev, curr, exps):
    """Scale each pair by a power of two so its max-norm lands in [1, 2); exact in binary."""
    _, e = np.frexp(np.maximum(np.abs(prev), np.abs(curr)))
    shift = e.astype(np.int64) - 1
    return np.ldexp(prev, -shift), np.ldexp(curr, -shift), exps + shift


def _check_variant(variant):
    if variant not in VARIANTS:
        raise InvalidConfigError(f"variant must be one of {VARIANTS}, got {variant!r}")


def lyapunov_mc(beta, steps, trials, rng_seed, seed=SeedPair(1, 1), renorm_every=64, progress=False,
                variant="fibonacci"):
    """
    Estimate gamma = lim log|x_n| / n by simulating independent sequences.

    Every trial runs x_{n+1} = x_{n-1} + s beta x_n (or, for the lagged
    variant, x_{n+1} = x_n + s beta x_{n-1}) with fair signs s drawn from
    its own Philox stream. The pair is rescaled by powers of two every
    `renorm_every` steps and the exponents are accumulated, so no trial
    overflows and the result does not depend on the cadence. The log is taken
    once, at the end, of the pair's max-norm.

    Args:
        beta: Multiplier, >= 0
        steps: Sequence length per trial, >= 1
        trials: Number of independent sequences, >= 1
        rng_seed: Master seed
        seed: Starting pair (x0, x1)
        renorm_every: Steps between rescalings
        progress: Show a tqdm bar over sign blocks
        variant: 'fibonacci' or 'lagged'

    Returns:
        LyapunovEstimate
    """
    if steps < 1 or trials < 1:
        raise InvalidConfigError(f"steps and trials must be >= 1, got steps={steps}, trials={trials}")
    if renorm_every < 1:
        raise InvalidConfigError(f"renorm_every must be >= 1, got {renorm_every}")
    _check_variant(variant)
    beta = float(beta)
    if beta < 0 or not math.isfinite(beta):
        raise InvalidConfigError(f"beta must be a finite nonnegative number, got {beta}")
    seed = seed if isinstance(seed, SeedPair) else SeedPair(*seed)
    lagged = variant == "lagged"
    if lagged and beta == 0 and seed.x1 == 0:
        raise InvalidConfigError("the lagged recurrence at beta = 0 sends a seed with x1 = 0 to the zero pair")

    generators = [trial_generator(rng_seed, t) for t in range(trials)]
    prev = np.full(trials, float(seed.x0))
    curr = np.full(trials, float(seed.x1))
    exps = np.zeros(trials, dtype=np.int64)

    blocks = range(0, steps, SIGN_BLOCK)
    if progress:
        blocks = tqdm(blocks, desc=f"beta={beta:g}", leave=False)
    for start in blocks:
        size = min(SIGN_BLOCK, steps - start)
        signs = np.stack([g.integers(0, 2, size=size, dtype=np.int8) for g in generators], axis=1)
        kicks = (2.0 * signs - 1.0) * beta
        for j in range(size):
            if lagged:
                prev, curr = curr, curr + kicks[j] * prev
            else:
                prev, curr = curr, prev + kicks[j] * curr
            if (start + j + 1) % renorm_every == 0:
                prev, curr, exps = _renormalize(prev, curr, exps)

    prev, curr, exps = _renormalize(prev, curr, exps)
    logs = (exps * LN2 + np.log(np.maximum(np.abs(prev), np.abs(curr)))) / steps
    gamma = float(np.mean(logs))
    stderr = float(np.std(logs, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return LyapunovEstimate(
        beta=beta,
        gamma=gamma,
        stderr=stderr,
        growth_factor=math.exp(gamma),
        steps=steps,
        trials=trials,
        rng_seed=rng_seed,
        variant=variant,
    )


def growth_curve(betas, steps, trials, rng_seed, seed=SeedPair(1, 1), renorm_every=64, progress=False,
                 variant="fibonacci"):
    """One LyapunovEstimate per beta, all with the same seeds (common random numbers)."""
    grid = tqdm(betas, desc="Growth curve") if progress else betas
    return [lyapunov_mc(beta, steps, trials, rng_seed, seed, renorm_every, variant=variant) for beta in grid]


def growth_sign_crossing(beta_lo, beta_hi, tol, steps, trials, rng_seed, seed=SeedPair(1, 1),
                         renorm_every=64, progress=False, variant=CROSSING_VARIANT):
    """
    Bisect for the beta where the estimated gamma changes sign.

    Every evaluation reuses the same trial streams, so gamma(beta) is a
    deterministic function along the bisection. The fibonacci variant never
    decays, so the default is the lagged recurrence; the fibonacci exponent at
    the located beta is reported alongside.

    Returns:
        Crossing, with beta_star the midpoint of a final bracket of width <= tol

    Raises:
        InvalidConfigError: if gamma has the same sign at both ends
    """
    beta_lo, beta_hi = float(beta_lo), float(beta_hi)
    if not beta_lo < beta_hi:
        raise InvalidConfigError(f"need beta_lo < beta_hi, got [{beta_lo}, {beta_hi}]")
    if tol <= 0:
        raise InvalidConfigError(f"tol must be positive, got {tol}")
    _check_variant(variant)
    evaluations = 0

    def gamma(beta):
        nonlocal evaluations
        evaluations += 1
        return lyapunov_mc(beta, steps, trials, rng_seed, seed, renorm_every, variant=variant).gamma

    g_lo, g_hi = gamma(beta_lo), gamma(beta_hi)
    if (g_lo < 0) == (g_hi < 0):
        raise InvalidConfigError(
            f"{variant} gamma has the same sign at both ends: "
            f"gamma({beta_lo})={g_lo:.6f}, gamma({beta_hi})={g_hi:.6f}"
        )

    lo, hi = beta_lo, beta_hi
    iterations = max(0, math.ceil(math.log2((hi - lo) / tol)))
    bar = tqdm(total=iterations, desc="Bisecting", leave=False) if progress else None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (gamma(mid) < 0) == (g_lo < 0):
            lo = mid
        else:
            hi = mid
        if bar is not None:
            bar.update(1)
    if bar is not None:
        bar.close()

    beta_star = 0.5 * (lo + hi)
    return Crossing(
        beta_star=beta_star,
        lo=lo,
        hi=hi,
        variant=variant,
        evaluations=evaluations,
        fibonacci_gamma=lyapunov_mc(beta_star, steps, trials, rng_seed, seed, renorm_every).gamma,
    )
