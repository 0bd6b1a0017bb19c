"""Property suites run by `randfib verify`.

Each suite returns (passed, failed) counts; failures are collected, never raised,
so one report covers every suite.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from tqdm import tqdm

from ..beta import cases
from ..bounds import polyroots
from ..bounds.recurrences import bound_sequences, growth_constants, lemma1_check, ss_sequence
from ..enumeration.scalar import Mode, SeedPair, normalize
from ..enumeration.tree import brute_force_leaves, enumerate_rows, summarize_leaves
from ..errors import VerificationError
from .output import Table, echo

VERIFY_COLUMNS = ["suite", "passed", "failed", "verdict"]
ORACLE_BETAS = (1, Fraction(1, 2), 2)
ORACLE_SEEDS = (SeedPair(1, 1), SeedPair(0, 1))


@dataclass
class SuiteResult:
    suite: str
    passed: int = 0
    failed: int = 0

    def record(self, ok):
        if ok:
            self.passed += 1
        else:
            self.failed += 1


def _rng(rng_seed, suite_index):
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(rng_seed, spawn_key=(suite_index,))))


def _rationals(rng, size, max_num=1000, max_den=60):
    nums = rng.integers(0, max_num + 1, size=size)
    dens = rng.integers(1, max_den + 1, size=size)
    return [normalize(Fraction(int(n), int(d))) for n, d in zip(nums, dens)]


def suite_lemma1(trials, rng_seed, quiet=False, **_):
    """Subtree inequality on random rational triples and on the b2 in {0, a/2, a} grid."""
    result = SuiteResult("lemma1")
    rng = _rng(rng_seed, 0)
    a_vals, gaps, b2_vals = (_rationals(rng, trials) for _ in range(3))
    triples = list(zip(a_vals, [a + g for a, g in zip(a_vals, gaps)], b2_vals))
    for a in _rationals(rng, max(1, trials // 100)):
        for b2 in (0, a / 2, a):
            triples.append((a, a + 1, b2))

    for a, b1, b2 in tqdm(triples, desc="lemma1", disable=quiet):
        try:
            check = lemma1_check(a, b1, b2)
        except VerificationError:
            result.record(False)
            continue
        result.record(check.holds and check.correction <= a)
    return result


def suite_sandwich(n_max, level_cap, state_cap, quiet=False, **_):
    """L[n] <= S[n] <= U[n] for seed (1, 1), beta = 1."""
    result = SuiteResult("sandwich")
    summaries = enumerate_rows(SeedPair(1, 1), 1, n_max, Mode.EXACT, level_cap=level_cap,
                               state_cap=state_cap, progress=not quiet)
    S = [s.S for s in summaries]
    bounds = bound_sequences(S[0], S[1], S[2], n_max)
    for n in range(n_max + 1):
        result.record(bounds.L[n] <= S[n] <= bounds.U[n])
    return result


def suite_ss(n_max, oracle_n_max, level_cap, state_cap, quiet=False, **_):
    """Second-moment recurrence against the tree, beta = 1 to n_max and beta in {1/2, 2} to oracle_n_max."""
    result = SuiteResult("ss")
    runs = [(SeedPair(1, 1), 1, n_max), (SeedPair(2, 3), 1, n_max)]
    runs += [(SeedPair(1, 1), beta, oracle_n_max) for beta in (Fraction(1, 2), 2)]
    for seed, beta, n in runs:
        summaries = enumerate_rows(seed, beta, n, Mode.EXACT, level_cap=level_cap,
                                   state_cap=state_cap, progress=not quiet)
        SS = [s.SS for s in summaries]
        predicted = ss_sequence(SS[0], SS[1], n, beta)
        for actual, expected in zip(SS, predicted):
            result.record(actual == expected)
        # raw second moment at beta = 1 follows the Fibonacci rule exactly
        if beta == 1:
            raw = [s.raw_second for s in summaries]
            for k in range(2, len(raw)):
                result.record(raw[k] == raw[k - 1] + raw[k - 2])
    return result


def suite_cases(trials, rng_seed, quiet=False, **_):
    """Equation-derived case sums equal the brute-force half-tree sums; one case per point."""
    result = SuiteResult("cases")
    rng = _rng(rng_seed, 1)
    a_vals, b_vals = _rationals(rng, trials), _rationals(rng, trials)
    betas = [normalize(Fraction(int(n), int(d))) for n, d in
             zip(rng.integers(1, 300, size=trials), rng.integers(1, 100, size=trials))]
    for a, b, beta in tqdm(list(zip(a_vals, b_vals, betas)), desc="cases", disable=quiet):
        if a == 0 and b == 0:
            b = 1
        report = cases.case_report(a, b, beta)
        matching = [c for c in cases.CASE_IDS if cases.case_conditions_hold(c, a, b, beta)]
        result.record(report.agree_eq and matching == [report.case])

    # the inequality behind the subtree bound: |b - |a - b|| <= a at beta = 1
    for a, b in zip(_rationals(rng, trials), _rationals(rng, trials)):
        result.record(abs(b - abs(a - b)) <= a)
    return result


def _straddle(threshold, count=10, spread=Fraction(1, 4)):
    """count rationals on each side of a threshold, none equal to it."""
    threshold = Fraction(threshold).limit_denominator(10**12)
    offsets = [spread * Fraction(k, count) for k in range(1, count + 1)]
    return [threshold - o for o in offsets if threshold - o > 0] + [threshold + o for o in offsets]


def suite_restrictions(trials, rng_seed, quiet=False, **_):
    """Each restriction holds exactly where the search finds a witness."""
    result = SuiteResult("restrictions")
    half = Fraction(1, 2)
    claims = [
        (1, _straddle(1 / math.sqrt(2)), lambda beta: beta * beta > half),
        (2, _straddle(1) + [Fraction(1)], lambda beta: beta > 1),
        (3, _straddle(1) + [Fraction(1)], lambda beta: beta < 1),
        (6, _straddle(1 / math.sqrt(2)), lambda beta: beta * beta < half),
    ]
    jobs = [(case, beta, predicate) for case, betas, predicate in claims for beta in betas]
    for case, beta, predicate in tqdm(jobs, desc="restrictions", disable=quiet):
        found = cases.case_restriction_satisfiable(case, beta, trials, rng_seed)
        result.record(found.satisfiable == predicate(beta))
    return result


def suite_oracle(oracle_n_max, level_cap, state_cap, quiet=False, **_):
    """Aggregated rows equal the unaggregated 2^n enumeration, exactly."""
    result = SuiteResult("oracle")
    jobs = [(seed, beta) for seed in ORACLE_SEEDS for beta in ORACLE_BETAS]
    for seed, beta in tqdm(jobs, desc="oracle", disable=quiet):
        summaries = enumerate_rows(seed, beta, oracle_n_max, Mode.EXACT, level_cap=level_cap,
                                   state_cap=state_cap)
        for summary in summaries:
            brute = summarize_leaves(brute_force_leaves(seed, beta, summary.level), summary.level)
            result.record(summary == brute)
    return result


def suite_roots(tolerance=polyroots.DEFAULT_TOLERANCE, newton_steps=polyroots.DEFAULT_NEWTON_STEPS, **_):
    """Growth constants and root residuals of the three characteristic polynomials."""
    result = SuiteResult("roots")
    constants = growth_constants(tolerance, newton_steps)
    result.record(abs(constants.lower_growth - 1.12095) <= 1e-5)
    result.record(abs(constants.upper_growth - 1.23375) <= 1e-5)
    result.record(abs(constants.ss_root_growth - (1 + math.sqrt(5))) <= 1e-9)
    for p in (polyroots.LOWER_CUBIC, polyroots.UPPER_CUBIC, polyroots.SS_QUADRATIC):
        for r in polyroots.real_roots(p, tolerance, newton_steps):
            result.record(abs(p(r)) <= p.residual_bound(r))
    return result


SUITES = {
    "lemma1": suite_lemma1,
    "sandwich": suite_sandwich,
    "ss": suite_ss,
    "cases": suite_cases,
    "restrictions": suite_restrictions,
    "oracle": suite_oracle,
    "roots": suite_roots,
}


def cmd_verify(cfg):
    """Run the selected suites; exit code 4 if any case failed."""
    results = []
    for name in cfg.suites:
        echo(f"Running suite {name}...", cfg.quiet)
        result = SUITES[name](
            trials=cfg.trials, rng_seed=cfg.rng_seed, n_max=cfg.n_max, oracle_n_max=min(cfg.oracle_n_max, cfg.n_max),
            level_cap=cfg.level_cap, state_cap=cfg.state_cap, tolerance=cfg.tolerance, newton_steps=cfg.newton_steps,
            quiet=cfg.quiet,
        )
        echo(f"  {result.passed} passed, {result.failed} failed", cfg.quiet)
        results.append(result)

    records = [
        {"suite": r.suite, "passed": r.passed, "failed": r.failed, "verdict": "pass" if r.failed == 0 else "fail"}
        for r in results
    ]
    failed = any(r.failed for r in results)
    return Table(VERIFY_COLUMNS, records, exit_code=4 if failed else 0)
