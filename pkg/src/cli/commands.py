"""One function per subcommand: RunConfig in, Table out."""

from dataclasses import asdict

from ..beta.cases import critical_beta, critical_beta_report, table_audit
from ..bounds.recurrences import bound_diagnostics, bound_sequences, growth_constants, variance_ratios
from ..enumeration.scalar import Mode
from ..enumeration.tree import enumerate_rows
from ..errors import VerificationError
from ..simulation.breakpoints import breakpoints
from ..simulation.lyapunov import growth_curve, growth_sign_crossing, lyapunov_mc
from ..simulation.sweep import mean_growth_sweep
from .output import Table, echo

ENUMERATE_COLUMNS = ["level", "S", "SS", "mean_abs", "raw_second", "variance"]
SWEEP_COLUMNS = ["beta", "level", "mean_abs", "mode"]
LYAPUNOV_COLUMNS = ["beta", "gamma", "stderr", "growth_factor", "steps", "trials", "rng_seed", "variant"]
BOUNDS_COLUMNS = ["n", "L", "S", "U", "verdict", "lower_ratio", "S_ratio", "upper_ratio", "variance_ratio"]
ROOTS_COLUMNS = ["lower_root", "upper_root", "lower_growth", "upper_growth", "ss_root_growth", "mean_sq_growth"]
AUDIT_COLUMNS = [
    "case", "conditions", "restriction", "printed_formula", "derived_formula", "beta", "satisfiable",
    "witness_a", "witness_b", "brute_sum", "eq_derived_sum", "table_printed_sum", "agree_eq", "agree_table",
]
CROSSING_COLUMNS = [
    "beta_star", "lo", "hi", "tol", "steps", "trials", "rng_seed", "variant", "evaluations", "fibonacci_gamma",
    "critical_beta",
]
BREAKPOINT_COLUMNS = ["beta_star", "level", "exact", "beta_star_exact", "origin_prev", "origin_curr"]


def _poly_text(coeffs):
    terms = [f"{c}*b^{i}" if i else f"{c}" for i, c in enumerate(coeffs) if c != 0]
    return " + ".join(terms) if terms else "0"


def _enumerate(cfg, beta, mode):
    return enumerate_rows(
        cfg.seed_pair, beta, cfg.n_max, mode,
        level_cap=cfg.level_cap, state_cap=cfg.state_cap, workers=cfg.threads,
        chunk_size=cfg.chunk_size, rescale_exponent=cfg.rescale_exponent,
        progress=not cfg.quiet,
    )


def check_rows(summaries):
    """Every level holds 2^level paths and a nonnegative variance."""
    for s in summaries:
        if s.count != 2 ** s.level:
            raise VerificationError(f"level {s.level}: counts sum to {s.count}, expected {2 ** s.level}")
        if s.variance < 0:
            raise VerificationError(f"level {s.level}: negative variance {s.variance}")


def cmd_enumerate(cfg):
    """Exact (or float) row statistics for levels 0..n; exit 4 if a row breaks its invariants."""
    echo(f"Enumerating levels 0..{cfg.n_max} at beta={cfg.beta}, seed={cfg.seed_pair}, mode={cfg.mode}", cfg.quiet)
    summaries = _enumerate(cfg, cfg.beta, Mode(cfg.mode))
    check_rows(summaries)
    echo(f"Row {cfg.n_max}: {summaries[-1].states:,} aggregated states", cfg.quiet)
    records = [{col: getattr(s, col) for col in ENUMERATE_COLUMNS} for s in summaries]
    return Table(ENUMERATE_COLUMNS, records)


def cmd_bounds(cfg):
    """Sandwich L[n] <= S[n] <= U[n] at beta = 1; exit 4 on any failed verdict."""
    summaries = _enumerate(cfg, 1, Mode.EXACT)
    S = [s.S for s in summaries]
    initials = cfg.initials if cfg.initials is not None else tuple(S[:3])
    bounds = bound_sequences(*initials, cfg.n_max)
    checks = bound_diagnostics(bounds, S)
    ratios = [None] + variance_ratios(summaries)
    records = [{**asdict(c), "variance_ratio": ratios[c.n]} for c in checks]

    failed = sum(not c.verdict for c in checks)
    echo(f"Sandwich verdicts: {len(checks) - failed} pass, {failed} fail", cfg.quiet)
    constants = growth_constants(cfg.tolerance, cfg.newton_steps)
    if ratios[-1] is not None:
        echo(f"Variance ratio at n={cfg.n_max}: {ratios[-1]:.6f} "
             f"(mean-square growth {constants.mean_sq_growth:.6f})", cfg.quiet)
    extras = {"mean_sq_growth": constants.mean_sq_growth, "ss_root_growth": constants.ss_root_growth}
    return Table(BOUNDS_COLUMNS, records, exit_code=4 if failed else 0, extras=extras)


def cmd_roots(cfg):
    """Dominant roots of the three characteristic polynomials."""
    constants = growth_constants(cfg.tolerance, cfg.newton_steps)
    return Table(ROOTS_COLUMNS, [asdict(constants)], flat=True)


def cmd_beta_audit(cfg):
    """Printed vs equation-derived sum for every table row at cfg.beta, plus the row-6 threshold check."""
    echo(f"Auditing the six half-tree cases at beta={cfg.beta}", cfg.quiet)
    rows = table_audit(cfg.beta, cfg.trials, cfg.rng_seed)
    for row in rows:
        if row.satisfiable and not row.agree_table:
            echo(f"  row {row.case}: printed {row.table_printed_sum} != derived {row.eq_derived_sum} "
                 f"at (a, b) = ({row.witness_a}, {row.witness_b})", cfg.quiet)

    report = critical_beta_report(trials=cfg.trials, rng_seed=cfg.rng_seed)
    echo(f"Row 6 at beta={report.below_beta}: witness {report.below_witness}; "
         f"at beta={report.above_beta}: {'satisfiable' if report.above_satisfiable else 'no witness'} "
         f"(threshold {report.value:.6f})", cfg.quiet)
    return Table(AUDIT_COLUMNS, [asdict(r) for r in rows], extras={"critical_beta": asdict(report)})


def cmd_sweep(cfg):
    """E|x_level| over a beta grid."""
    points = mean_growth_sweep(
        cfg.betas, cfg.level, cfg.mode, cfg.seed_pair, samples=cfg.samples, rng_seed=cfg.rng_seed,
        level_cap=cfg.level_cap, state_cap=cfg.state_cap, progress=not cfg.quiet,
    )
    return Table(SWEEP_COLUMNS, [{col: getattr(p, col) for col in SWEEP_COLUMNS} for p in points])


def cmd_lyapunov(cfg):
    """Growth-rate estimates at one beta, or along a grid with --betas."""
    if cfg.betas:
        estimates = growth_curve(cfg.betas, cfg.steps, cfg.trials, cfg.rng_seed, cfg.seed_pair,
                                 cfg.renorm_every, progress=not cfg.quiet, variant=cfg.variant)
    else:
        estimates = [lyapunov_mc(cfg.beta, cfg.steps, cfg.trials, cfg.rng_seed, cfg.seed_pair,
                                 cfg.renorm_every, progress=not cfg.quiet, variant=cfg.variant)]
    for e in estimates:
        echo(f"beta={e.beta:g}: growth factor {e.growth_factor:.6f} (gamma {e.gamma:.6f} +- {e.stderr:.6f})",
             cfg.quiet)
    return Table(LYAPUNOV_COLUMNS, [asdict(e) for e in estimates])


def cmd_crossing(cfg):
    """Bisect for the beta where growth turns into decay."""
    echo(f"Bisecting the {cfg.variant} recurrence on [{cfg.lo}, {cfg.hi}] to width {cfg.tol}", cfg.quiet)
    crossing = growth_sign_crossing(cfg.lo, cfg.hi, cfg.tol, cfg.steps, cfg.trials, cfg.rng_seed,
                                    cfg.seed_pair, cfg.renorm_every, progress=not cfg.quiet,
                                    variant=cfg.variant)
    echo(f"Crossing at beta ~ {crossing.beta_star:.6f}; fibonacci gamma there {crossing.fibonacci_gamma:.6f} "
         f"(1/sqrt(2) = {critical_beta():.6f})", cfg.quiet)
    record = {
        "beta_star": crossing.beta_star, "lo": cfg.lo, "hi": cfg.hi, "tol": cfg.tol, "steps": cfg.steps,
        "trials": cfg.trials, "rng_seed": cfg.rng_seed, "variant": crossing.variant,
        "evaluations": crossing.evaluations, "fibonacci_gamma": crossing.fibonacci_gamma,
        "critical_beta": critical_beta(),
    }
    return Table(CROSSING_COLUMNS, [record], flat=True)


def cmd_breakpoints(cfg):
    """Candidate kinks of S[level](beta)."""
    found = breakpoints(cfg.seed_pair, cfg.level, cfg.beta_max, level_cap=cfg.breakpoint_level_cap)
    records = [
        {
            "beta_star": bp.beta_star,
            "level": bp.level,
            "exact": bp.exact,
            "beta_star_exact": bp.beta_star_exact,
            "origin_prev": _poly_text(bp.origin_prev),
            "origin_curr": _poly_text(bp.origin_curr),
        }
        for bp in found
    ]
    echo(f"{len(records)} breakpoints at level {cfg.level}", cfg.quiet)
    return Table(BREAKPOINT_COLUMNS, records)
