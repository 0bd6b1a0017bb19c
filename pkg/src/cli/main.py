"""randfib command line: parse flags, resolve the config, run one command, write its table."""

import argparse
import sys

from ..errors import RandFibError
from ..simulation.lyapunov import VARIANTS
from . import commands
from .config import COMMANDS, FORMATS, load_config, resolve_config
from .output import banner, echo, write
from .verify import cmd_verify

HANDLERS = {
    "enumerate": commands.cmd_enumerate,
    "bounds": commands.cmd_bounds,
    "roots": commands.cmd_roots,
    "beta-audit": commands.cmd_beta_audit,
    "sweep": commands.cmd_sweep,
    "lyapunov": commands.cmd_lyapunov,
    "crossing": commands.cmd_crossing,
    "breakpoints": commands.cmd_breakpoints,
    "verify": cmd_verify,
}

TITLES = {
    "enumerate": "Sign-Tree Enumeration",
    "bounds": "Row-Sum Bounds",
    "roots": "Growth Constants",
    "beta-audit": "Half-Tree Case Audit",
    "sweep": "Mean Growth Sweep",
    "lyapunov": "Monte Carlo Growth Rate",
    "crossing": "Growth/Decay Crossing",
    "breakpoints": "Row-Sum Breakpoints",
    "verify": "Verification Suites",
}


def _common(parser):
    parser.add_argument('--beta', type=str, help="Multiplier; 'p/q' or decimal (default: 1)")
    parser.add_argument('--seed', type=str, help="Initial pair 'x0,x1' (default: 1,1)")
    parser.add_argument('--rng-seed', type=int, dest='rng_seed', help='Seed for random streams')
    parser.add_argument('--output', type=str, help="Output file; '-' or unset writes to stdout")
    parser.add_argument('--format', type=str, choices=FORMATS, help='Output format')
    parser.add_argument('--threads', type=int, help='Worker threads for row expansion (default: 1)')
    parser.add_argument('--quiet', action='store_true', help='No status lines or progress bars')
    parser.add_argument('--level-cap', type=int, dest='level_cap', help='Deepest level to enumerate')
    parser.add_argument('--state-cap', type=int, dest='state_cap',
                        help='Aggregated states per row before giving up (env: RANDFIB_STATE_CAP)')


def build_parser():
    parser = argparse.ArgumentParser(prog='randfib', description='Random Fibonacci sequence statistics')
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('enumerate', help='Exact row statistics of the sign tree')
    _common(p)
    p.add_argument('--n', type=int, help='Deepest level (default: 3)')
    p.add_argument('--mode', type=str, choices=('exact', 'float'), help='Arithmetic (default: exact)')

    p = sub.add_parser('bounds', help='Lower/upper row-sum recurrences against the tree')
    _common(p)
    p.add_argument('--n', type=int, help='Deepest level (default: 25)')
    p.add_argument('--initials', type=str, help="Override S0,S1,S2 (default: enumerated)")

    p = sub.add_parser('roots', help='Dominant roots of the characteristic polynomials')
    _common(p)
    p.add_argument('--tolerance', type=float, help='Bisection width (default: 1e-12)')

    p = sub.add_parser('beta-audit', help='Six-case half-tree table against brute force')
    _common(p)
    p.add_argument('--trials', type=int, help='Random points per witness search')

    p = sub.add_parser('sweep', help='E|x_level| over a beta grid')
    _common(p)
    p.add_argument('--betas', type=str, help="Grid 'start:stop:step', inclusive (default: 0.1:1.5:0.01)")
    p.add_argument('--level', type=int, help='Level to evaluate (default: 10)')
    p.add_argument('--mode', type=str, choices=('exact', 'mc'), help='exact enumeration or mc sampling')
    p.add_argument('--samples', type=int, help='Samples per beta in mc mode')

    p = sub.add_parser('lyapunov', help='Monte Carlo growth rate')
    _common(p)
    p.add_argument('--steps', type=int, help='Steps per trial')
    p.add_argument('--trials', type=int, help='Independent trials')
    p.add_argument('--renorm-every', type=int, dest='renorm_every', help='Steps between renormalizations')
    p.add_argument('--betas', type=str, help="Estimate along a grid 'start:stop:step' instead")
    p.add_argument('--variant', type=str, choices=VARIANTS, help='Recurrence (default: fibonacci)')

    p = sub.add_parser('crossing', help='Bisect for the growth/decay transition')
    _common(p)
    p.add_argument('--lo', type=float, help='Bracket low end (default: 0.6)')
    p.add_argument('--hi', type=float, help='Bracket high end (default: 0.8)')
    p.add_argument('--tol', type=float, help='Bracket width to stop at')
    p.add_argument('--steps', type=int, help='Steps per trial')
    p.add_argument('--trials', type=int, help='Independent trials')
    p.add_argument('--renorm-every', type=int, dest='renorm_every', help='Steps between renormalizations')
    p.add_argument('--variant', type=str, choices=VARIANTS, help='Recurrence to bisect (default: lagged)')

    p = sub.add_parser('breakpoints', help='Betas where the row sum changes formula')
    _common(p)
    p.add_argument('--level', type=int, help='Level to analyse (default: 10)')
    p.add_argument('--beta-max', type=str, dest='beta_max', help='Only report breakpoints up to this beta')

    p = sub.add_parser('verify', help='Run the property suites')
    _common(p)
    p.add_argument('--suite', type=str, action='append', help='Suite to run; repeatable (default: all)')
    p.add_argument('--trials', type=int, help='Random cases per suite')
    p.add_argument('--n', type=int, help='Deepest level for the sandwich and ss suites')
    p.add_argument('--tolerance', type=float, help='Root tolerance for the roots suite')

    assert set(sub.choices) == set(COMMANDS)
    return parser


def main(argv=None):
    """
    Run one randfib command.

    Args:
        argv: Argument list (sys.argv[1:] if None)

    Returns:
        Exit code: 0 ok, 2 invalid config, 3 resource guard, 4 verification failure
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        cfg = resolve_config(args, load_config())
        banner(TITLES[cfg.command], cfg.quiet)
        table = HANDLERS[cfg.command](cfg)
        write(table, cfg)
    except RandFibError as e:
        echo(f"Error: {e}")
        return e.exit_code

    if table.exit_code:
        echo(f"Finished with failures (exit code {table.exit_code})", cfg.quiet)
    return table.exit_code


if __name__ == "__main__":
    sys.exit(main())
