"""Run configuration: shipped YAML defaults, environment override and flags."""

import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

import yaml

from ..enumeration.scalar import Mode, SeedPair, format_scalar, parse_scalar
from ..errors import InvalidConfigError
from ..simulation.lyapunov import VARIANTS

CONFIG_PATH = Path(__file__).resolve().parent.parent.parent / "config" / "config.yaml"
STATE_CAP_ENV = "RANDFIB_STATE_CAP"

COMMANDS = ("enumerate", "bounds", "roots", "beta-audit", "sweep", "lyapunov", "crossing", "breakpoints", "verify")
FORMATS = ("csv", "json")

# Arithmetic each command parses beta with
_FLOAT_COMMANDS = ("lyapunov", "crossing")


def load_config(config_path=CONFIG_PATH):
    """Load configuration from YAML file."""
    with open(config_path, 'r') as f:
        config = yaml.safe_load(f)
    return config


@dataclass
class RunConfig:
    """Fully resolved flags of one invocation."""

    command: str
    beta: object = 1
    seed_pair: SeedPair = field(default_factory=SeedPair)
    n_max: int = 3
    mode: str = "exact"
    rng_seed: int = 42
    output: Optional[str] = None  # None writes to stdout
    format: str = "csv"
    threads: int = 1
    quiet: bool = False
    level_cap: int = 26
    state_cap: int = 5_000_000
    chunk_size: int = 50_000
    rescale_exponent: int = 512
    # command-specific
    initials: Optional[Tuple[object, object, object]] = None
    tolerance: float = 1e-12
    newton_steps: int = 3
    trials: int = 200
    steps: int = 100_000
    renorm_every: int = 64
    betas: Optional[List[object]] = None
    level: int = 10
    samples: int = 100_000
    lo: float = 0.6
    hi: float = 0.8
    tol: float = 0.005
    variant: str = "fibonacci"
    beta_max: Optional[object] = None
    breakpoint_level_cap: int = 12
    oracle_n_max: int = 14
    suites: Optional[List[str]] = None
    csv_version: str = "v1"

    def header(self):
        """Flat, JSON-friendly view of the config for output headers."""
        out = {}
        for key, value in asdict(self).items():
            if key == "seed_pair":
                value = [format_scalar(self.seed_pair.x0), format_scalar(self.seed_pair.x1)]
            elif isinstance(value, (list, tuple)):
                value = [format_scalar(v) if not isinstance(v, str) else v for v in value]
            elif value is not None and not isinstance(value, (bool, int, float, str)):
                value = format_scalar(value)
            out[key] = value
        return out


def _state_cap(cli_value, defaults):
    if cli_value is not None:
        return cli_value
    env = os.environ.get(STATE_CAP_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InvalidConfigError(f"{STATE_CAP_ENV} must be an integer, got {env!r}") from None
    return defaults["enumeration"]["state_cap"]


def _pick(args, name, default):
    value = getattr(args, name, None)
    return default if value is None else value


def resolve_config(args, defaults=None):
    """
    Merge parsed flags over the YAML defaults and validate everything.

    Args:
        args: argparse.Namespace from the CLI parser
        defaults: Loaded config dict (load_config() if None)

    Returns:
        RunConfig
    """
    from ..simulation.sweep import beta_grid

    defaults = defaults if defaults is not None else load_config()
    enum_cfg = defaults["enumeration"]
    sim_cfg = defaults["simulation"]
    command = args.command
    if command not in COMMANDS:
        raise InvalidConfigError(f"unknown command {command!r}")

    mode = _pick(args, "mode", "exact")
    if command == "sweep" and mode not in ("exact", "mc"):
        raise InvalidConfigError(f"sweep mode must be exact or mc, got {mode!r}")
    if command != "sweep" and mode not in (m.value for m in Mode):
        raise InvalidConfigError(f"mode must be exact or float, got {mode!r}")

    arithmetic = Mode.FLOAT if command in _FLOAT_COMMANDS or mode == "float" else Mode.EXACT
    beta = parse_scalar(_pick(args, "beta", "1"), arithmetic)
    if beta < 0 or (beta == 0 and command not in _FLOAT_COMMANDS):
        raise InvalidConfigError(f"beta must be positive, got {beta}")

    seed_text = getattr(args, "seed", None)
    if seed_text is None:
        seed_pair = SeedPair(*(parse_scalar(str(v)) for v in enum_cfg["default_seed"]))
    else:
        seed_pair = SeedPair.parse(seed_text)

    fmt = _pick(args, "format", "json" if command in ("roots", "beta-audit") else defaults["output"]["format"])
    if fmt not in FORMATS:
        raise InvalidConfigError(f"format must be one of {FORMATS}, got {fmt!r}")

    threads = _pick(args, "threads", 1)
    if threads < 1:
        raise InvalidConfigError(f"threads must be >= 1, got {threads}")

    default_trials = {
        "beta-audit": defaults["beta_cases"]["trials"],
        "verify": defaults["verify"]["trials"],
    }.get(command, sim_cfg["trials"])
    default_n = {"bounds": defaults["bounds"]["n_max"], "verify": defaults["verify"]["n_max"]}.get(command, 3)
    default_seed = defaults["beta_cases"]["rng_seed"] if command == "beta-audit" else sim_cfg["rng_seed"]

    cfg = RunConfig(
        command=command,
        beta=beta,
        seed_pair=seed_pair,
        n_max=_pick(args, "n", default_n),
        mode=mode,
        rng_seed=_pick(args, "rng_seed", default_seed),
        output=getattr(args, "output", None),
        format=fmt,
        threads=threads,
        quiet=bool(getattr(args, "quiet", False)),
        level_cap=_pick(args, "level_cap", enum_cfg["level_cap"]),
        state_cap=_state_cap(getattr(args, "state_cap", None), defaults),
        chunk_size=enum_cfg["chunk_size"],
        rescale_exponent=enum_cfg["float_rescale_exponent"],
        tolerance=_pick(args, "tolerance", defaults["polyroots"]["tolerance"]),
        newton_steps=defaults["polyroots"]["newton_steps"],
        trials=_pick(args, "trials", default_trials),
        steps=_pick(args, "steps", sim_cfg["steps"]),
        renorm_every=_pick(args, "renorm_every", sim_cfg["renorm_every"]),
        level=_pick(args, "level", 10),
        samples=_pick(args, "samples", sim_cfg["mc_samples"]),
        lo=_pick(args, "lo", 0.6),
        hi=_pick(args, "hi", 0.8),
        tol=_pick(args, "tol", sim_cfg["crossing_tol"]),
        variant=_pick(args, "variant", sim_cfg["crossing_variant"] if command == "crossing" else sim_cfg["variant"]),
        breakpoint_level_cap=sim_cfg["breakpoint_level_cap"],
        oracle_n_max=defaults["verify"]["oracle_n_max"],
        suites=_pick(args, "suite", None) or list(defaults["verify"]["suites"]),
        csv_version=defaults["output"]["csv_version"],
    )

    initials = getattr(args, "initials", None)
    if initials is not None:
        parts = initials.split(",")
        if len(parts) != 3:
            raise InvalidConfigError(f"initials must be 'S0,S1,S2', got {initials!r}")
        cfg.initials = tuple(parse_scalar(p) for p in parts)

    betas = getattr(args, "betas", None)
    if betas is not None:
        grid = beta_grid(betas)
        cfg.betas = [float(b) for b in grid] if arithmetic is Mode.FLOAT else grid
    elif command == "sweep":
        cfg.betas = beta_grid("0.1:1.5:0.01")

    beta_max = getattr(args, "beta_max", None)
    if beta_max is not None:
        cfg.beta_max = parse_scalar(beta_max)

    _validate(cfg, defaults)
    return cfg


def _validate(cfg, defaults):
    for name in ("n_max", "level", "trials", "steps", "samples", "renorm_every", "newton_steps"):
        value = getattr(cfg, name)
        if not isinstance(value, int) or value < 0:
            raise InvalidConfigError(f"{name} must be a nonnegative integer, got {value!r}")
    if cfg.tolerance <= 0 or cfg.tol <= 0:
        raise InvalidConfigError("tolerances must be positive")
    if cfg.chunk_size < 1 or cfg.rescale_exponent < 1:
        raise InvalidConfigError("chunk_size and float_rescale_exponent must be >= 1")
    if cfg.command in ("lyapunov", "crossing") and (cfg.steps < 1 or cfg.trials < 1):
        raise InvalidConfigError("lyapunov and crossing need steps >= 1 and trials >= 1")
    if cfg.command == "crossing" and not cfg.lo < cfg.hi:
        raise InvalidConfigError(f"need lo < hi, got [{cfg.lo}, {cfg.hi}]")
    if cfg.variant not in VARIANTS:
        raise InvalidConfigError(f"variant must be one of {VARIANTS}, got {cfg.variant!r}")
    known = defaults["verify"]["suites"]
    unknown = [s for s in cfg.suites if s not in known]
    if unknown:
        raise InvalidConfigError(f"unknown verification suites {unknown}; choose from {known}")
