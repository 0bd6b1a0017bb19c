"""CSV/JSON writers and stderr status lines."""

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

import pandas as pd

from ..enumeration.scalar import format_scalar


@dataclass
class Table:
    """What a command produces: ordered columns, one dict per row, and an exit code."""

    columns: List[str]
    records: List[dict]
    exit_code: int = 0
    flat: bool = False  # JSON: emit the single record's fields at top level
    extras: dict = field(default_factory=dict)  # side results outside the row table


def echo(message, quiet=False):
    """Status line for humans; stdout is reserved for data."""
    if not quiet:
        print(message, file=sys.stderr)


def banner(title, quiet=False):
    echo("=" * 70, quiet)
    echo(f"randfib - {title}", quiet)
    echo("=" * 70, quiet)


def _cell(value):
    """Fractions as 'p/q' strings; everything else unchanged."""
    if isinstance(value, Fraction):
        return format_scalar(value)
    if isinstance(value, (tuple, list)):
        return [_cell(v) for v in value]
    if isinstance(value, dict):
        return {k: _cell(v) for k, v in value.items()}
    return value


def csv_header(cfg):
    config = json.dumps(cfg.header(), sort_keys=True, separators=(",", ":"))
    return f"# randfib-csv {cfg.csv_version}, command={cfg.command}, config={config}\n"


def render(table, cfg):
    """Serialize a Table in the configured format."""
    if cfg.format == "json":
        rows = [{col: _cell(rec.get(col)) for col in table.columns} for rec in table.records]
        if table.flat and len(rows) == 1:
            payload = {"command": cfg.command, "config": cfg.header(), **rows[0]}
        else:
            payload = {"command": cfg.command, "config": cfg.header(), "rows": rows}
        payload.update({key: _cell(value) for key, value in table.extras.items()})
        return json.dumps(payload, indent=2) + "\n"

    frame = pd.DataFrame(
        [[_cell(rec.get(col)) for col in table.columns] for rec in table.records],
        columns=table.columns,
    )
    extras = "".join(
        f"# {key}=" + json.dumps(_cell(value), sort_keys=True, separators=(",", ":")) + "\n"
        for key, value in table.extras.items()
    )
    return csv_header(cfg) + extras + frame.to_csv(index=False, lineterminator="\n")


def write(table, cfg):
    """Write to cfg.output, or stdout when it is unset or '-'."""
    text = render(table, cfg)
    if cfg.output in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(cfg.output, "w") as f:
            f.write(text)
        echo(f"Saved {len(table.records)} rows to {cfg.output}", cfg.quiet)
