"""
Run configuration and report writers.

Every report embeds the fully resolved RunConfig (seed included). JSON
reports wrap the result object; CSV reports start with the version tag and a
comment line holding the config.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Iterable, Sequence

from ..constants import DEFAULT_SAMPLES, REPORT_TAG
from ..exceptions import ValidationError
from ..utils.file_ops import dumps_json, load_document, save_text
from ..utils.formatting import format_float, to_jsonable
from ..utils.validation import validate_document

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")


@dataclass(frozen=True)
class RunConfig:
    """
    Resolved settings of one CLI invocation.

    Explicit flags win over ``--config`` file keys, which win over the
    built-in defaults; budget and restarts stay None until a subcommand
    picks its own default. ``params`` holds the family parameters of generate
    and convergence-report, ``options`` the remaining subcommand flags.
    """

    command: str
    input: str | None = None
    input2: str | None = None
    model: str | None = None
    target: str | None = None
    classes: str | None = None
    budget: int | None = None
    samples: int = DEFAULT_SAMPLES
    mesh: float | None = None
    seed: int = 0
    out: str | None = None
    format: str = "json"
    sizes: tuple[int, ...] = ()
    family: str | None = None
    q: int = 2
    eps: float | None = None
    restarts: int | None = None
    method: str | None = None
    params: dict[str, Any] = field(default_factory=dict)
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.format not in FORMATS:
            raise ValidationError(f"Unknown format {self.format!r}, expected one of {FORMATS}")
        optional = (self.budget, self.restarts)
        if self.q < 1 or self.samples < 0 or any(v is not None and v < 1 for v in optional):
            raise ValidationError("budget, q and restarts must be >= 1 and samples >= 0")
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))

    def to_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


CONFIG_KEYS = {f.name for f in fields(RunConfig)} - {"command", "params", "options"}


def _parse_sizes(value: Any) -> tuple[int, ...]:
    if isinstance(value, str):
        return tuple(int(part) for part in value.split(",") if part.strip())
    return tuple(int(n) for n in value)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge parsed arguments with the optional --config document.

    Args:
        args: Namespace from create_parser(); unset flags are None

    Returns:
        RunConfig with every default filled in

    Raises:
        ValidationError: If the config document fails the run_config schema
    """
    values = {key: value for key, value in vars(args).items() if value is not None}
    file_values: dict[str, Any] = {}
    if getattr(args, "config", None):
        document = load_document(Path(args.config)) or {}
        validate_document(document, "run_config")
        file_values = dict(document)
        logger.info("Loaded run config %s", args.config)

    merged: dict[str, Any] = {}
    for key in CONFIG_KEYS:
        if key in values:
            merged[key] = values[key]
        elif key in file_values:
            merged[key] = file_values[key]
    if "sizes" in merged:
        merged["sizes"] = _parse_sizes(merged["sizes"])

    family_keys = getattr(args, "family_keys", ())
    params = {key: values[key] for key in family_keys if key in values}
    params = {**file_values.get("params", {}), **params}
    skipped = CONFIG_KEYS | set(family_keys) | {"command", "config", "verbose", "family_keys", "func"}
    options = {key: value for key, value in values.items() if key not in skipped}
    return RunConfig(args.command, params=params, options=options, **merged)


def json_report(config: RunConfig, kind: str, result: Any) -> str:
    """Report document {report, version, config, result} as indented JSON."""
    return dumps_json({"report": kind, "version": 1, "config": config.to_dict(), "result": result})


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def csv_report(config: RunConfig, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Versioned CSV: tag line, config comment line, header, rows."""
    buffer = io.StringIO()
    buffer.write(REPORT_TAG + "\n")
    buffer.write("# config: " + json.dumps(to_jsonable(config.to_dict()), sort_keys=True) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def emit(text: str, out: str | Path | None) -> None:
    """Write to ``out`` (backup-protected) or to stdout."""
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    save_text(Path(out), text if text.endswith("\n") else text + "\n")
    print(f"✓ Wrote {out}", file=sys.stderr)
