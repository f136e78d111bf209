"""Result files with provenance: CSV, JSON and rich tables."""

import csv
import io
import json
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

import click
from pydantic import BaseModel, ConfigDict, Field
from rich.console import Console
from rich.table import Table

from traffic_queues import __version__


class OutputFormat(str, Enum):
    JSON = 'json'
    CSV = 'csv'
    TABLE = 'table'


def _plain(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (Fraction, Path)):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


class RunConfig(BaseModel):
    """Everything needed to rerun a command: its path, options and the toolkit version."""

    model_config = ConfigDict(frozen=True)

    command: str
    options: dict[str, Any] = Field(default_factory=dict)
    version: str = __version__

    @classmethod
    def from_context(cls, ctx: click.Context) -> 'RunConfig':
        return cls(command=ctx.command_path, options={k: _plain(v) for k, v in ctx.params.items()})

    def to_json(self) -> str:
        return json.dumps(self.model_dump(), sort_keys=True, separators=(',', ':'))


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text)


def render_csv(header: list[str], rows: list[list[Any]], config: RunConfig) -> str:
    """CSV text preceded by ``# `` provenance lines."""
    buffer = io.StringIO()
    buffer.write(f'# traffic_queues {config.version}\n')
    buffer.write(f'# config: {config.to_json()}\n')
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_csv(header: list[str], rows: list[list[Any]], config: RunConfig, out: Path | None = None) -> None:
    _emit(render_csv(header, rows, config), out)


def render_json(payload: dict[str, Any], config: RunConfig) -> str:
    document = {'version': config.version, 'config': config.model_dump(), **payload}
    return json.dumps(document, indent=2, default=str) + '\n'


def write_json(payload: dict[str, Any], config: RunConfig, out: Path | None = None) -> None:
    _emit(render_json(payload, config), out)


def read_csv_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    """Header and rows of a CSV written by ``write_csv``; provenance lines are skipped."""
    with path.open(newline='') as f:
        rows = [row for row in csv.reader(line for line in f if not line.startswith('#')) if row]
    if not rows:
        raise click.BadParameter(f'{path} has no CSV header')
    return rows[0], rows[1:]


def print_table(title: str, header: list[str], rows: list[list[Any]]) -> None:
    """Render rows as a rich table on stdout."""
    table = Table(title=title)
    for name in header:
        table.add_column(name, justify='right')
    for row in rows:
        table.add_row(*(str(v) for v in row))
    Console().print(table)


def write_rows(
    fmt: OutputFormat,
    title: str,
    header: list[str],
    rows: list[list[Any]],
    config: RunConfig,
    out: Path | None = None,
    payload: dict[str, Any] | None = None,
) -> None:
    """Write tabular results in the requested format; JSON uses ``payload`` when given."""
    if fmt is OutputFormat.TABLE:
        print_table(title, header, rows)
    elif fmt is OutputFormat.JSON:
        if payload is None:
            payload = {'rows': [dict(zip(header, r, strict=True)) for r in rows]}
        write_json(payload, config, out)
    else:
        write_csv(header, rows, config, out)
