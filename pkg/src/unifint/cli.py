"""``unifint <command> --config <path> [--tol <real>] [--seed <int>] [--out <path>]``."""

import logging
import os
import sys

import click

from .config import COMMANDS, ParseError, SchemaError, parse_config
from .harness import EXIT_SCHEMA, run
from .report import emit_report

_LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging():
    level = os.environ.get("UNIFINT_LOG", "quiet").lower()
    if level not in _LOG_LEVELS:
        click.echo(f"warning: UNIFINT_LOG={level!r} not in {sorted(_LOG_LEVELS)}; using quiet", err=True)
        level = "quiet"
    logging.basicConfig(level=_LOG_LEVELS[level], format="%(levelname)s %(name)s: %(message)s")


def _summary(rec):
    parts = [f"[{rec['index']}] {rec['command']} {rec['status']}"]
    if rec["value_re"] is not None:
        parts.append(f"value={complex(rec['value_re'], rec['value_im']):.12g}")
    if rec["rel_error"] is not None:
        parts.append(f"rel_error={rec['rel_error']:.3e}")
    if rec["method"]:
        parts.append(f"method={rec['method']}")
    return " ".join(parts)


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("command", type=click.Choice(COMMANDS))
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="YAML/JSON run configuration.")
@click.option("--tol", type=float, default=None, help="Override the config tolerance.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--out", default=None, help="Report path stem; writes <out>.jsonl and <out>.csv.")
def main(command, config_path, tol, seed, out):
    """Evaluate Fox H-functions, Srivastava polynomials and the unified
    integral identity, writing one report record per evaluation.

    Exit codes: 0 success, 1 rel_error above tolerance, 2 schema or
    validity-condition failure, 3 numerical non-convergence, 4 invariant
    breach.
    """
    _configure_logging()
    with open(config_path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        config = parse_config(text, command=command)
        if tol is not None:
            if not tol > 0:
                raise SchemaError(["tolerance"], f"must be > 0, got {tol!r}")
            config.tolerance = tol
        if seed is not None:
            config.seed = seed
        if out is not None:
            config.out = out
    except (ParseError, SchemaError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SCHEMA)

    code, records = run(config)
    for rec in records:
        click.echo(_summary(rec))
        for line in rec["diagnostics"]:
            click.echo(f"    {line}")
    paths = emit_report(records, config.out)
    click.echo(f"report: {paths[0]} {paths[1]}")
    sys.exit(code)


if __name__ == "__main__":
    main()
