"""Command-line interface for Hurwitz Correlations"""

import functools
import json
import math
import os
import sys
import time
from typing import Any, Dict, List, Optional

import click
from pydantic import BaseModel, Field

# Add the project root directory to Python path
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.config import get_config_dict
from src.config.config import validate_config
from src.core.class_numbers import (
    form_weight,
    growth_constant,
    growth_profile,
    hurwitz_single,
    reduced_forms,
    sieve_hurwitz,
    sieve_primitive,
)
from src.core.convolution import (
    backward_sum,
    coefficients,
    fit_error_exponent,
    perron_height,
    prefix_series,
    smooth_prediction,
    smooth_sum,
)
from src.core.dirichlet import (
    WEIGHT_FAMILIES,
    get_weight,
    richardson_limit,
    truncated_dirichlet,
)
from src.core.exceptions import HurwitzError
from src.core.identities import SUITES
from src.core.special import calibrate_g32
from src.core.table_store import load_table, save_table, table_checksum
from src.utils.logger import logger, set_level
from src.utils.utils import (
    export_to_csv,
    format_duration,
    geometric_grid,
    json_ready,
    parse_grid,
    save_json,
)

config = get_config_dict()
TOOL_VERSION = config["TOOL_VERSION"]
CSV_COLUMNS = config["CSV_COLUMNS"]
GRID_RATIO = config["GRID_RATIO"]


class ReportDocument(BaseModel):
    """JSON document written by verify, smooth and fit."""
    command: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)
    tool_version: str = TOOL_VERSION
    wall_time: Optional[float] = None


class CommandError(click.ClickException):
    """Usage or range problem; exits with status 2."""
    exit_code = 2


def handle_errors(func):
    """Turn library errors into exit status 2 with the message on stderr."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (HurwitzError, ValueError, OSError) as e:
            logger.error(f"{func.__name__}: {e}")
            raise CommandError(str(e)) from e
    return wrapper


def emit_document(document: ReportDocument, path: Optional[str]) -> None:
    """Write a report to PATH, or to stdout when no path is given."""
    data = document.model_dump(mode="json", exclude_none=True)
    if path is None:
        click.echo(json.dumps(data, indent=2, ensure_ascii=False))
    elif not save_json(data, path):
        raise CommandError(f"could not write report to {path}")


# --------------------- COMMAND GROUP ---------------------
@click.group()
@click.option("--threads", type=click.IntRange(min=1), envvar="HCN_THREADS", default=None,
              help="Worker threads for sieving (default: CPU count).")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default=None, help="Override the configured log level.")
@click.pass_context
def cli(ctx: click.Context, threads: Optional[int], log_level: Optional[str]) -> None:
    """Hurwitz class numbers and their shifted convolution sums."""
    if not validate_config():
        raise CommandError("invalid configuration in src/config/config.py")
    ctx.ensure_object(dict)
    ctx.obj["threads"] = threads
    if log_level:
        set_level(log_level)


# --------------------- SIEVE ---------------------
@cli.command()
@click.option("--limit", type=click.IntRange(min=0), required=True, help="Largest n tabulated.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True, help="Table file.")
@click.pass_context
@handle_errors
def sieve(ctx: click.Context, limit: int, out_path: str) -> None:
    """Tabulate 12*H(n) for n <= LIMIT and save it."""
    start = time.perf_counter()
    table = sieve_hurwitz(limit, ctx.obj["threads"])
    checksum = save_table(table, out_path)
    logger.info(f"sieve finished in {format_duration(time.perf_counter() - start)}")
    for decade, ratio in growth_profile(table):
        logger.info(f"max H(n) / (sqrt(n) (1 + log n)) over n <= {decade}: {ratio:.6f}")
    click.echo(f"Wrote table of 12*H(n), n <= {limit}, to {out_path} (sha256 {checksum})")
    if limit >= 1:
        click.echo(f"Growth constant C = {growth_constant(table):.6f}")


# --------------------- VALUE ---------------------
@cli.command()
@click.argument("n", type=click.IntRange(min=0))
@click.option("--table", "table_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--forms", is_flag=True, help="List the reduced forms of discriminant -N.")
@handle_errors
def value(n: int, table_path: Optional[str], forms: bool) -> None:
    """Print H(N) exactly."""
    if table_path is not None:
        table = load_table(table_path)
        result = table.hurwitz(n)
    else:
        result = hurwitz_single(n)
    click.echo(str(result))
    if forms:
        for a, b, c in reduced_forms(n):
            click.echo(f"  ({a}, {b}, {c})  weight {form_weight(a, b, c)}/12")


# --------------------- SUM ---------------------
@cli.command("sum")
@click.option("--ell", type=click.IntRange(min=1), required=True, help="Shift.")
@click.option("--limit", type=click.IntRange(min=1), required=True, help="Largest X.")
@click.option("--table", "table_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--grid", "grid_spec", default=None, help="geometric:START:RATIO:COUNT")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
@click.option("--backward", is_flag=True,
              help="Sum H(n) H(n-ell) over ell <= n <= X, including the H(0) term.")
@click.option("--timing", is_flag=True, help="Report wall time on stderr.")
@handle_errors
def sum_command(ell: int, limit: int, table_path: str, grid_spec: Optional[str],
                csv_path: Optional[str], backward: bool, timing: bool) -> None:
    """Exact S_ell(X) with main and secondary terms, as CSV."""
    start = time.perf_counter()
    grid = parse_grid(grid_spec) if grid_spec else [limit]
    if grid[-1] > limit:
        raise CommandError(f"grid reaches {grid[-1]} beyond --limit {limit}")
    table = load_table(table_path)
    if backward:
        columns = CSV_COLUMNS[:3]
        rows = []
        for X in grid:
            total = backward_sum(ell, X, table, include_zero=True)
            rows.append(dict(zip(columns, [X, total.numerator, total.denominator])))
    else:
        columns = CSV_COLUMNS
        rows = prefix_series(ell, grid, table).rows()
    if not export_to_csv(rows, csv_path, columns):
        raise CommandError(f"could not write CSV to {csv_path}")
    if timing:
        click.echo(f"wall time {format_duration(time.perf_counter() - start)}", err=True)


# --------------------- SMOOTH ---------------------
@cli.command()
@click.option("--ell", type=click.IntRange(min=1), required=True, help="Shift.")
@click.option("--scale", type=click.FloatRange(min=0, min_open=True), required=True, help="Scale X.")
@click.option("--table", "table_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--weight", "family", type=click.Choice(sorted(WEIGHT_FAMILIES)),
              default=config["SMOOTH_WEIGHT_FAMILY"], show_default=True)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
@click.option("--timing", is_flag=True, help="Record wall time in the report.")
@handle_errors
def smooth(ell: int, scale: float, table_path: str, family: str,
           json_path: Optional[str], timing: bool) -> None:
    """Smoothed convolution sum against its residue prediction."""
    start = time.perf_counter()
    weight = get_weight(family)
    total = smooth_sum(ell, scale, load_table(table_path), weight)
    summary: Dict[str, Any] = {"smooth_sum": total}
    if weight.mellin is not None:
        predicted = smooth_prediction(ell, scale, weight)
        residual = total - predicted
        summary.update(prediction=predicted, residual=residual,
                       residual_over_x_1_1=residual / scale ** 1.1,
                       residual_over_x_1_5=residual / scale ** 1.5)
    document = ReportDocument(
        command="smooth",
        parameters={"ell": ell, "scale": scale, "weight": family,
                    "table_sha256": table_checksum(table_path)},
        summary=summary,
        wall_time=time.perf_counter() - start if timing else None)
    emit_document(document, json_path)


# --------------------- VERIFY ---------------------
@cli.command()
@click.option("--suite", type=click.Choice(sorted(SUITES)), required=True)
@click.option("--limit", type=click.IntRange(min=1), required=True, help="Range of the suite.")
@click.option("--table", "table_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
@click.option("--timing", is_flag=True, help="Record wall time in the report.")
@click.pass_context
@handle_errors
def verify(ctx: click.Context, suite: str, limit: int, table_path: Optional[str],
           json_path: Optional[str], timing: bool) -> None:
    """Run an identity suite; exit 1 if any check fails."""
    start = time.perf_counter()
    runner, kind = SUITES[suite]
    parameters: Dict[str, Any] = {"suite": suite, "limit": limit}
    if kind == "hurwitz":
        if table_path is None:
            raise CommandError(f"suite {suite} needs --table")
        parameters["table_sha256"] = table_checksum(table_path)
        report = runner(limit, load_table(table_path))
    elif kind == "primitive":
        report = runner(limit, sieve_primitive(limit, ctx.obj["threads"]))
    else:
        report = runner(limit)

    document = ReportDocument(
        command="verify",
        parameters=parameters,
        rows=[report.model_dump(mode="json")],
        summary={"passed": report.passed, "checked": report.checked, "failures": report.failures},
        wall_time=time.perf_counter() - start if timing else None)
    emit_document(document, json_path)
    if not report.passed:
        ctx.exit(1)


# --------------------- FIT ---------------------
@cli.command()
@click.option("--ell", type=click.IntRange(min=1), required=True, help="Shift.")
@click.option("--table", "table_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--subtract-secondary", is_flag=True, help="Also remove the X^{3/2} term.")
@click.option("--grid", "grid_spec", default=None, help="geometric:START:RATIO:COUNT")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
@handle_errors
def fit(ell: int, table_path: str, subtract_secondary: bool, grid_spec: Optional[str],
        json_path: Optional[str]) -> None:
    """Fit the growth exponent of S_ell(X) minus its asymptotic terms."""
    table = load_table(table_path)
    if grid_spec:
        grid = parse_grid(grid_spec)
    else:
        # two decades ending at the largest X the table supports
        top = table.limit - ell
        count = 9
        grid = geometric_grid(max(1, math.floor(top / GRID_RATIO ** (count - 1))), GRID_RATIO, count)
        grid = [X for X in grid if X <= top]
    slope = fit_error_exponent(ell, grid, table, subtract_secondary)
    coeff = coefficients(ell)
    document = ReportDocument(
        command="fit",
        parameters={"ell": ell, "subtract_secondary": subtract_secondary, "grid": grid,
                    "table_sha256": table_checksum(table_path)},
        summary={"slope": slope, "c2": str(coeff.c2), "c1": str(coeff.c1),
                 "perron_height": perron_height(ell, grid[-1])})
    emit_document(document, json_path)


# --------------------- DIRICHLET ---------------------
def parse_complex(ctx: click.Context, param: click.Parameter, value: str) -> complex:
    try:
        return complex(value.replace(" ", ""))
    except ValueError:
        raise click.BadParameter(f"{value!r} is not a complex number, e.g. 2+3j")


@cli.command()
@click.option("--ell", type=click.IntRange(min=1), required=True, help="Shift.")
@click.option("--s", "s", required=True, callback=parse_complex, help="Complex point, Re s > 3/2.")
@click.option("--terms", type=click.IntRange(min=4), required=True, help="Terms N of the partial sum.")
@click.option("--table", "table_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
@handle_errors
def dirichlet(ell: int, s: complex, terms: int, table_path: str, json_path: Optional[str]) -> None:
    """Truncated D_ell(s) with its tail bound and an extrapolated limit."""
    table = load_table(table_path)
    truncated = truncated_dirichlet(ell, s, terms, table)
    # second truncation for the extrapolation sits at a quarter of the terms
    limit = richardson_limit(ell, s, terms // 4, terms, table)
    document = ReportDocument(
        command="dirichlet",
        parameters={"ell": ell, "s": json_ready(s), "terms": terms,
                    "table_sha256": table_checksum(table_path)},
        summary={"partial_sum": json_ready(truncated.value), "tail_bound": truncated.tail_bound,
                 "extrapolated": json_ready(limit)})
    emit_document(document, json_path)


# --------------------- ENVELOPE ---------------------
@cli.command()
@click.option("--sigma", type=click.FloatRange(min=0.5, min_open=True), default=2.0, show_default=True)
@click.option("--heights", default="5,10,20", show_default=True, help="Comma-separated |Im s| values.")
@click.option("--n1", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--n2", type=click.IntRange(min=2), default=2, show_default=True)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
@handle_errors
def envelope(sigma: float, heights: str, n1: int, n2: int, json_path: Optional[str]) -> None:
    """Calibrate the G_{3/2} growth envelope constant K along vertical lines."""
    try:
        samples = [float(t) for t in heights.split(",")]
    except ValueError:
        raise CommandError(f"bad --heights {heights!r}, expected numbers separated by commas")
    calibration = calibrate_g32(sigma, samples, n1, n2)
    constants = [k for _, k in calibration]
    document = ReportDocument(
        command="envelope",
        parameters={"sigma": sigma, "n1": n1, "n2": n2, "heights": samples},
        rows=[{"height": t, "K": k} for t, k in calibration],
        summary={"max_K": max(constants),
                 "non_increasing": all(a >= b for a, b in zip(constants, constants[1:]))})
    emit_document(document, json_path)


if __name__ == "__main__":
    cli()
