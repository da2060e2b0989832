"""Coherent systems: paths, cuts, reliability and importance measures

-- USAGE: coherent --help
- COHERENT_CAP=24 # largest n for algorithms that visit all 2^n states
- COHERENT_FMT=csv # vs. json output
- COHERENT_DIGITS=6 # decimal places in CSV output
^ (default values for environment variables, which you can override)

Exit codes: 0 success, 1 input or usage error, 2 computational error
(enumeration cap, quadrature, equilibrium, normalization).
"""
import csv
import io
import json
import math
import sys
import typing as T
import warnings
from contextlib import contextmanager

import click

from . import files
from .errors import ComputationError, InputError, SchemaError
from .lifetime import (
    TOLERANCE,
    LifetimeModel,
    birnbaum_lifetime_all,
    bp_instant_all,
    bp_interval_all,
    bp_total_all,
    system_density,
    system_survival,
)
from .modular import decompose, module_report
from .reliability import ImportanceReport, birnbaum_all, reliability
from .structural import MEASURES, structural_report
from .structure import SetFamily, StructureFunction, minimal_cuts, minimal_paths
from .voting import READINGS, VERIFY_TOLERANCE, simulate, solve, verify_equilibrium, vgi

FORMATS = ("csv", "json")
LIFETIME_MEASURES = ("total", "interval", "instant", "birnbaum", "survival", "density")

Scalars = T.Sequence[T.Tuple[str, T.Union[int, float]]]


### Output


def _number(value: float) -> str:
    """17 significant digits, locale-independent; non-finite values become null"""
    return format(value, ".17g") if math.isfinite(value) else "null"


def _fixed(value: T.Union[int, float], digits: int) -> str:
    if isinstance(value, int):
        return str(value)
    return f"{value:.{digits}f}"


def _csv(header: T.Sequence[str], rows: T.Iterable[T.Sequence[T.Any]]) -> str:
    """rows with minimal quoting, so labels may hold commas and quotes"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def emit_report(report: ImportanceReport, fmt: str = "csv", digits: int = 6) -> str:
    """CSV (component,value) or compact JSON text for one importance report"""
    if len(report) == 0:
        raise InputError(f"{report.measure}: nothing to report")
    if fmt == "json":
        rows = ",".join(
            f'{{"component":{c},"value":{_number(v)}}}' for c, v in zip(report.components, report.values)
        )
        norm = "null" if report.normalization is None else _number(report.normalization)
        return f'{{"measure":{json.dumps(report.measure)},"values":[{rows}],"normalization":{norm}}}\n'
    table = ((c, _fixed(v, digits)) for c, v in zip(report.components, report.values))
    return _csv(("component", "value"), table)


def emit_family(family: SetFamily, fmt: str = "csv") -> str:
    """one row per set: set_index,members..."""
    ordered = [sorted(s) for s in family]
    if fmt == "json":
        return json.dumps({"sets": ordered}, separators=(",", ":")) + "\n"
    return _csv(("set_index", "members"), ([k, *s] for k, s in enumerate(ordered, start=1)))


def emit_scalars(pairs: Scalars, fmt: str = "csv", digits: int = 6) -> str:
    """named values as measure,value rows (or one JSON object)"""
    if fmt == "json":
        body = ",".join(
            f"{json.dumps(name)}:{value if isinstance(value, int) else _number(value)}"
            for name, value in pairs
        )
        return f"{{{body}}}\n"
    return _csv(("measure", "value"), ((name, _fixed(value, digits)) for name, value in pairs))


### Click plumbing


@contextmanager
def warnings_appended():
    """prints all warnings (yellow, stderr) at the end of output

    e.g. with warnings_appended(): logic()
    """
    with warnings.catch_warnings(record=True) as group:
        warnings.simplefilter("always")
        try:
            yield  # runs the CLI logic
        finally:
            for warning in group:
                click.secho(f"Warning: {warning.message}", fg="yellow", file=sys.stderr)


@contextmanager
def exit_codes():
    """library errors as red messages and exit codes 1 (input) or 2 (computation)"""
    try:
        with warnings_appended():
            yield
    except InputError as err:
        click.secho(f"Error: {err}", fg="red", file=sys.stderr)
        sys.exit(1)
    except ComputationError as err:
        click.secho(f"Error: {err}", fg="red", file=sys.stderr)
        sys.exit(2)


class CoherentGroup(click.Group):
    """click group whose usage errors exit with 1 instead of 2"""

    def main(self, *args, **kwargs):  # pylint: disable=arguments-differ
        kwargs["standalone_mode"] = False
        try:
            return super().main(*args, **kwargs)
        except click.ClickException as err:
            err.show()
            sys.exit(1)
        except click.Abort:
            click.secho("Aborted!", fg="red", file=sys.stderr)
            sys.exit(1)


def _floats(_ctx, _param, value: T.Optional[str]) -> T.Optional[T.List[float]]:
    if value is None:
        return None
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError as err:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}") from err


def _ints(_ctx, _param, value: T.Optional[str]) -> T.Optional[T.List[int]]:
    if value is None:
        return None
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError as err:
        raise click.BadParameter(f"expected comma-separated component ids, got {value!r}") from err


def _system(path: str) -> StructureFunction:
    return files.parse_system(files.load(path), where=path)


def _lifetimes(path: str) -> LifetimeModel:
    return files.parse_lifetimes(files.load(path), where=path)


def _reliabilities(p: T.Optional[T.List[float]], p_file: T.Optional[str]) -> T.List[float]:
    if (p is None) == (p_file is None):
        raise click.UsageError("give exactly one of --p or --p-file")
    if p is not None:
        return p
    doc = files.load(T.cast(str, p_file))
    if not isinstance(doc, list) or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in doc):
        raise SchemaError(str(p_file), "expected a JSON list of reliabilities")
    return [float(v) for v in doc]


def _emit(text: str) -> None:
    click.echo(text, nl=False)


_CLI_DEFAULTS = dict(
    default_map=dict(
        structural={"measure": "birnbaum"},
        lifetime={"measure": "total"},
        vgi={"reading": "expectation"},
    ),
)

_existing = click.Path(exists=True, dir_okay=False)
system_option = click.option("--system", "system_file", type=_existing, required=True, help="system JSON")
format_option = click.option(
    "--format", "fmt", type=click.Choice(FORMATS), envvar="COHERENT_FMT", default="csv", show_default=True
)
digits_option = click.option(
    "--digits", type=click.IntRange(0, 17), envvar="COHERENT_DIGITS", default=6, show_default=True
)
p_options = (
    click.option("--p", "p", callback=_floats, help="reliabilities, e.g. 0.95,0.99,0.96"),
    click.option("--p-file", type=_existing, help="JSON list of reliabilities"),
)
tolerance_option = click.option("--tolerance", type=float, default=TOLERANCE, show_default=True)


def _with(*decorators):
    def apply(func):
        for decorator in reversed(decorators):
            func = decorator(func)
        return func

    return apply


@click.group(cls=CoherentGroup, context_settings=_CLI_DEFAULTS)
def cli():
    """Importance measures for coherent binary systems

    Components are numbered 1..n. Algorithms that visit all 2^n states
    refuse n above COHERENT_CAP (default 24).
    """


@cli.command()
@_with(system_option, format_option)
def paths(system_file: str, fmt: str):
    """Lists minimal path sets (size, then lexicographic order)"""
    with exit_codes():
        _emit(emit_family(minimal_paths(_system(system_file)), fmt))


@cli.command()
@_with(system_option, format_option)
def cuts(system_file: str, fmt: str):
    """Lists minimal cut sets (size, then lexicographic order)"""
    with exit_codes():
        _emit(emit_family(minimal_cuts(_system(system_file)), fmt))


@cli.command(name="reliability")
@_with(system_option, *p_options, format_option, digits_option)
def reliability_command(system_file: str, p, p_file, fmt: str, digits: int):
    """Prints h(p), the probability that the system works"""
    with exit_codes():
        h = reliability(_system(system_file), _reliabilities(p, p_file))
        _emit(emit_scalars([("reliability", h)], fmt, digits))


@cli.command()
@_with(system_option, *p_options, format_option, digits_option)
def birnbaum(system_file: str, p, p_file, fmt: str, digits: int):
    """Prints Birnbaum importance h(1_i, p) - h(0_i, p) per component"""
    with exit_codes():
        report = birnbaum_all(_system(system_file), _reliabilities(p, p_file))
        _emit(emit_report(report, fmt, digits))


@cli.command()
@_with(system_option, format_option, digits_option)
@click.option("--measure", type=click.Choice(MEASURES))
def structural(system_file: str, fmt: str, digits: int, measure: str):
    """Prints a structural importance (no reliabilities needed)"""
    with exit_codes():
        _emit(emit_report(structural_report(_system(system_file), measure), fmt, digits))


@cli.command()
@_with(system_option, format_option, digits_option, tolerance_option)
@click.option("--lifetimes", "lifetimes_file", type=_existing, required=True, help="lifetimes JSON")
@click.option("--measure", type=click.Choice(LIFETIME_MEASURES))
@click.option("--t", "t", type=float, help="time (all measures but total)")
def lifetime(system_file: str, fmt: str, digits: int, tolerance: float, lifetimes_file: str, measure: str, t):
    """Prints Barlow-Proschan / Birnbaum lifetime importance, or Q(t) and f(t)"""
    if measure != "total" and t is None:
        raise click.UsageError(f"--measure {measure} needs --t")
    with exit_codes():
        phi, model = _system(system_file), _lifetimes(lifetimes_file)
        if measure == "survival":
            _emit(emit_scalars([("survival", system_survival(phi, model, t))], fmt, digits))
        elif measure == "density":
            _emit(emit_scalars([("density", system_density(phi, model, t))], fmt, digits))
        else:
            reports = {
                "total": lambda: bp_total_all(phi, model, tolerance),
                "interval": lambda: bp_interval_all(phi, model, t, tolerance),
                "instant": lambda: bp_instant_all(phi, model, t),
                "birnbaum": lambda: birnbaum_lifetime_all(phi, model, t),
            }
            _emit(emit_report(reports[measure](), fmt, digits))


@cli.command()
@_with(system_option, *p_options, format_option, digits_option, tolerance_option)
@click.option("--module", "members", callback=_ints, required=True, help="module components, e.g. 3,4,5")
@click.option("--lifetimes", "lifetimes_file", type=_existing, help="lifetimes JSON (instead of --p)")
def module(system_file: str, p, p_file, fmt: str, digits: int, tolerance: float, members, lifetimes_file):
    """Prints module importance of each member: chain-rule Birnbaum at p, or Barlow-Proschan"""
    if (p is None and p_file is None) == (lifetimes_file is None):
        raise click.UsageError("give --p/--p-file or --lifetimes")
    with exit_codes():
        dec = decompose(_system(system_file), members)
        if lifetimes_file is not None:
            report = module_report(dec, lifetimes=_lifetimes(lifetimes_file), tolerance=tolerance)
        else:
            report = module_report(dec, p=_reliabilities(p, p_file))
        _emit(emit_report(report, fmt, digits))


game_option = click.option("--game", "game_file", type=_existing, required=True, help="game JSON")


@cli.command(name="vgi")
@_with(game_option, format_option, digits_option)
@click.option("--reading", type=click.Choice(READINGS))
def vgi_command(game_file: str, fmt: str, digits: int, reading: str):
    """Prints the Voting Game Importance of every player"""
    with exit_codes():
        game = files.parse_game(files.load(game_file), where=game_file)
        shares = vgi(game, reading=reading)
        report = ImportanceReport(f"vgi-{reading}", shares.values, normalization=sum(shares.raw))
        _emit(emit_report(report, fmt, digits))


@cli.command()
@_with(game_option, format_option, digits_option)
@click.option("--trials", type=click.IntRange(min=1), help="also simulate this many rollouts")
@click.option("--seed", type=int, default=None, help="seed of the simulation stream")
@click.option(
    "--tolerance",
    type=click.FloatRange(min=0),
    default=VERIFY_TOLERANCE,
    show_default=True,
    help="largest deviation gain still counted as no violation",
)
def verify(
    game_file: str, fmt: str, digits: int, trials: T.Optional[int], seed: T.Optional[int], tolerance: float
):
    """Checks the solved game against every Markov deviation (and optionally simulates it)"""
    with exit_codes():
        game = files.parse_game(files.load(game_file), where=game_file)
        solution = solve(game)
        check = verify_equilibrium(game, solution, tolerance)
        rows: T.List[T.Tuple[str, T.Union[int, float]]] = [
            ("deviations", check.deviations),
            ("violations", check.violations),
            ("max_violation", check.max_violation),
        ]
        rows.extend((f"value_{name}", float(v)) for name, v in zip(game.players, solution.expected))
        if trials is not None:
            run = simulate(game, solution, trials, seed)
            rows.extend((f"mean_{name}", v) for name, v in zip(game.players, run.mean))
            rows.extend((f"stderr_{name}", v) for name, v in zip(game.players, run.stderr))
        _emit(emit_scalars(rows, fmt, digits))


def main(*args, **kwargs):
    """invokes Click with parameters"""
    cli(*args, **kwargs)

