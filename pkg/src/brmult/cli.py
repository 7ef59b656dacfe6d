"""Command-line interface for brmult."""

from __future__ import annotations

import logging
import sys
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any, NoReturn

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from brmult import __version__
from brmult.certificates import CertificateLog
from brmult.config import DEFAULT_BOUNDS, Bounds, FieldSpec
from brmult.errors import (
    BrmultError,
    CandidateNotJointReduction,
    CertificateStatus,
    ExitCode,
    GeneratorExhausted,
    Indeterminate,
    InstanceError,
    NotFiniteColength,
    NotFound,
    PreconditionError,
)
from brmult.icmod.suites import SUITES, run_suite, suite_size
from brmult.icmod.verify import (
    minors_multiplicativity_check,
    mixed_mult_ideals,
    verify_brpolya,
    verify_ideal_case,
    verify_jrn0,
    verify_local_identity,
    verify_prodlength,
    verify_step1,
)
from brmult.instance import InstanceFile, TaskDecl, parse_instance
from brmult.jointred import (
    freeness_and_minimality_check,
    joint_reduction_number,
    jrn_experiment,
    random_candidate,
    verify_determinantal,
)
from brmult.koszul import verify_comparison
from brmult.localring.ideal import MIdeal
from brmult.reports import TheoremReport, rows_to_csv, table_to_csv, table_to_dict, to_json
from brmult.submod import Submodule, colength, exponent_source, module_exponent
from brmult.symprod import (
    BRTable,
    br_table,
    degree_check,
    expected_degree,
    mixed_br_stabilized,
    mu_table,
)

console = Console()
error_console = Console(stderr=True)
logger = logging.getLogger(__name__)

REPORT_HEADER = ["theorem", "instance", "seed", "lhs", "rhs", "equal", "status"]


@dataclass(frozen=True)
class Settings:
    """Global flags shared by every command."""

    seed: int | None = None
    field_spec: FieldSpec | None = None
    bounds: Bounds = DEFAULT_BOUNDS
    window: tuple[int, ...] | None = None
    jobs: int = 1
    output: str = "json"


@dataclass
class Outcome:
    """What a command produced and the exit code it asks for."""

    payload: Any
    code: ExitCode = ExitCode.OK
    csv: str | None = None
    table: Table | None = None


@dataclass
class Job:
    """One task resolved against an instance and the global flags."""

    instance: InstanceFile
    task: TaskDecl
    settings: Settings

    @property
    def seed(self) -> int:
        if self.settings.seed is not None:
            return self.settings.seed
        return self.task.seed if self.task.seed is not None else 0

    @property
    def bounds(self) -> Bounds:
        return self.settings.bounds

    def window(self, default: tuple[int, ...]) -> tuple[int, ...]:
        return self.settings.window or self.task.window or default

    def names(self, count: int | None = None, at_least: int = 1) -> list[str]:
        names = list(self.task.modules) or self.instance.module_names
        if count is not None:
            if len(names) < count:
                raise InstanceError(f"{self.task.command} needs {count} modules, got {len(names)}")
            return names[:count]
        if len(names) < at_least:
            raise InstanceError(
                f"{self.task.command} needs at least {at_least} modules, got {len(names)}"
            )
        return names

    def modules(self, count: int | None = None, at_least: int = 1) -> list[Submodule]:
        return [self.instance.submodule(n) for n in self.names(count, at_least)]

    def ideals(self, count: int) -> list[MIdeal]:
        return [self.instance.ideal(n) for n in self.names(count)]

    def label(self, count: int | None = None, at_least: int = 1) -> str:
        return " ".join(self.names(count, at_least))


def report_outcome(reports: TheoremReport | list[TheoremReport]) -> Outcome:
    batch = reports if isinstance(reports, list) else [reports]
    if any(not r.equal for r in batch):
        code = ExitCode.VERIFICATION_FAILED
    elif any(r.status is not CertificateStatus.CERTIFIED for r in batch):
        code = ExitCode.INDETERMINATE
    else:
        code = ExitCode.OK
    rows = [
        [r.theorem, r.instance, r.seed, r.lhs, r.rhs, r.equal, r.status.value] for r in batch
    ]
    table = Table(show_header=True, header_style="bold")
    for column in REPORT_HEADER:
        table.add_column(column)
    for row in rows:
        table.add_row(*("" if v is None else str(v) for v in row))
    payload = batch[0] if not isinstance(reports, list) else batch
    return Outcome(payload, code, rows_to_csv(REPORT_HEADER, rows), table)


def table_outcome(table: BRTable, extra: dict[str, Any] | None = None) -> Outcome:
    payload = table_to_dict(table)
    payload.update(extra or {})
    rich_table = Table(show_header=True, header_style="bold")
    for i in range(table.q):
        rich_table.add_column(f"n{i + 1}", justify="right")
    rich_table.add_column("length", justify="right")
    for n, value in table.points():
        rich_table.add_row(*(str(v) for v in n), str(value))
    return Outcome(payload, csv=table_to_csv(table), table=rich_table)


# Task handlers: one per command, shared by the single commands and ``run``.


def do_colength(job: Job) -> Outcome:
    results = []
    code = ExitCode.OK
    for name in job.names():
        module = job.instance.submodule(name)
        s = module_exponent(module, job.bounds.s_max)
        log = CertificateLog()
        if isinstance(s, Indeterminate):
            log.record_exponent(name, None, f"bound {s.bound}")
            results.append({"name": name, "colength": None, "certificates": log.as_dict()})
            code = ExitCode.INDETERMINATE
            continue
        log.record_exponent(name, s, exponent_source(module))
        value = colength(module, job.bounds.s_max)
        results.append({"name": name, "colength": value, "certificates": log.as_dict()})
    rows = [[r["name"], r["colength"]] for r in results]
    return Outcome(results, code, rows_to_csv(["name", "colength"], rows))


def do_brtable(job: Job) -> Outcome:
    modules = job.modules()
    table = br_table(modules, job.window((3,) * len(modules)), job.bounds, job.settings.jobs)
    return table_outcome(table, {"modules": job.names()})


def do_mixed_br(job: Job) -> Outcome:
    modules = job.modules()
    window = job.settings.window or job.task.window
    result = mixed_br_stabilized(modules, window, job.bounds, job.settings.jobs)
    log = CertificateLog()
    log.record_stabilization("mixed br", result.stabilized, result.window)
    payload = {
        "modules": job.names(),
        "value": result.value,
        "status": result.status.value,
        "certificates": log.as_dict(),
    }
    code = ExitCode.OK if result.stabilized else ExitCode.INDETERMINATE
    return Outcome(payload, code)


def do_degree_check(job: Job) -> Outcome:
    modules = job.modules()
    degree = modules[0].ring.nvars + sum(m.ambient_rank for m in modules) - len(modules)
    window = job.window((degree + 2,) * len(modules))
    table = br_table(modules, window, job.bounds, job.settings.jobs)
    check = degree_check(table)
    payload = {
        "modules": job.names(),
        "degree": expected_degree(table),
        "vanishing": check.vanishing,
        "nonvanishing": check.nonvanishing,
        "equal": check.holds,
        "window": list(table.upper),
    }
    return Outcome(payload, ExitCode.OK if check else ExitCode.VERIFICATION_FAILED)


def do_mu_table(job: Job) -> Outcome:
    n_max = job.task.n[0] if job.task.n else job.bounds.n_max
    result = mu_table(job.modules(), n_max, job.bounds)
    rows = [[n, v] for n, v in enumerate(result.values)]
    payload = {
        "modules": job.names(),
        "values": list(result.values),
        "fitted_degree": result.fitted_degree,
    }
    return Outcome(payload, csv=rows_to_csv(["n", "mu"], rows))


def do_koszul_chi(job: Job) -> Outcome:
    names = list(job.task.endos) or job.instance.endo_names
    result = verify_comparison([job.instance.endo(n) for n in names], job.bounds)
    payload = result.to_dict()
    payload["endos"] = names
    return Outcome(payload, ExitCode.OK if result.equal else ExitCode.VERIFICATION_FAILED)


def do_candidate(job: Job) -> Outcome:
    return Outcome(random_candidate(job.modules(), job.seed).to_dict())


def do_jrn(job: Job) -> Outcome:
    modules = job.modules()
    b = random_candidate(modules, job.seed)
    number = joint_reduction_number(modules, b, job.bounds)
    log = CertificateLog()
    found = not isinstance(number, NotFound)
    log.record_sweep("joint reduction number", number if found else None, job.bounds.n_max)
    payload = {
        "modules": job.names(),
        "seed": job.seed,
        "jrn": number if found else str(number),
        "certificates": log.as_dict(),
    }
    return Outcome(payload, ExitCode.OK if found else ExitCode.INDETERMINATE)


def do_determinantal(job: Job) -> Outcome:
    modules = job.modules()
    b = random_candidate(modules, job.seed)
    check = verify_determinantal(modules, b, job.bounds)
    log = CertificateLog()
    log.record_sweep("determinantal reduction", check.n, check.n_max)
    payload = {
        "modules": job.names(),
        "seed": job.seed,
        "n": check.n,
        "status": check.status.value,
        "certificates": log.as_dict(),
    }
    return Outcome(payload, ExitCode.OK if check else ExitCode.INDETERMINATE)


def do_freeness(job: Job) -> Outcome:
    modules = job.modules()
    b = random_candidate(modules, job.seed)
    report = freeness_and_minimality_check(modules, b, job.bounds)
    payload = {"modules": job.names(), "seed": job.seed, **report.to_dict()}
    return Outcome(payload, ExitCode.OK if report.holds else ExitCode.VERIFICATION_FAILED)


def do_verify_jrn0(job: Job) -> Outcome:
    m1, m2 = job.modules(2)
    return report_outcome(verify_jrn0(m1, m2, job.seed, job.bounds, job.label(2)))


def do_verify_prodlength(job: Job) -> Outcome:
    modules = job.modules(at_least=2)
    return report_outcome(verify_prodlength(modules, job.seed, job.bounds, job.label(at_least=2)))


def do_verify_local(job: Job) -> Outcome:
    m1, m2 = job.modules(2)
    return report_outcome(verify_local_identity(m1, m2, job.bounds, job.label(2)))


def do_verify_step1(job: Job) -> Outcome:
    m1, m2 = job.modules(2)
    b = random_candidate([m1, m2], job.seed)
    return report_outcome(verify_step1(m1, m2, b, job.bounds, job.label(2)))


def do_verify_brpolya(job: Job) -> Outcome:
    modules = job.modules()
    window = job.window((3,) * len(modules))
    return report_outcome(verify_brpolya(modules, window, job.seed, job.bounds, job.label()))


def do_verify_ideal_case(job: Job) -> Outcome:
    a, b = job.ideals(2)
    return report_outcome(list(verify_ideal_case(a, b, job.seed, job.bounds, job.label(2))))


def do_minors_check(job: Job) -> Outcome:
    m1, m2 = job.modules(2)
    return report_outcome(minors_multiplicativity_check(m1, m2, job.bounds, job.label(2)))


def do_mixed_mult(job: Job) -> Outcome:
    a, b = job.ideals(2)
    window = job.settings.window or job.task.window
    report = mixed_mult_ideals(a, b, window, job.bounds.trials, job.seed, job.bounds)
    payload = {"ideals": job.names(2), **report.to_dict()}
    if not report.equal:
        code = ExitCode.VERIFICATION_FAILED
    elif not report.stabilized:
        code = ExitCode.INDETERMINATE
    else:
        code = ExitCode.OK
    return Outcome(payload, code)


def do_jrn_experiment(job: Job) -> Outcome:
    modules = job.modules(at_least=3)
    seeds = range(job.seed, job.seed + job.bounds.trials)
    records = jrn_experiment(modules, list(seeds), job.bounds)
    return Outcome({"modules": job.names(at_least=3), "records": records})


HANDLERS: dict[str, Callable[[Job], Outcome]] = {
    "colength": do_colength,
    "brtable": do_brtable,
    "mixed-br": do_mixed_br,
    "degree-check": do_degree_check,
    "mu-table": do_mu_table,
    "koszul-chi": do_koszul_chi,
    "candidate": do_candidate,
    "jrn": do_jrn,
    "determinantal": do_determinantal,
    "freeness": do_freeness,
    "verify-jrn0": do_verify_jrn0,
    "verify-prodlength": do_verify_prodlength,
    "verify-local": do_verify_local,
    "verify-step1": do_verify_step1,
    "verify-brpolya": do_verify_brpolya,
    "verify-ideal-case": do_verify_ideal_case,
    "minors-check": do_minors_check,
    "mixed-mult": do_mixed_mult,
    "jrn-experiment": do_jrn_experiment,
}


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=error_console, show_path=False)],
        force=True,
    )


def _parse_window(
    ctx: click.Context, param: click.Parameter, value: str | None
) -> tuple[int, ...] | None:
    if value is None:
        return None
    try:
        window = tuple(int(v) for v in value.split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma separated integers, got {value!r}") from None
    if any(w < 0 for w in window):
        raise click.BadParameter("window bounds must be non-negative")
    return window


def _fail(message: str, code: ExitCode) -> NoReturn:
    error_console.print(f"[red]Error:[/red] {message}")
    sys.exit(code)


def _load(path: Path, settings: Settings) -> InstanceFile:
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        _fail(f"{path}: {exc}", ExitCode.INPUT_ERROR)
    try:
        return parse_instance(text, settings.field_spec)
    except InstanceError as exc:
        _fail(f"{path}: {exc}", ExitCode.INPUT_ERROR)


def _guarded(action: Callable[[], list[Outcome]]) -> list[Outcome]:
    """Run ``action``; library errors become exit codes."""
    try:
        return action()
    except (NotFiniteColength, CandidateNotJointReduction, GeneratorExhausted) as exc:
        _fail(str(exc), ExitCode.INDETERMINATE)
    except BrmultError as exc:
        _fail(str(exc), ExitCode.INPUT_ERROR)


def _emit(settings: Settings, outcomes: list[Outcome]) -> None:
    """Print outcomes and exit; a failure wins over indeterminacy."""
    if settings.output == "csv":
        for outcome in outcomes:
            if outcome.csv is None:
                _fail("CSV output is not available for this command", ExitCode.INPUT_ERROR)
            click.echo(outcome.csv, nl=False)
    elif settings.output == "text":
        for outcome in outcomes:
            if outcome.table is not None:
                console.print(outcome.table)
            else:
                console.print_json(to_json(outcome.payload))
    else:
        payload = outcomes[0].payload if len(outcomes) == 1 else [o.payload for o in outcomes]
        click.echo(to_json(payload))
    codes = {o.code for o in outcomes}
    if ExitCode.VERIFICATION_FAILED in codes:
        sys.exit(ExitCode.VERIFICATION_FAILED)
    if ExitCode.INDETERMINATE in codes:
        sys.exit(ExitCode.INDETERMINATE)
    sys.exit(ExitCode.OK)


def _execute(settings: Settings, path: Path, command: str) -> None:
    instance = _load(path, settings)
    tasks = instance.tasks_for(command) or [TaskDecl(command)]
    handler = HANDLERS[command]
    _emit(settings, _guarded(lambda: [handler(Job(instance, t, settings)) for t in tasks]))


@click.group()
@click.option("--seed", type=int, default=None, help="Seed for random candidates and draws.")
@click.option("--field", "field_text", default=None, help="fp:<prime> or q; overrides the ring.")
@click.option("--s-max", type=int, default=DEFAULT_BOUNDS.s_max, show_default=True,
              help="Largest exponent tried by finite-colength certificates.")
@click.option("--n-max", type=int, default=DEFAULT_BOUNDS.n_max, show_default=True,
              help="Largest n tried by joint reduction sweeps.")
@click.option("--window", callback=_parse_window, default=None,
              help="Table window, comma separated (e.g. 3,3).")
@click.option("--trials", type=int, default=DEFAULT_BOUNDS.trials, show_default=True,
              help="Random draws for generic mixed multiplicities and experiments.")
@click.option("--jobs", "-j", type=int, default=1, show_default=True,
              help="Worker processes for tables and suites.")
@click.option("--json", "output", flag_value="json", default=True, help="JSON output (default).")
@click.option("--csv", "output", flag_value="csv", help="CSV output for tables and reports.")
@click.option("--text", "output", flag_value="text", help="Human-readable tables.")
@click.option("--verbose", "-v", count=True, help="-v for progress, -vv for certificate detail.")
@click.version_option(__version__, prog_name="brmult")
@click.pass_context
def main(
    ctx: click.Context,
    seed: int | None,
    field_text: str | None,
    s_max: int,
    n_max: int,
    window: tuple[int, ...] | None,
    trials: int,
    jobs: int,
    output: str,
    verbose: int,
) -> None:
    """Joint reductions, Buchsbaum-Rim functions and mixed multiplicities over k[x1..xd]."""
    _configure_logging(verbose)
    try:
        field_spec = FieldSpec.parse(field_text) if field_text else None
        bounds = DEFAULT_BOUNDS.replace(s_max=s_max, n_max=n_max, trials=trials)
    except PreconditionError as exc:
        raise click.UsageError(str(exc)) from None
    if jobs < 1:
        raise click.UsageError("--jobs must be at least 1")
    ctx.obj = Settings(seed, field_spec, bounds, window, jobs, output)


def _instance_command(name: str, help_text: str) -> None:
    @main.command(name=name, help=help_text)
    @click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
    @click.pass_obj
    def command(settings: Settings, path: Path) -> None:
        _execute(settings, path, name)


for _name, _help in (
    ("colength", "lambda(F/M) for every module (or the task's modules)."),
    ("brtable", "Joint Buchsbaum-Rim function on the window."),
    ("mixed-br", "Mixed Buchsbaum-Rim multiplicity of d modules by differences."),
    ("degree-check", "Confirm the total degree d + sum(r) - q of the joint function."),
    ("mu-table", "Minimal generator counts of the graded products."),
    ("koszul-chi", "H0 length of the tensor Koszul complex against the determinant ideal."),
    ("candidate", "Draw a random joint reduction candidate."),
    ("jrn", "Joint reduction number of a random candidate."),
    ("determinantal", "Determinantal reduction criterion for a random candidate."),
    ("freeness", "Freeness and minimal-generator extension of a random candidate."),
    ("verify-jrn0", "Joint reduction number zero for an integrally closed pair."),
    ("verify-prodlength", "Colength of a product of integrally closed modules."),
    ("verify-local", "Product colength identity for local modules."),
    ("verify-step1", "Colength identity for B1M2 + M1B2."),
    ("verify-brpolya", "Closed-form joint Buchsbaum-Rim function on the window."),
    ("verify-ideal-case", "Rank-one identities for two complete ideals."),
    ("minors-check", "I(M1M2) = I(M1)^r2 I(M2)^r1."),
    ("mixed-mult", "e(I|J) by differences and by generic elements."),
    ("jrn-experiment", "Joint reduction numbers of a tuple and of its pairs."),
):
    _instance_command(_name, _help)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_obj
def run(settings: Settings, path: Path) -> None:
    """Run every task block of an instance file, in order."""
    instance = _load(path, settings)
    for task in instance.tasks:
        if task.command not in HANDLERS:
            _fail(f"line {task.line}: unknown command {task.command!r}", ExitCode.INPUT_ERROR)
    _emit(
        settings,
        _guarded(
            lambda: [HANDLERS[t.command](Job(instance, t, settings)) for t in instance.tasks]
        ),
    )


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_obj
def check(settings: Settings, path: Path) -> None:
    """Parse an instance file and summarize what it declares."""
    instance = _load(path, settings)
    objects = []
    for name in instance.order:
        if name in instance.ideals:
            objects.append({"name": name, "kind": "ideal", "rank": 1})
        elif name in instance.modules:
            objects.append({"name": name, "kind": "module", "rank": instance.modules[name].rank})
        elif name in instance.icmodules:
            spec = instance.icmodules[name].spec
            objects.append({"name": name, "kind": "icmodule", "rank": spec.rank})
        else:
            objects.append({"name": name, "kind": "endo", "rank": instance.endos[name].endo.rank})
    payload = {
        "ring": {"vars": list(instance.variables), "field": str(instance.field_spec)},
        "objects": objects,
        "tasks": [t.command for t in instance.tasks],
    }
    table = Table(show_header=True, header_style="bold")
    table.add_column("Name")
    table.add_column("Kind", style="dim")
    table.add_column("Rank", justify="right")
    for obj in objects:
        table.add_row(obj["name"], obj["kind"], str(obj["rank"]))
    rows = [[o["name"], o["kind"], o["rank"]] for o in objects]
    csv_text = rows_to_csv(["name", "kind", "rank"], rows)
    _emit(settings, [Outcome(payload, csv=csv_text, table=table)])


@main.command()
@click.argument("name", type=click.Choice(sorted(SUITES)))
@click.option("--count", "-n", type=int, default=25, show_default=True, help="Instances to run.")
@click.option("--max-rank", type=int, default=None, help="Override the suite's rank limit.")
@click.option("--max-order", type=int, default=None, help="Override the suite's order limit.")
@click.pass_obj
def suite(
    settings: Settings, name: str, count: int, max_rank: int | None, max_order: int | None
) -> None:
    """Run a seeded suite of generated instances."""
    size = suite_size(name, max_rank, max_order)
    seed = settings.seed if settings.seed is not None else 0
    reports = _guarded(
        lambda: [
            report_outcome(run_suite(name, count, seed, settings.jobs, settings.bounds, size))
        ]
    )
    _emit(settings, reports)


if __name__ == "__main__":
    main()
