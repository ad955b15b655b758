"""
unitfrac command line
Solve, sieve, verify and inspect decompositions of 4/n
"""

import json
import logging
import sys
from pathlib import Path
from typing import Annotated, List, Optional

import typer
from pydantic import ValidationError
from rich import box
from rich.console import Console
from rich.table import Table

from . import __version__
from .config import PipelineConfig, load_config
from .core import canonicalize, verify_triple
from .exceptions import ConditionViolationError, ResourceLimitError
from .golden import golden_suite
from .identities import classify, families_table, residue_atlas
from .oracle import enumerate_all
from .parametric import iter_parametric, slice_counts, witness_decomposition
from .pipeline import solve as solve_n
from .schemas import ResidueStatus
from .sieve import progress_writer, render_text, sieve as run_sieve, write_report

app = typer.Typer(
    name="unitfrac",
    help="Decompose 4/n into three unit fractions and sieve ranges for hard cases",
    add_completion=False,
    rich_markup_mode="rich",
)

console = Console()
err_console = Console(stderr=True)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_FOUND = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3

ConfigOption = Annotated[Optional[Path], typer.Option("--config", "-c", help="JSON pipeline config file")]
MethodsOption = Annotated[
    Optional[str], typer.Option("--methods", help="Comma-separated stages: identity,split,multiplier,parametric,oracle")
]


def _split_methods(methods: Optional[str]) -> Optional[List[str]]:
    if not methods:
        return None
    return [m.strip() for m in methods.split(",") if m.strip()]


def _config(config_file: Optional[Path], **overrides) -> PipelineConfig:
    try:
        return load_config(config_file, **overrides)
    except (ValidationError, OSError, json.JSONDecodeError) as e:
        err_console.print(f"[bold red]Error:[/bold red] bad configuration: {e}")
        raise typer.Exit(EXIT_USAGE)


def _emit(record: object) -> None:
    typer.echo(json.dumps(record, sort_keys=True))


def _fail(message: str, code: int) -> None:
    err_console.print(f"[bold red]Error:[/bold red] {message}")
    raise typer.Exit(code)


@app.callback()
def main(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Debug logging")] = False,
):
    """Exit codes: 0 success, 1 not found or mismatch, 2 usage, 3 resource limit."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, stream=sys.stderr)


@app.command()
def version():
    """Print the package version"""
    typer.echo(__version__)


@app.command()
def solve(
    n: Annotated[int, typer.Argument(help="Denominator n >= 2", min=2)],
    config_file: ConfigOption = None,
    methods: MethodsOption = None,
    r1_max: Annotated[Optional[int], typer.Option("--r1-max", min=1)] = None,
    w5_max: Annotated[Optional[int], typer.Option("--w5-max", min=0)] = None,
    u5_max: Annotated[Optional[int], typer.Option("--u5-max", min=1)] = None,
    factor_budget: Annotated[Optional[int], typer.Option("--factor-budget", min=1)] = None,
    stages: Annotated[bool, typer.Option("--stages", help="Print the per-stage report")] = False,
):
    """Find one verified decomposition of 4/n and print it as a JSON record"""
    cfg = _config(
        config_file,
        methods=_split_methods(methods),
        r1_max=r1_max,
        w5_max=w5_max,
        u5_max=u5_max,
        factor_budget=factor_budget,
    )
    result = solve_n(n, cfg)
    if stages:
        table = Table(title=f"Stages for n={n}", box=box.ROUNDED, header_style="bold magenta")
        table.add_column("Stage", style="cyan")
        table.add_column("Status")
        table.add_column("Detail", style="dim white")
        for stage in result.stages:
            table.add_row(stage.method, stage.status, stage.detail or "")
        err_console.print(table)
    if result.decomposition is not None:
        _emit(result.decomposition.to_record())
        return
    _emit({"n": n, "solved": False, "stages": [s.model_dump() for s in result.stages]})
    raise typer.Exit(EXIT_LIMIT if result.hit_limit else EXIT_NOT_FOUND)


@app.command()
def sieve(
    l_start: Annotated[Optional[int], typer.Option("--l-start", min=1, help="First l (n = 24l + 1)")] = None,
    l_end: Annotated[Optional[int], typer.Option("--l-end", min=1)] = None,
    n_start: Annotated[Optional[int], typer.Option("--n-start", min=2, help="First n of a direct range")] = None,
    n_end: Annotated[Optional[int], typer.Option("--n-end", min=2)] = None,
    config_file: ConfigOption = None,
    methods: MethodsOption = None,
    r1_max: Annotated[Optional[int], typer.Option("--r1-max", min=1)] = None,
    parallelism: Annotated[Optional[int], typer.Option("--parallelism", "-j", min=1)] = None,
    cache: Annotated[Optional[Path], typer.Option("--cache", help="JSON-lines cache file")] = None,
    resume: Annotated[bool, typer.Option("--resume", help="Reuse answers already in the cache")] = False,
    report: Annotated[
        Optional[Path], typer.Option("--report", help="Write the report (.json, .csv or text)")
    ] = None,
    progress: Annotated[
        Optional[Path], typer.Option("--progress", help="Stream JSON-lines progress events ('-' for stdout)")
    ] = None,
):
    """Solve every index of a range and summarize exceptions"""
    if (l_start is None) == (n_start is None):
        _fail("give exactly one of --l-start/--l-end or --n-start/--n-end", EXIT_USAGE)
    kind, lo, hi = ("l", l_start, l_end) if l_start is not None else ("n", n_start, n_end)
    hi = lo if hi is None else hi
    if hi < lo:
        _fail(f"empty range [{lo}, {hi}]", EXIT_USAGE)
    cfg = _config(config_file, r1_max=r1_max, parallelism=parallelism, cache_path=cache)
    if resume and cfg.cache_path is None:
        _fail("--resume needs a cache (--cache or UNITFRAC_CACHE_PATH)", EXIT_USAGE)

    handle = None
    try:
        callback = None
        if progress is not None:
            handle = sys.stdout if str(progress) == "-" else open(progress, "w", encoding="utf-8")
            callback = progress_writer(handle)
        try:
            result = run_sieve(
                kind, lo, hi, cfg, methods=_split_methods(methods), resume=resume, progress=callback
            )
        except ValidationError as e:
            _fail(f"bad method filter: {e}", EXIT_USAGE)
    finally:
        if handle is not None and handle is not sys.stdout:
            handle.close()

    if report is not None:
        write_report(result, report)
    err_console.print(render_text(result))
    if result.inconclusive:
        raise typer.Exit(EXIT_LIMIT)


@app.command()
def verify(
    n: Annotated[int, typer.Argument(min=2)],
    x: Annotated[int, typer.Argument(min=1)],
    y: Annotated[int, typer.Argument(min=1)],
    z: Annotated[int, typer.Argument(min=1)],
):
    """Check 4/n = 1/x + 1/y + 1/z exactly"""
    valid = verify_triple(n, (x, y, z))
    _emit({"n": n, "x": x, "y": y, "z": z, "valid": valid})
    if not valid:
        raise typer.Exit(EXIT_NOT_FOUND)


@app.command()
def oracle(
    n: Annotated[int, typer.Argument(min=2)],
    count_only: Annotated[bool, typer.Option("--count-only", help="Print only the number of solutions")] = False,
    max_solutions: Annotated[Optional[int], typer.Option("--max", min=1, help="Stop after K solutions")] = None,
):
    """Enumerate every canonical solution by brute force"""
    result = enumerate_all(n, max_solutions=max_solutions)
    if count_only:
        _emit({"n": n, "count": len(result.solutions), "exhausted": result.exhausted})
    else:
        for t in result.solutions:
            _emit({"n": n, "x": t.x, "y": t.y, "z": t.z})
    if not result.solutions:
        raise typer.Exit(EXIT_NOT_FOUND)


@app.command()
def parametric(
    p: Annotated[int, typer.Argument(help="p = 1 (mod 4)", min=5)],
    w5_max: Annotated[int, typer.Option("--w5-max", min=0)] = 1000,
    u5_max: Annotated[int, typer.Option("--u5-max", min=1)] = 1000,
    first: Annotated[bool, typer.Option("--first/--all", help="Stop at the first witness")] = False,
    slices: Annotated[bool, typer.Option("--slices", help="Also print witness counts per w5")] = False,
):
    """Search (w5, u5) witnesses and print them as JSON lines"""
    found = 0
    try:
        for witness in iter_parametric(p, w5_max, u5_max):
            record = witness.model_dump(exclude_none=True)
            record["triple"] = list(witness_decomposition(witness).triple.values)
            _emit(record)
            found += 1
            if first:
                break
        if slices:
            counts = slice_counts(p, w5_max, u5_max)
            _emit({"p": p, "slices": {str(k): v for k, v in counts.items() if v}, "total": sum(counts.values())})
    except ConditionViolationError as e:
        _fail(str(e), EXIT_USAGE)
    err_console.print(f"[dim]{found} witnesses for p={p} with w5 <= {w5_max}, u5 <= {u5_max}[/dim]")
    if not found:
        raise typer.Exit(EXIT_NOT_FOUND)


@app.command()
def families(
    list_: Annotated[bool, typer.Option("--list", help="TSV table of every family")] = True,
    classify_n: Annotated[Optional[int], typer.Option("--classify", min=2, help="Families that apply to n")] = None,
):
    """Identity families, as a TSV table or classified for one n"""
    if classify_n is not None:
        try:
            for match in classify(classify_n):
                _emit(match.model_dump())
        except ResourceLimitError as e:
            _fail(str(e), EXIT_LIMIT)
        return
    if list_:
        typer.echo("id\tcondition\ttriple\tderivation")
        for row in families_table():
            typer.echo("\t".join(row))


@app.command()
def atlas(
    modulus: Annotated[int, typer.Argument(help="120 or 840")],
    full: Annotated[bool, typer.Option("--full", help="Print every residue, not just the exceptions")] = False,
):
    """Residue classes left open by the identity families"""
    if modulus not in (120, 840):
        _fail("modulus must be 120 or 840", EXIT_USAGE)
    classes = residue_atlas(modulus)
    if full:
        for c in classes:
            _emit(c.model_dump(mode="json"))
        return
    table = Table(title=f"Possible exceptions mod {modulus}", box=box.ROUNDED, header_style="bold magenta")
    table.add_column("Residue", justify="right", style="cyan")
    for c in classes:
        if c.status == ResidueStatus.POSSIBLE_EXCEPTION:
            table.add_row(str(c.residue))
    console.print(table)


@app.command()
def golden():
    """Check the twelve worked decompositions and replay their witnesses"""
    report = golden_suite()
    table = Table(title="Golden decompositions", box=box.ROUNDED, header_style="bold magenta")
    table.add_column("Item", style="cyan")
    table.add_column("l", justify="right")
    table.add_column("n", justify="right")
    table.add_column("Triple")
    table.add_column("Verified")
    table.add_column("Replayed")
    table.add_column("Note", style="dim white")
    for item in report.items:
        table.add_row(
            item.label,
            str(item.l),
            str(item.n),
            str(canonicalize(item.triple)),
            "yes" if item.verified else "[red]NO[/red]",
            "yes" if item.replayed else "[red]NO[/red]",
            item.note or "",
        )
    console.print(table)
    if not report.passed:
        raise typer.Exit(EXIT_NOT_FOUND)


@app.command()
def serve(
    host: Annotated[str, typer.Option("--host")] = "127.0.0.1",
    port: Annotated[int, typer.Option("--port")] = 8000,
):
    """Run the HTTP service"""
    import uvicorn

    uvicorn.run("unitfrac.main:app", host=host, port=port)
