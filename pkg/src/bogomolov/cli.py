"""Command-line front end.

Exit codes: 0 success, 1 when the mathematics says no (a failed step, a
non-isoclinic pair), 2 for usage errors and for anything that stopped the
tool from finishing (missing files, resource caps, an exhausted search
budget).
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import click

from .cohomology import DEFAULT_MEM_CAP, ResourceLimitError, bogomolov_multiplier, h2_qz_invariants
from .isoclinism import DEFAULT_BUDGET, are_isoclinic
from .pcgroup import InconsistentPresentation, PresentationError, bicyclic_subgroups, load_pcg, structure
from .verifier import (
    ScriptError,
    StepFailure,
    format_report,
    load_script,
    resolve,
    run_script,
    script_passes,
    step_determinant,
)

EXIT_OK, EXIT_FAIL, EXIT_RESOURCE = 0, 1, 2


@dataclass
class RunConfig:
    command: str = ""
    inputs: list = field(default_factory=list)
    threads: int = 1
    mem_cap: int = DEFAULT_MEM_CAP
    json: bool = False
    verbose: int = 0


class _Abort(Exception):
    def __init__(self, msg: str, code: int = EXIT_RESOURCE):
        super().__init__(msg)
        self.code = code


def _emit(cfg: RunConfig, record, text: str) -> None:
    if cfg.json:
        click.echo(json.dumps(record, sort_keys=True, indent=2))
    else:
        click.echo(text)


def _group(ref: str):
    try:
        path = Path(ref) if Path(ref).is_file() else resolve(ref)
        return path, load_pcg(path)
    except ScriptError as e:
        raise _Abort(str(e)) from e
    except (PresentationError, InconsistentPresentation, OSError) as e:
        raise _Abort(f"{ref}: {e}") from e


def _set(attr):
    def cb(ctx, param, value):
        if value is not None and value is not False:
            setattr(ctx.find_object(RunConfig), attr, value)
        return value

    return cb


def _shared(f):
    """Let the global flags also appear after the subcommand name."""
    f = click.option("--threads", type=click.IntRange(min=1), default=None, expose_value=False,
                     callback=_set("threads"), help="Same as the global flag.")(f)
    f = click.option("--mem-cap", type=click.IntRange(min=1), default=None, expose_value=False,
                     callback=_set("mem_cap"), help="Same as the global flag.")(f)
    f = click.option("--json", is_flag=True, default=False, expose_value=False,
                     callback=_set("json"), help="Same as the global flag.")(f)
    return f


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True,
              help="Worker threads (only used to run several scripts at once; results do not depend on it).")
@click.option("--mem-cap", type=click.IntRange(min=1), default=DEFAULT_MEM_CAP, show_default=True,
              help="Working-set cap in bytes for cohomology computations.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.option("-v", "--verbose", count=True)
@click.pass_context
def main(ctx, threads, mem_cap, as_json, verbose):
    """Bogomolov multipliers, isoclinism and reduction-script checks.

    Set BOGOMOLOV_DATA to use a data directory other than the bundled one.
    """
    ctx.obj = RunConfig(ctx.invoked_subcommand or "", [], threads, mem_cap, as_json, verbose)


@main.command()
@click.argument("group")
@_shared
@click.pass_obj
def info(cfg: RunConfig, group):
    """Order, center, derived subgroup, exponent and bicyclic count."""
    path, t = _group(group)
    center, derived, exp = structure(t)
    rec = {
        "group_id": path.stem,
        "order": t.order,
        "center": center.order,
        "derived": derived.order,
        "exponent": exp,
        "bicyclic_count": len(bicyclic_subgroups(t)),
    }
    _emit(cfg, rec, "\n".join(f"{k}: {v}" for k, v in rec.items()))


@main.command()
@click.argument("group")
@_shared
@click.pass_obj
def b0(cfg: RunConfig, group):
    """Bogomolov multiplier B0(G) as elementary divisors."""
    path, t = _group(group)
    try:
        r = bogomolov_multiplier(t, mem_cap=cfg.mem_cap)
    except ResourceLimitError as e:
        raise _Abort(f"resource limit: {e}") from e
    rec = {
        "group_id": path.stem,
        "order": t.order,
        "n": t.order,
        "h2_qz_invariants": r.h2_qz_invariants.as_list() if r.h2_qz_invariants else None,
        "b0_invariants": r.invariants.as_list(),
        "b0": r.invariants.as_list(),
        "bicyclic_count": r.bicyclic_count,
        "elapsed": round(r.elapsed, 3),
    }
    _emit(cfg, rec, f"{path.stem}: B0 = {r.invariants.as_list() or 'trivial'}"
          f"  (H2(G,Q/Z) = {rec['h2_qz_invariants']}, {r.bicyclic_count} bicyclic subgroups)")


@main.command()
@click.argument("group")
@_shared
@click.pass_obj
def h2(cfg: RunConfig, group):
    """Schur multiplier H2(G, Q/Z)."""
    path, t = _group(group)
    try:
        inv = h2_qz_invariants(t, mem_cap=cfg.mem_cap)
    except ResourceLimitError as e:
        raise _Abort(f"resource limit: {e}") from e
    rec = {"group_id": path.stem, "order": t.order, "h2_qz_invariants": inv.as_list()}
    _emit(cfg, rec, f"{path.stem}: H2(G,Q/Z) = {inv.as_list() or 'trivial'}")


@main.command()
@click.argument("first")
@click.argument("second")
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True,
              help="Node cap for the search; exceeding it gives 'undecided'.")
@_shared
@click.pass_obj
def iso(cfg: RunConfig, first, second, budget):
    """Decide isoclinism of two groups."""
    pa, ta = _group(first)
    pb, tb = _group(second)
    r = are_isoclinic(ta, tb, budget=budget)
    rec = {"first": pa.stem, "second": pb.stem, **r.as_dict()}
    text = f"{pa.stem} vs {pb.stem}: {r.verdict} ({r.nodes} nodes)"
    if r.reason:
        text += f"; {r.reason}"
    _emit(cfg, rec, text)
    if r.verdict == "undecided":
        sys.exit(EXIT_RESOURCE)
    sys.exit(EXIT_OK if r.verdict == "isoclinic" else EXIT_FAIL)


def _verify_one(ref: str):
    try:
        script = load_script(ref)
    except (ScriptError, OSError) as e:
        raise _Abort(f"{ref}: {e}") from e
    return script, run_script(script)


@main.command()
@click.argument("scripts", nargs=-1, required=True)
@_shared
@click.pass_obj
def verify(cfg: RunConfig, scripts):
    """Run reduction scripts step by step."""
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        results = list(pool.map(_verify_one, scripts))
    ok = True
    records, texts = [], []
    for ref, (script, reports) in zip(scripts, results):
        passed = script_passes(reports)
        ok &= passed
        name = script.path.name if script.path else ref
        records.append({"script": name, "passed": passed, "steps": [r.as_dict() for r in reports]})
        texts.append(f"== {name}: {'PASS' if passed else 'FAIL'}\n{format_report(reports)}")
    _emit(cfg, records[0] if len(records) == 1 else records, "\n".join(texts))
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


@main.command()
@click.argument("script")
@click.option("--step", "k", type=click.IntRange(min=1), required=True, help="1-based step index.")
@_shared
@click.pass_obj
def det(cfg: RunConfig, script, k):
    """Exponent determinant of a monomial fixed-field step."""
    try:
        s = load_script(script)
        d = step_determinant(s, k)
    except ScriptError as e:
        raise _Abort(str(e)) from e
    except StepFailure as e:
        rec = {"script": script, "step": k, "error": str(e)}
        _emit(cfg, rec, str(e))
        sys.exit(EXIT_FAIL)
    _emit(cfg, {"script": s.path.name if s.path else script, "step": k, "det": d}, str(d))


def run_cli(argv=None) -> int:
    try:
        main.main(args=argv, prog_name="bogomolov", standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        return EXIT_RESOURCE
    except click.exceptions.Abort:
        return EXIT_RESOURCE
    except _Abort as e:
        click.echo(f"error: {e}", err=True)
        return e.code
    except SystemExit as e:
        return int(e.code or 0)
    return EXIT_OK


def entry() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    entry()
