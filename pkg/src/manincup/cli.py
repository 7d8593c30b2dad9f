"""Command-line entry point.

    manincup SUBCOMMAND --p P --N N [--r R] [--precision M] [--theta w31|all]
             [--out DIR] [--format json|csv] [--cache-dir DIR] [--jobs J]

Each run writes DIR/SUBCOMMAND.json (or .csv).  Conjecture-grade failures
go to DIR/findings.json and leave the exit status at 0; a failing theorem or
sanity check exits with status 1.  Invalid configurations exit with status 2.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import reports
from .cache import Cache, ENV_VAR
from .linalg import PrecisionError
from .padic import DomainError


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text)
    return path


def _emit(reps: list, out: Path, fmt: str) -> int:
    findings = []
    for rep in reps:
        _write(out, f"{rep.subcommand}.{fmt}", rep.render(fmt))
        for line in rep.summary_lines():
            click.echo(f"{rep.subcommand:11s} {line}", err=True)
        findings.extend({"subcommand": rep.subcommand, **f} for f in rep.findings)
    findings_path = out / "findings.json"
    if findings:
        _write(out, "findings.json", json.dumps(findings, sort_keys=True, indent=2) + "\n")
    elif findings_path.exists():
        findings_path.unlink()
    if len(reps) > 1:
        index = {"reports": [{"subcommand": r.subcommand, "status": "fail" if r.failed else "pass",
                              "findings": len(r.findings)} for r in reps]}
        _write(out, "index.json", json.dumps(index, sort_keys=True, indent=2) + "\n")
    return 1 if any(r.failed for r in reps) else 0


def _options(f):
    opts = [
        click.option("--p", "p", type=int, default=5, show_default=True, help="odd prime p"),
        click.option("--N", "N", type=int, default=1, show_default=True, help="tame level, prime to p"),
        click.option("--r", "r", type=int, default=1, show_default=True, help="p-power level exponent"),
        click.option("--precision", "m", type=int, default=None,
                     help="coefficients mod p^m (default 3; mazur-tate uses 6 for p <= 7 and 4 otherwise; varpi uses 2)"),
        click.option("--theta", default="all", show_default=True,
                     help="odd primitive character: w<k> for omega^k, chi<modulus>_<exponents>, or all"),
        click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("reports"),
                     show_default=True, help="report directory"),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True),
        click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), default=None,
                     help=f"matrix cache directory (default: ${ENV_VAR} or ~/.cache/manincup)"),
        click.option("--jobs", type=int, default=1, show_default=True, help="worker processes"),
        click.option("--grid-size", type=int, default=10, show_default=True,
                     help="sample size for the character grids"),
        click.option("--seed", type=int, default=0, show_default=True, help="grid sampling seed"),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


@click.group()
@click.version_option(package_name="manincup")
def main():
    """Modular symbols, Eisenstein quotients and Mazur-Tate identities at level N p^r."""


def _run(names, p, N, r, m, theta, out, fmt, cache_dir, jobs, grid_size, seed):
    cfg = reports.RunConfig(p=p, N=N, r=r, m=m, theta=theta, grid_size=grid_size, seed=seed,
                            jobs=jobs, fmt=fmt)
    try:
        cfg.validate()
        cache = Cache(cache_dir)
        reps = [reports.run(name, cfg, cache) for name in names]
    except (reports.ConfigError, DomainError, PrecisionError) as exc:
        raise click.UsageError(str(exc)) from exc
    sys.exit(_emit(reps, out, fmt))


def _make(name: str, doc: str):
    @main.command(name=name, help=doc)
    @_options
    def cmd(**kw):
        _run([name], **kw)
    return cmd


for _name, _doc in [
    ("space", "Build the Manin symbol presentation and check ranks and Hecke operators."),
    ("eisenstein", "Eisenstein locus, quotient and Bernoulli biconditional per theta."),
    ("xi-table", "Table of xi(u:v)^+ in the Eisenstein quotient per theta."),
    ("mazur-tate", "Theta elements and the L-function identity sweeps."),
    ("units", "Cyclotomic unit identities in the universal distribution."),
    ("varpi", "Well-definedness and Eisenstein property of the map to the relation module."),
    ("shadow", "Consequences of the conjectures on xi in the Eisenstein quotient."),
    ("pairing", "Perfectness, self-adjointness and level compatibility of the twisted pairing."),
]:
    _make(_name, _doc)


@main.command(name="all", help="Run every subcommand for one configuration.")
@_options
def all_cmd(**kw):
    _run(list(reports.SUBCOMMANDS), **kw)


if __name__ == "__main__":
    main()
