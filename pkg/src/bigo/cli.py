"""Command line client.

``bigo FILE`` is short for ``bigo check FILE``.  Problems are decided
in-process unless ``--server`` names a running ``bigo serve``.

Exit codes: 0 valid (or verified), 1 invalid, 2 error.
"""

from __future__ import annotations

import json
import random
import sys
import time

import click

from . import generators, oracle, service, suites
from .errors import BigOError
from .problem import Problem, parse_problem
from .schemas import VerdictReport
from .terms import conj, formula_symbols, Growth, Implies

EXIT_VALID, EXIT_INVALID, EXIT_ERROR = 0, 1, 2


class DefaultGroup(click.Group):
    """Route unknown first arguments to ``check``."""

    def parse_args(self, ctx, args):
        if not args or (args[0] not in self.commands and args[0] not in ("--help", "-h")):
            args = ["check", *args]
        return super().parse_args(ctx, args)


@click.group(cls=DefaultGroup, context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Decide big-O entailments between linear combinations of functions.

    Problems default to theory signed under the pointwise reading; theory
    growth always uses the eventually reading.
    """


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _dump(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)


def _fail(msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_ERROR)


def _remote(url, text, reading, timing):
    import httpx
    try:
        resp = httpx.post(url.rstrip("/") + "/check", params={"timing": timing},
                          json={"problem": text, "reading": reading}, timeout=60)
    except httpx.HTTPError as exc:
        _fail(f"server unreachable: {exc}")
    body = resp.json()
    if resp.status_code != 200:
        _fail(f"{body.get('kind', 'Error')}: {body.get('error', resp.text)}")
    return VerdictReport.model_validate(body)


def describe(report: VerdictReport) -> str:
    """Short human-readable rendering of a report."""
    lines = [f"{report.verdict} (verified: {str(report.verified).lower()})"]
    if report.certificate:
        cert = report.certificate
        for d in cert.get("definitions", []):
            lines.append(f"  where {d[0]} = {d[1]}")
        lines.append(f"  certificate covers {len(cert['clauses'])} clause(s)")
    if report.counterexample:
        lines += ["  " + s for s in _describe_cx(report.counterexample.model_dump())]
    return "\n".join(lines)


def _poly(vec, basis) -> str:
    parts = []
    for c, b in zip(vec, basis):
        if c.startswith("0/"):
            continue
        c = c[:-2] if c.endswith("/1") else c
        parts.append(c if b == "1" else f"{c}*{b}")
    return " + ".join(parts) or "0"


def _describe_cx(cx) -> list:
    if cx.get("components"):
        out = ["counterexample: one model per disjunct, placed side by side"]
        for i, c in enumerate(cx["components"]):
            out.append(f"component {i}:")
            out += ["  " + s for s in _describe_cx(c)]
        return out
    out = [f"counterexample on {cx['domain_size']} point(s):"]
    for atom, vecs in cx["values"].items():
        out.append(f"  {atom} = " + ", ".join(_poly(v, cx["basis"]) for v in vecs))
    return out


@main.command()
@click.argument("file")
@click.option("--reading", type=click.Choice(["pointwise", "eventually"]), default=None,
              help="How O(.) is read; default pointwise, or eventually for theory growth.")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for any randomized step; decisions themselves are deterministic.")
@click.option("--verify-only", "report_file", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Re-check a saved JSON report against FILE instead of deciding.")
@click.option("--no-timing", is_flag=True, help="Report ms as 0 so output is byte-stable.")
@click.option("--server", default=None, help="Send the problem to a running `bigo serve` at this URL.")
def check(file, reading, as_json, seed, report_file, no_timing, server):
    """Decide the problem in FILE ('-' for stdin)."""
    random.seed(seed)
    try:
        text = _read(file)
    except OSError as exc:
        _fail(str(exc))
    try:
        problem = parse_problem(text, reading)
    except BigOError as exc:
        _fail(f"{type(exc).__name__}: {exc}")
    if report_file:
        try:
            report = VerdictReport.model_validate_json(_read(report_file))
        except ValueError as exc:
            _fail(f"unreadable report: {exc}")
        ok = service.verify(report, problem)
        click.echo(_dump({"verified": ok}) if as_json else ("verified" if ok else "not verified"))
        sys.exit(EXIT_VALID if ok else EXIT_ERROR)
    if server:
        report = _remote(server, text, reading, not no_timing)
        if not service.verify(report, problem):
            _fail("server returned a report that does not verify")
    else:
        try:
            report = service.run(problem, timing=not no_timing)
        except BigOError as exc:
            _fail(f"{type(exc).__name__}: {exc}")
    click.echo(_dump(report.model_dump()) if as_json else describe(report))
    sys.exit(EXIT_VALID if report.verdict == "valid" else EXIT_INVALID)


PROFILES = ("core", "qf", "signed", "with-one", "growth")


def _instance(rng, profile) -> Problem:
    if profile == "core":
        hyps, concl = generators.horn_clause(rng)
        return Problem("core", "pointwise", tuple(hyps), concl)
    if profile == "qf":
        return Problem("core", "pointwise", (), generators.core_formula(rng))
    if profile == "signed":
        return Problem("signed", "pointwise", (), generators.signed_formula(rng))
    if profile == "with-one":
        return Problem("with-one", "pointwise", (), generators.with_one_formula(rng))
    k = rng.randint(1, 3)
    hyps, concl = generators.growth_horn(rng, k)
    phi = Implies(conj(hyps), concl) if hyps else concl
    idx = tuple(sorted({a.index for a in formula_symbols(phi) if isinstance(a, Growth)}))
    return Problem("growth", "eventually", tuple(hyps), concl, idx)


def _search_profile(profile, seed):
    if profile in ("core", "qf"):
        return oracle.Profile(seed=seed)
    if profile == "signed":
        return oracle.Profile(domain_size=2, low=-4, high=4, nonneg=False, seed=seed)
    return None


@main.command()
@click.option("--count", type=int, default=100, show_default=True)
@click.option("--profile", type=click.Choice(PROFILES), default="core", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--budget", type=int, default=200, show_default=True,
              help="Random assignments tried against each valid verdict.")
def fuzz(count, profile, seed, budget):
    """Decide random problems and cross-check every verdict."""
    rng = random.Random(seed)
    tally = {"valid": 0, "invalid": 0}
    problems = 0
    start = time.perf_counter()
    for i in range(count):
        problem = _instance(rng, profile)
        try:
            report = service.run(problem, timing=False)
        except BigOError as exc:
            click.echo(f"#{i}: {type(exc).__name__}: {exc}")
            problems += 1
            continue
        tally[report.verdict] += 1
        search = _search_profile(profile, seed + i)
        if report.verdict == "valid" and search is not None:
            hit = oracle.random_search(problem.formula, budget, search)
            if hit is not None:
                click.echo(f"#{i}: valid verdict falsified by random search")
                problems += 1
    secs = time.perf_counter() - start
    click.echo(f"{count} {profile} problems: {tally['valid']} valid, {tally['invalid']} invalid, "
               f"{problems} discrepancies, {secs:.2f} s")
    sys.exit(EXIT_VALID if problems == 0 else EXIT_ERROR)


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--matrices", type=int, default=500, show_default=True)
def selftest(seed, matrices):
    """Run the axiom and LP duality suites."""
    from .formula import decide_qf
    rng = random.Random(seed)
    failed = 0
    for label, cases in (("axiom instances", suites.axiom_instances()),
                         ("derived facts", suites.derived_facts(rng))):
        bad = [name for name, phi in cases if not decide_qf(phi)]
        failed += len(bad)
        click.echo(f"{label}: {len(cases) - len(bad)}/{len(cases)} valid")
    columns = bad_columns = 0
    for _ in range(matrices):
        A = suites.random_matrix(rng)
        for v in range(len(A[0])):
            columns += 1
            bad_columns += not suites.duality_check(A, v)
    failed += bad_columns
    click.echo(f"duality: {columns - bad_columns}/{columns} columns with exactly one witness")
    sys.exit(EXIT_VALID if failed == 0 else EXIT_ERROR)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Serve POST /check and POST /verify over HTTP."""
    import uvicorn
    uvicorn.run("bigo.api:app", host=host, port=port)


if __name__ == "__main__":
    main()
