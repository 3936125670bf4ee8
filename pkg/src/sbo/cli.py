"""Command line front end: ``sbo coeffs|family|apply|singular|check``."""

from __future__ import annotations

import json
import sys
import time

import click

from . import coeffs as C
from . import operators as O
from . import singular as S
from . import verify as V
from .dsl import DSLError, parse_op, pretty_print
from .exterior import PolyForm
from .scalars import GaussianRational, Scalar, rational

EXIT_CAP = 100

FORMATS = click.Choice(["text", "json"])


def _lambda(value):
    if value is None:
        return None
    try:
        return GaussianRational.coerce(rational(value))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter("expected num/den, got %r (%s)" % (value, exc))


def _emit(fmt: str, data, text: str):
    if fmt == "json":
        click.echo(json.dumps(data, indent=2))
    else:
        click.echo(text)


def _scalar_out(s: Scalar, lam0):
    return s.eval_at(lam0) if lam0 is not None else s


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Conformal symmetry breaking operators on differential forms."""


@main.command()
@click.option("--n", "n", type=int, required=True, help="Dimension of the ambient space.")
@click.option("--order", "N", type=int, required=True, help="Index N of the coefficient family.")
@click.option("--p", "p", type=int, default=0, show_default=True, help="Form degree (gamma only).")
@click.option("--family", "family", type=click.Choice(["a", "b", "alpha", "beta", "gamma", "all"]),
              default="all", show_default=True)
@click.option("--lambda", "lam", default=None, help="Evaluate at lambda = num/den.")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
def coeffs(n, N, p, family, lam, fmt):
    """Print coefficient tables."""
    lam0 = _lambda(lam)
    table = {
        "a": lambda j: C.a(N, j, n),
        "b": lambda j: C.b(N, j, n),
        "alpha": lambda j: C.alpha(N, j, n),
        "beta": lambda j: C.beta(N, j, n),
        "gamma": lambda j: C.gamma(N, j, p, n),
    }
    names = list(table) if family == "all" else [family]
    rows = []
    for name in names:
        lo = 1 if name == "gamma" else 0
        for j in range(lo, N + 1):
            rows.append((name, j, _scalar_out(table[name](j), lam0)))
    data = [{"family": f, "N": N, "index": j, "value": v.to_json()} for f, j, v in rows]
    text = "\n".join("%-6s N=%d  %2d  %s" % (f, N, j, v.to_text() if isinstance(v, Scalar) else v)
                     for f, j, v in rows)
    _emit(fmt, data, text)


def _family(ftype, n, p, N, presentation, lam0):
    try:
        e = O.family(ftype, n, p, N, presentation)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    return O.specialize(e, lam0) if lam0 is not None else e


@main.command()
@click.option("--type", "ftype", type=click.IntRange(1, 4), required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--order", "N", type=int, required=True)
@click.option("--presentation", type=click.Choice(["normal", "geometric"]), default="normal", show_default=True)
@click.option("--lambda", "lam", default=None, help="Specialize at lambda = num/den.")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
def family(ftype, n, p, N, presentation, lam, fmt):
    """Print an operator family."""
    e = _family(ftype, n, p, N, presentation, _lambda(lam))
    _emit(fmt, O.to_json(e), "%s\n%s" % (e.sig, pretty_print(e)))


def _read_json_arg(value: str):
    if value.startswith("@"):
        with open(value[1:]) as fh:
            return json.load(fh)
    return json.loads(value)


@main.command()
@click.option("--form", "form", required=True, help="Form as JSON, or @file.json.")
@click.option("--expr", default=None, help="Operator in the expression language.")
@click.option("--type", "ftype", type=click.IntRange(1, 4), default=None)
@click.option("--n", "n", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--order", "N", type=int, default=None)
@click.option("--lambda", "lam", default=None)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
def apply(form, expr, ftype, n, p, N, lam, fmt):
    """Apply an operator to a polynomial form."""
    lam0 = _lambda(lam)
    if (expr is None) == (ftype is None):
        raise click.UsageError("give exactly one of --expr and --type")
    if expr is not None:
        bindings = {"n": n, "p": p}
        if N is not None:
            bindings["N"] = N
        try:
            D = parse_op(expr, bindings)
        except DSLError as exc:
            raise click.UsageError("%s\n%s" % (exc, exc.caret()))
        if lam0 is not None:
            D = O.specialize(D, lam0)
    else:
        if N is None:
            raise click.UsageError("--order is required with --type")
        D = _family(ftype, n, p, N, "normal", lam0)
    try:
        w = PolyForm.from_json(_read_json_arg(form))
    except (ValueError, KeyError, TypeError, OSError) as exc:
        raise click.UsageError("cannot read the form: %s" % exc)
    if (w.ambient_dim, w.degree) != (D.sig.src_dim, D.sig.src_deg):
        raise click.UsageError("form lives on (R^%d, %d) but the operator expects %s"
                               % (w.ambient_dim, w.degree, D.sig))
    out = D.apply(w)
    _emit(fmt, out.to_json(), out.to_text())


@main.command()
@click.option("--type", "ftype", type=click.IntRange(1, 4), required=True)
@click.option("--n", "n", type=int, required=True)
@click.option("--p", "p", type=int, required=True)
@click.option("--order", "N", type=int, required=True)
@click.option("--action", type=click.Choice(["emit", "verify", "solve", "translate"]), default="emit",
              show_default=True)
@click.option("--lambda", "lam", default=None, help="Spectral parameter for solve (num/den).")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
def singular(ftype, n, p, N, action, lam, fmt):
    """Singular vectors: emit, verify annihilation, solve the ansatz or translate."""
    lam0 = _lambda(lam)
    try:
        v = S.build(ftype, n, p, N)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if action == "emit":
        if lam0 is not None:
            v = v.at(lam0)
        _emit(fmt, v.to_json(), v.to_text())
        return
    if action == "translate":
        e = S.translate(v)
        _emit(fmt, O.to_json(e), pretty_print(e))
        return
    if action == "verify":
        rep = S.verify_annihilated(v if lam0 is None else v.at(lam0))
        _emit(fmt, rep.to_json(), "annihilated" if rep.passed else "%d failures" % len(rep.failures))
        sys.exit(0 if rep.passed else min(len(rep.failures), EXIT_CAP))
    if lam0 is None:
        lam0 = v.lam.eval_at(0) if v.lam.is_constant() else None
        if lam0 is None:
            raise click.UsageError("--lambda is required to solve a family with free parameter")
    ker = S.solve_ansatz(n, p, v.q, N, lam0)
    data = {"lambda": lam0.to_json(), "dimension": len(ker), "basis": [k.to_json() for k in ker]}
    text = "kernel dimension %d at lambda = %s" % (len(ker), lam0)
    for k in ker:
        text += "\n" + k.to_text()
    _emit(fmt, data, text)


@main.command()
@click.option("--suite", type=click.Choice(("all",) + V.SUITES), default="all", show_default=True)
@click.option("--n-max", "n_max", type=int, default=5, show_default=True)
@click.option("--order-max", "order_max", type=int, default=4, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes.")
@click.option("--report", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the full JSON report here.")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
def check(suite, n_max, order_max, jobs, report, fmt):
    """Run identity suites.  The exit code is the number of failing cases (capped)."""
    suites = V.SUITES if suite == "all" else (suite,)
    t0 = time.perf_counter()
    reports = []
    for name in suites:
        r = V.run_suite(name, n_max, order_max, jobs)
        reports.append(r)
        if fmt == "text":
            click.echo(r.summary())
            for f in r.failures[:5]:
                click.echo("  FAIL %s %s %s" % (f.name, f.params, json.dumps(f.counterexample)[:400]))
    failed = sum(len(r.failures) for r in reports)
    data = {"n_max": n_max, "order_max": order_max, "failed": failed,
            "seconds": round(time.perf_counter() - t0, 3), "suites": [r.to_json() for r in reports]}
    if report:
        with open(report, "w") as fh:
            json.dump(data, fh, indent=1)
    if fmt == "json":
        click.echo(json.dumps({k: v for k, v in data.items() if k != "suites"} |
                              {"suites": [{k: v for k, v in r.to_json().items() if k != "results"}
                                          for r in reports]}, indent=2))
    else:
        click.echo("total %d cases, %d failed, %.1fs" % (sum(len(r.results) for r in reports), failed,
                                                         data["seconds"]))
    sys.exit(min(failed, EXIT_CAP))


if __name__ == "__main__":
    main()
