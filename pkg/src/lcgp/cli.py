"""Command-line front end.

Each command parses a problem file, sends it to the HTTP service, and
writes the response as a report or CSV.  By default the service runs
in-process; pass ``--url`` to talk to a remote ``lcgp serve`` instance.

Exit codes: 0 success, 1 error, 2 input not parametrizable (the report
still carries A' as the suggested corrected system).
"""

from __future__ import annotations

import asyncio
import csv
import random
import sys
from pathlib import Path

import click
import httpx

from . import __version__
from .problem import parse_problem
from .schemas import (
    FitResponse,
    ParametrizeResponse,
    PredictResponse,
    PushforwardResponse,
)

HEADER = f"# lcgp report v{__version__}"
EXIT_NOT_PARAMETRIZABLE = 2


def _post(url: str | None, path: str, payload: dict) -> dict:
    """POST to a remote service, or to the in-process app when url is None."""
    if url is not None:
        resp = httpx.post(url.rstrip("/") + path, json=payload, timeout=600.0)
    else:
        from .service import app

        async def call():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://lcgp"
            ) as client:
                return await client.post(path, json=payload, timeout=600.0)

        try:
            resp = asyncio.run(call())
        except click.ClickException:
            raise
        except Exception as exc:
            raise click.ClickException(f"service error: {exc}") from exc
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise click.ClickException(f"service error ({resp.status_code}): {detail}")
    return resp.json()


def _load(problem_file: str, order, noise, jitter):
    spec = parse_problem(Path(problem_file).read_text())
    if order is not None:
        spec.order = order
    if noise is not None:
        spec.noise = noise
    if jitter is not None:
        spec.jitter = jitter
    return spec


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _matrix_block(title: str, rows: list[list[str]]) -> list[str]:
    lines = [f"[{title}]"]
    lines += [", ".join(row) for row in rows] if rows else ["<empty>"]
    return lines


problem_arg = click.argument("problem_file", type=click.Path(exists=True, dir_okay=False))
order_opt = click.option("--order", type=click.Choice(["degrevlex", "lex"]), default=None,
                         help="Monomial order for the module computations.")
noise_opt = click.option("--noise", type=float, default=None, help="Observation noise variance.")
jitter_opt = click.option("--jitter", type=float, default=None, help="Fixed factorization jitter.")
out_opt = click.option("--out", type=click.Path(dir_okay=False), default=None,
                       help="Write output here instead of stdout.")
url_opt = click.option("--url", default=None, help="Base URL of a running service; default runs in-process.")
seed_opt = click.option("--seed", type=int, default=None, help="Seed for randomized utilities.")


@click.group()
@click.version_option(__version__)
def main():
    """Constrained Gaussian process priors for linear operator equations."""


def _common(seed):
    if seed is not None:
        random.seed(seed)


@main.command()
@problem_arg
@order_opt
@out_opt
@url_opt
@seed_opt
def parametrize(problem_file, order, out, url, seed):
    """Compute B with A B = 0 and decide whether B parametrizes all solutions."""
    _common(seed)
    spec = _load(problem_file, order, None, None)
    data = _post(url, "/parametrize", {
        "ring": spec.ring.model_dump(),
        "matrix": spec.matrix,
        "order": spec.order,
    })
    resp = ParametrizeResponse.model_validate(data)
    lines = [HEADER, f"parametrizable: {str(resp.parametrizable).lower()}"]
    lines += _matrix_block("B", resp.b_matrix)
    lines += _matrix_block("A'", resp.a_prime)
    if resp.certificates:
        lines += _matrix_block("certificates", resp.certificates)
    _emit("\n".join(lines) + "\n", out)
    if not resp.parametrizable:
        sys.exit(EXIT_NOT_PARAMETRIZABLE)


@main.command()
@problem_arg
@order_opt
@out_opt
@url_opt
@seed_opt
def pushforward(problem_file, order, out, url, seed):
    """Push the base kernel through B and print the covariance matrix."""
    _common(seed)
    spec = _load(problem_file, order, None, None)
    data = _post(url, "/pushforward", {
        "ring": spec.ring.model_dump(),
        "matrix": spec.matrix,
        "kernel": spec.kernel.model_dump(),
        "order": spec.order,
        "shift_step": spec.shift_step,
    })
    resp = PushforwardResponse.model_validate(data)
    lines = [HEADER, f"parametrizable: {str(resp.parametrizable).lower()}"]
    lines += _matrix_block("B", resp.b_matrix)
    lines += _matrix_block("A'", resp.a_prime)
    if resp.covariance is not None:
        lines += _matrix_block("covariance", resp.covariance)
    _emit("\n".join(lines) + "\n", out)
    if not resp.parametrizable:
        sys.exit(EXIT_NOT_PARAMETRIZABLE)


@main.command()
@problem_arg
@order_opt
@noise_opt
@jitter_opt
@out_opt
@url_opt
@seed_opt
@click.option("--lengthscales", default="1/4,1/2,1,2,4", help="Comma-separated rational candidates.")
@click.option("--variances", default="1", help="Comma-separated rational candidates.")
@click.option("--noise-grid", default=None, help="Comma-separated noise variance candidates.")
def fit(problem_file, order, noise, jitter, out, url, seed, lengthscales, variances, noise_grid):
    """Grid-search kernel hyperparameters by marginal likelihood."""
    _common(seed)
    spec = _load(problem_file, order, noise, jitter)
    noise_vars = (
        [float(x) for x in noise_grid.split(",")] if noise_grid else [spec.noise]
    )
    data = _post(url, "/fit", {
        "problem": spec.model_dump(),
        "lengthscales": lengthscales.split(","),
        "variances": variances.split(","),
        "noise_vars": noise_vars,
    })
    resp = FitResponse.model_validate(data)
    lines = [HEADER, f"parametrizable: {str(resp.parametrizable).lower()}"]
    if resp.parametrizable:
        lines += [
            f"lengthscale: {resp.lengthscale}",
            f"variance: {resp.variance}",
            f"noise: {resp.noise_var!r}",
            f"log_marginal_likelihood: {resp.log_marginal_likelihood!r}",
        ]
    _emit("\n".join(lines) + "\n", out)
    if not resp.parametrizable:
        sys.exit(EXIT_NOT_PARAMETRIZABLE)


@main.command()
@problem_arg
@order_opt
@noise_opt
@jitter_opt
@out_opt
@url_opt
@seed_opt
def predict(problem_file, order, noise, jitter, out, url, seed):
    """Condition on the data and write posterior mean/std at the queries as CSV."""
    _common(seed)
    spec = _load(problem_file, order, noise, jitter)
    data = _post(url, "/predict", spec.model_dump())
    resp = PredictResponse.model_validate(data)
    if not resp.parametrizable:
        lines = [HEADER, "parametrizable: false"]
        lines += _matrix_block("A'", resp.a_prime)
        _emit("\n".join(lines) + "\n", out)
        sys.exit(EXIT_NOT_PARAMETRIZABLE)

    import io

    ncoords = len(resp.rows[0].point) if resp.rows else len(spec.queries[0].point) if spec.queries else 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"x{i + 1}" for i in range(ncoords)] + ["component", "mean", "std"])
    for row in resp.rows:
        writer.writerow([repr(c) for c in row.point] + [row.component, repr(row.mean), repr(row.std)])
    _emit(buf.getvalue(), out)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("lcgp.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
