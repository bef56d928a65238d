"""``heartknit`` command line.

Exit codes: 0 on success, 2 when an input fails validation, 3 when ``knit``
runs out of its object budget.
"""
from __future__ import annotations

import os
import sys
from typing import List, Optional

import click

from .arquiver import (BudgetExhausted, almost_split_conflation, decompose, emit_dot, emit_json,
                       iso_test, knit, label_string, verify_almost_split, verify_quiver)
from .dgalgebra import AlgebraError, DGPathAlgebra
from .dgmodule import ModuleError, radical_layers
from .dsl import DSLSyntaxError, parse_algebra, parse_module
from .heart import Heart, HeartObject, NotCoconnective, OutOfWindow

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3

_INVALID = (DSLSyntaxError, AlgebraError, ModuleError, OutOfWindow, NotCoconnective, ValueError)


class Invalid(click.ClickException):
    exit_code = EXIT_INVALID


def _read(path_or_text: str) -> str:
    if os.path.exists(path_or_text):
        with open(path_or_text, encoding="utf-8") as fh:
            return fh.read()
    return path_or_text


def load_algebra(path: str, field: Optional[str] = None) -> DGPathAlgebra:
    try:
        return parse_algebra(_read(path), field)
    except _INVALID as e:
        raise Invalid(f"{path}: {e}")


def load_object(H: Heart, spec: str) -> HeartObject:
    try:
        m = parse_module(_read(spec), H.algebra)
        return H.member(m, name=os.path.basename(spec) if os.path.exists(spec) else None)
    except _INVALID as e:
        raise Invalid(f"{spec}: {e}")


def composition_diagram(x: HeartObject) -> str:
    """One column per cohomological degree, Loewy layers stacked top to bottom."""
    layers = radical_layers(x.module)
    if not layers:
        return "0"
    A = x.heart.algebra
    cols = []
    for i in sorted(layers, reverse=True):
        rows = [" ".join(v for v in A.vertices for _ in range(layer.get(v, 0))) for layer in layers[i]]
        cols.append([f"H{i}"] + rows)
    width = [max(len(r) for r in c) for c in cols]
    height = max(len(c) for c in cols)
    out = []
    for r in range(height):
        cells = [(c[r] if r < len(c) else "").ljust(w) for c, w in zip(cols, width)]
        out.append("   ".join(cells).rstrip())
    return "\n".join(out)


def _dims(x: HeartObject) -> str:
    g = x.graded_dims()
    parts = []
    for v in x.heart.algebra.vertices:
        if v in g:
            parts.append(f"{v}: " + ", ".join(f"{i}:{n}" for i, n in sorted(g[v].items(), reverse=True)))
    return "{" + "; ".join(parts) + "}" if parts else "{}"


def _show(x: HeartObject, title: str):
    click.echo(f"{title} = {label_string(x) or '0'}")
    click.echo(f"graded dims {_dims(x)}")
    click.echo(composition_diagram(x))


def _heart(algebra: str, d: int, field: Optional[str]) -> Heart:
    A = load_algebra(algebra, field)
    if d < A.d_min:
        raise Invalid(f"d = {d} is below the minimal admissible value {A.d_min}")
    return Heart.of(A, d)


_algebra_opt = click.option("--algebra", required=True, help="algebra file (.hk)")
_field_opt = click.option("--field", default=None, help="override the field, e.g. Q or GF(32003)")
_d_opt = click.option("--d", "d", type=int, required=True, help="window size of the heart")


@click.group()
def main():
    """Auslander-Reiten theory in extended hearts of proper connective dg path algebras."""


@main.command()
@_algebra_opt
@_field_opt
@click.option("--module", "modules", multiple=True, help="module file or builder expression")
@click.option("--d", "d", type=int, default=None)
def check(algebra, field, modules, d):
    """Validate inputs and report H*(A) and the minimal d."""
    A = load_algebra(algebra, field)
    click.echo(f"algebra ok: {len(A.vertices)} vertices, {len(A.arrows)} arrows, dim A = {A.dim}")
    click.echo(f"field {A.field.name}, hash {A.hash()}")
    by = {}
    for (s, t, i), n in A.cohomology.items():
        by[i] = by.get(i, 0) + n
    for i in sorted(by, reverse=True):
        click.echo(f"dim H^{i}(A) = {by[i]}")
    click.echo(f"d_min = {A.d_min}")
    if modules:
        if d is None:
            raise Invalid("checking a module needs --d")
        H = Heart.of(A, d)
        for spec in modules:
            x = load_object(H, spec)
            click.echo(f"module ok, in H^{H.d}: {label_string(x) or '0'}")


@main.command()
@_algebra_opt
@_field_opt
@click.option("--module", required=True)
def cohomology(algebra, field, module):
    """Print H^i of a module, per vertex and degree."""
    A = load_algebra(algebra, field)
    try:
        m = parse_module(_read(module), A)
    except _INVALID as e:
        raise Invalid(str(e))
    dims = m.cohomology_dims()
    if not dims:
        click.echo("acyclic")
    for (v, i), n in sorted(dims.items(), key=lambda kv: (-kv[0][1], A.vindex[kv[0][0]])):
        click.echo(f"H^{i} at {v}: {n}")


@main.command()
@_algebra_opt
@_field_opt
@_d_opt
@click.option("--module", "modules", multiple=True, required=True, help="give twice: X then Y")
@click.option("--j", "j", type=int, default=0, help="degree: Hom(X, Y[j])")
def hom(algebra, field, d, modules, j):
    """dim Hom(X, Y[j]), plus the stable and costable quotients for j = 0."""
    if len(modules) != 2:
        raise Invalid("hom needs exactly two --module options")
    H = _heart(algebra, d, field)
    x, y = (load_object(H, s) for s in modules)
    click.echo(f"dim Hom(X, Y[{j}]) = {H.hom(x, y, j).dim}")
    if j == 0:
        click.echo(f"dim stable Hom(X, Y) = {H.stable_hom(x, y).dim}")
        click.echo(f"dim costable Hom(X, Y) = {H.costable_hom(x, y).dim}")


def _warn_projective(x: HeartObject, what: str) -> bool:
    if x.flags.get("from_projective") or x.flags.get("from_injective"):
        click.echo(f"warning: input is {what}; the result is zero", err=True)
        return True
    return False


@main.command()
@_algebra_opt
@_field_opt
@_d_opt
@click.option("--module", required=True)
@click.option("--via", type=click.Choice(["nakayama", "sigma"]), default="nakayama")
def tau(algebra, field, d, module, via):
    """Auslander-Reiten translate of an object."""
    H = _heart(algebra, d, field)
    x = load_object(H, module)
    if via == "sigma":
        trace: list = []
        t = H.tau_sigma(x, trace)
        for kind, i, m in trace:
            if kind == "Sigma":
                s = H.member(m)
                click.echo(f"Sigma^{i} = {label_string(s) or '0'}")
    else:
        t = H.tau(x)
    _warn_projective(t, "projective")
    _show(t, "tau")


@main.command("tau-inverse")
@_algebra_opt
@_field_opt
@_d_opt
@click.option("--module", required=True)
def tau_inverse(algebra, field, d, module):
    """Inverse translate of an object."""
    H = _heart(algebra, d, field)
    x = load_object(H, module)
    t = H.tau_inverse(x)
    _warn_projective(t, "injective")
    _show(t, "tau^-1")


@main.command("decompose")
@_algebra_opt
@_field_opt
@_d_opt
@click.option("--module", required=True)
def decompose_(algebra, field, d, module):
    """Krull-Schmidt decomposition."""
    H = _heart(algebra, d, field)
    x = load_object(H, module)
    for y, k in decompose(x):
        click.echo(f"{k} x {label_string(y)}")


@main.command("almost-split")
@_algebra_opt
@_field_opt
@_d_opt
@click.option("--module", required=True)
@click.option("--verify", is_flag=True, help="check the almost-split property against a small corpus")
def almost_split(algebra, field, d, module, verify):
    """The almost-split conflation ending at an indecomposable non-projective object."""
    H = _heart(algebra, d, field)
    x = load_object(H, module)
    c = almost_split_conflation(x)
    mid = " + ".join((f"{k}x " if k > 1 else "") + f"({label_string(y)})" for y, k in decompose(c.middle))
    click.echo(f"left   {label_string(c.left)}")
    click.echo(f"middle {mid}")
    click.echo(f"right  {label_string(c.right)}")
    if verify:
        corpus = [c.left, c.right] + [y for y, _ in decompose(c.middle)]
        for v in H.algebra.vertices:
            corpus += [H.projective(v), H.injective(v), H.simple(v)]
        rep = verify_almost_split(c, corpus)
        click.echo("verify: ok" if rep.ok else "verify: FAILED " + "; ".join(rep.failures))
        if not rep.ok:
            sys.exit(EXIT_INVALID)


@main.command("knit")
@_algebra_opt
@_field_opt
@_d_opt
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--dot", type=click.Path(dir_okay=False), default=None)
@click.option("--max-objects", type=int, default=200, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--verify", is_flag=True, help="run the invariant report after knitting")
def knit_(algebra, field, d, out, dot, max_objects, workers, verify):
    """Knit the Auslander-Reiten quiver of the heart."""
    H = _heart(algebra, d, field)
    q = knit(H.algebra, d, max_objects=max_objects, workers=workers)
    data = emit_json(q)
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        click.echo(data.decode(), nl=False)
    if dot:
        with open(dot, "wb") as fh:
            fh.write(emit_dot(q))
    click.echo(f"{q.status}: {len(q.vertices)} vertices, {len(q.arrows)} arrows", err=True)
    if verify and q.status == "complete":
        rep = verify_quiver(q)
        bad = {k: v for k, v in rep.items() if v}
        for k in rep:
            click.echo(f"verify {k}: {'ok' if not rep[k] else f'{len(rep[k])} failures'}", err=True)
        if bad:
            sys.exit(EXIT_INVALID)
    if q.status != "complete":
        sys.exit(EXIT_BUDGET)


if __name__ == "__main__":  # pragma: no cover
    main()
