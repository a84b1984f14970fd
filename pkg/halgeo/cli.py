#! /usr/bin/env python3
# Copyright (c) 2024 by the halgeo authors
#
#    This file is part of halgeo.
#
#    halgeo is free software: you can redistribute it and/or modify
#    it under the terms of the GNU General Public License as published by
#    the Free Software Foundation, either version 3 of the License, or
#    (at your option) any later version.
#
#    halgeo is distributed in the hope that it will be useful,
#    but WITHOUT ANY WARRANTY; without even the implied warranty of
#    MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#    GNU General Public License for more details.
#
#    You should have received a copy of the GNU General Public License
#    long with halgeo. If not, see <http://www.gnu.org/licenses/>.

"""The `halgeo` command line.

Every command is a thin wrapper around a library operation. Exit codes are
0 on success, 1 for negative answers and failed internal cross-checks, and
2 for malformed input.
"""

import logging

import click

from .algebra import VarContext, aut_group
from .assets import load_reference
from .autgalois import aut_model
from .document import ModelDocument, parse_theory_lines
from .errors import HalgeoError, InvariantBreach
from .formula import apply_subst_formula, normalize_elementary, parse_formula, parse_substitution
from .galois import (
    closure_report,
    elementary_equiv_bounded,
    geometric_equiv_bounded,
    in_closure,
    rf_family,
)
from .geometry import Model, PointSet, PointSpace, eval_formula, semantic_support
from .knowledge import admissible_sets, kb_equivalent

logger = logging.getLogger(__name__)


class HalgeoGroup(click.Group):
    """Maps library errors onto exit codes."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except InvariantBreach as exception:
            click.echo(f"invariant breach: {exception}", err=True)
            ctx.exit(1)
        except HalgeoError as exception:
            click.echo(f"error: {exception}", err=True)
            ctx.exit(2)


def _instance(document: ModelDocument, instance: str | None) -> Model:
    multimodel = document.multimodel
    if instance is not None:
        return multimodel.instance(instance)
    if len(multimodel) != 1:
        raise click.UsageError(
            f"Model `{multimodel.name}` has {len(multimodel)} instances; choose one "
            f"with --instance or NAME:INSTANCE"
        )
    return multimodel.instance(multimodel.names[0])


def _context(text: str, model: Model) -> VarContext:
    context = VarContext.parse(text)
    context.check(model.signature)
    return context


def _indices(text: str) -> list[int]:
    tokens = text.replace(",", " ").split()
    if not all(token.isdigit() for token in tokens):
        raise click.BadParameter(f"expected point indices, got '{text}'")
    return [int(token) for token in tokens]


def _assignment(document: ModelDocument, context: VarContext, text: str) -> dict[str, int]:
    point = {}
    for chunk in filter(None, (part.strip() for part in text.replace(",", " ").split())):
        name, separator, element = chunk.partition("=")
        if not separator or name not in context:
            raise click.BadParameter(f"expected `variable=element`, got '{chunk}'")
        point[name] = document.element(context.sort_of(name), element)
    return point


def _echo_indices(label: str, a: PointSet) -> None:
    click.echo(" ".join([f"{label}:"] + [str(index) for index in a.indices()]))


def _format_point(point: dict[str, int]) -> str:
    return " ".join(f"{name}={value}" for name, value in point.items())


def _echo_flag(label: str, value: bool) -> None:
    click.echo(f"{label}: {'true' if value else 'false'}")
    if not value:
        raise click.exceptions.Exit(1)


_model_option = click.option(
    "--model", "-m", "reference", required=True, help="A model file or bundled model name."
)
_instance_option = click.option("--instance", "-i", default=None, help="The instance to use.")
_vars_option = click.option("--vars", "-x", "variables", default="", help="A context `x:s, y:s`.")


@click.group(cls=HalgeoGroup)
@click.option("--verbose", "-v", is_flag=True, help="Log the progress of the searches.")
@click.option("--jobs", "-j", default=1, type=click.IntRange(min=1), help="Parallel checks.")
@click.pass_context
def main(ctx: click.Context, verbose: bool, jobs: int):
    """Algebraic geometry of finite models and equivalence of knowledge bases."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = {"jobs": jobs}


@main.command("eval")
@_model_option
@_instance_option
@_vars_option
@click.option("--formula", "-f", required=True, help="The formula.")
def eval_command(reference: str, instance: str | None, variables: str, formula: str):
    """Print the points satisfying a formula."""
    model = _instance(load_reference(reference), instance)
    context = _context(variables, model)
    value = eval_formula(model, parse_formula(formula, context, model.signature))
    _echo_indices("indices", value)
    for point in value.points():
        click.echo(f"point: {_format_point(point)}")


@main.command()
@_model_option
@_instance_option
@_vars_option
@click.option("--points", "-p", default="", help="Point indices of the set.")
@click.option("--point", "assignments", multiple=True, help="A point `x=1,y=2`.")
@click.option("--budget", type=click.IntRange(min=0), default=None, help="Extra variables.")
def closure(
    reference: str,
    instance: str | None,
    variables: str,
    points: str,
    assignments: tuple[str, ...],
    budget: int | None,
):
    """Print the closure of a point set and the orbits it consists of."""
    document = load_reference(reference)
    model = _instance(document, instance)
    space = PointSpace(_context(variables, model), model.algebra)
    indices = _indices(points)
    indices += [
        space.point_index(_assignment(document, space.context, text)) for text in assignments
    ]
    report = closure_report(model, space.from_indices(indices), budget)
    _echo_indices("indices", report.value)
    for orbit in report.orbits:
        _echo_indices("orbit", orbit)
    if not report.converged:
        click.echo("warning: the definable family did not reach the orbits", err=True)


@main.command()
@_model_option
@_instance_option
def aut(reference: str, instance: str | None):
    """List the automorphisms of the algebra, or of one instance."""
    document = load_reference(reference)
    if instance is None:
        group = aut_group(document.multimodel.algebra)
    else:
        group = aut_model(document.multimodel.instance(instance))
    for delta in group:
        click.echo(delta.cycle_notation())


@main.command("kb-equiv")
@click.argument("first")
@click.argument("second")
@click.pass_context
def kb_equiv(ctx: click.Context, first: str, second: str):
    """Decide whether two knowledge bases are informationally equivalent."""
    kb1 = load_reference(first).multimodel
    kb2 = load_reference(second).multimodel
    witness = kb_equivalent(kb1, kb2, jobs=ctx.obj["jobs"])
    if witness is None:
        click.echo("verdict: NOT-EQUIVALENT")
        ctx.exit(1)
    click.echo("verdict: EQUIVALENT")
    for source, target in witness.alpha.items():
        click.echo(f"alpha: {source} -> {target}")
    for source, delta in witness.deltas.items():
        click.echo(f"delta[{source}]: {delta.cycle_notation()}")


@main.command("theory-closure-member")
@_model_option
@_instance_option
@_vars_option
@click.option("--theory", "-T", "formulas", multiple=True, help="A formula of the theory.")
@click.option("--candidate", "-c", required=True, help="The formula tested.")
def theory_closure_member(
    reference: str,
    instance: str | None,
    variables: str,
    formulas: tuple[str, ...],
    candidate: str,
):
    """Tell whether a formula lies in the closure of a theory."""
    model = _instance(load_reference(reference), instance)
    context = _context(variables, model)
    theory = parse_theory_lines(context, formulas, model.signature)
    member = in_closure(model, theory, parse_formula(candidate, context, model.signature))
    _echo_flag("member", member)


@main.command()
@_model_option
@_instance_option
@_vars_option
@click.option("--formula", "-f", required=True, help="The formula.")
def support(reference: str, instance: str | None, variables: str, formula: str):
    """Print the variables the value of a formula depends on."""
    model = _instance(load_reference(reference), instance)
    context = _context(variables, model)
    names = semantic_support(model, parse_formula(formula, context, model.signature))
    click.echo(" ".join(["support:"] + sorted(names)))


@main.command()
@_model_option
@_vars_option
@click.option("--formula", "-f", required=True, help="A formula over --vars.")
@click.option("--subst", "-s", default=None, help="A substitution `x := t` applied first.")
@click.option("--target", "-t", default="", help="The context of the substituted terms.")
def normalize(
    reference: str, variables: str, formula: str, subst: str | None, target: str
):
    """Push a substitution into a formula and print the elementary result."""
    signature = load_reference(reference).multimodel.signature
    context = VarContext.parse(variables)
    u = parse_formula(formula, context, signature)
    if subst is not None:
        target_context = VarContext.parse(target)
        target_context.check(signature)
        u = apply_subst_formula(parse_substitution(subst, context, target_context, signature), u)
    result = normalize_elementary(u)
    click.echo(f"vars: {result.context}")
    click.echo(f"formula: {result}")


@main.command()
@_model_option
@_instance_option
@click.option("--source", required=True, help="The context `Y` of the substituted variables.")
@click.option("--target", required=True, help="The context `X` of the terms.")
@click.option("--subst", "-s", required=True, help="The substitution `y := t`.")
@click.option("--set-a", "set_a", default="", help="Point indices of `A` over `X`.")
@click.option("--set-b", "set_b", default="", help="Point indices of `B` over `Y`.")
def admissible(
    reference: str,
    instance: str | None,
    source: str,
    target: str,
    subst: str,
    set_a: str,
    set_b: str,
):
    """Tell whether a substitution is admissible for two point sets."""
    model = _instance(load_reference(reference), instance)
    source_context = _context(source, model)
    target_context = _context(target, model)
    s = parse_substitution(subst, source_context, target_context, model.signature)
    a = PointSpace(target_context, model.algebra).from_indices(_indices(set_a))
    b = PointSpace(source_context, model.algebra).from_indices(_indices(set_b))
    _echo_flag("admissible", admissible_sets(model, s, a, b))


@main.command()
@_model_option
@_instance_option
@_vars_option
@click.option("--budget", type=click.IntRange(min=0), default=None, help="Extra variables.")
def rf(reference: str, instance: str | None, variables: str, budget: int | None):
    """Print the atoms of the family of definable sets."""
    model = _instance(load_reference(reference), instance)
    family = rf_family(model, _context(variables, model), budget)
    click.echo(f"sets: {len(family)}")
    for atom in family.atoms:
        _echo_indices("atom", atom)


@main.command("geo-equiv")
@click.argument("first")
@click.argument("second")
@click.option("--depth", "-d", type=click.IntRange(min=0), default=None, help="Term depth.")
@click.option("--context-bound", type=click.IntRange(min=1), default=None)
@click.option("--theory-bound", type=click.IntRange(min=0), default=None)
@click.pass_context
def geo_equiv(
    ctx: click.Context,
    first: str,
    second: str,
    depth: int | None,
    context_bound: int | None,
    theory_bound: int | None,
):
    """Search for a theory whose closures differ in two models."""
    m1 = _instance(load_reference(first), None)
    m2 = _instance(load_reference(second), None)
    verdict = geometric_equiv_bounded(
        m1, m2, context_bound=context_bound, depth_bound=depth, theory_bound=theory_bound
    )
    click.echo(f"verdict: {verdict.verdict}")
    click.echo(f"theories: {verdict.theories_checked}")
    if not verdict.disagrees:
        return
    click.echo(f"context: {verdict.context}")
    click.echo(f"theory: {verdict.theory}")
    click.echo(f"candidate: {verdict.candidate}")
    click.echo(f"in-first: {'true' if verdict.in_first else 'false'}")
    click.echo(f"in-second: {'true' if verdict.in_second else 'false'}")
    ctx.exit(1)


@main.command("elem-equiv")
@click.argument("first")
@click.argument("second")
@click.option("--depth", "-d", type=click.IntRange(min=0), default=None, help="Term depth.")
@click.option("--context-bound", type=click.IntRange(min=1), default=None)
@click.pass_context
def elem_equiv(
    ctx: click.Context, first: str, second: str, depth: int | None, context_bound: int | None
):
    """Search for a sentence that holds in exactly one of two models."""
    m1 = _instance(load_reference(first), None)
    m2 = _instance(load_reference(second), None)
    verdict = elementary_equiv_bounded(
        m1, m2, context_bound=context_bound, depth_bound=depth
    )
    click.echo(f"verdict: {verdict.verdict}")
    click.echo(f"sentences: {verdict.sentences_checked}")
    if not verdict.disagrees:
        return
    click.echo(f"sentence: {verdict.sentence}")
    click.echo(f"in-first: {'true' if verdict.holds_in_first else 'false'}")
    click.echo(f"in-second: {'true' if verdict.holds_in_second else 'false'}")
    ctx.exit(1)
