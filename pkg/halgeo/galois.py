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

"""The Galois correspondence between theories and point sets.

A theory `T` over `X` has the value `T^f`, the points satisfying all of its
formulas. A point set `A` determines the filter `A^f` of formulas holding on
all of `A`; the filter is infinite and only exposed as membership test. Its
value `A^ff` is the closure of `A`.
"""

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
import functools
import itertools
import logging
import math

import numpy as np

from .algebra import Term, VarContext
from .autgalois import aut_model, invariant_sets
from .config import DEFAULT_BOUNDS, Bounds
from .errors import ContextError, InvariantBreach
from .formula import And, Exists, Formula, Not, Rel, TypedFormula
from .geometry import (
    DefinableFamily,
    Model,
    PointSet,
    PointSpace,
    canonical_labels,
    eval_formula,
    refine_labels,
    term_values,
)
from .sampling import contexts_up_to, enumerate_atoms, enumerate_terms
from .util import FreshNames

logger = logging.getLogger(__name__)


class Theory:
    """A finite list of formulas over one context.

    :param context: The context `X`.
    :param formulas: Formulas typed over `X`.
    """

    def __init__(self, context: VarContext, formulas: Iterable[TypedFormula] = ()):
        formulas = tuple(formulas)
        for formula in formulas:
            if formula.context != context:
                raise ContextError(
                    f"Formula `{formula}` lives over {{{formula.context}}}, "
                    f"the theory over {{{context}}}"
                )
        self._context = context
        self._formulas = formulas

    @property
    def context(self) -> VarContext:
        """
        :returns: The context of the theory.
        """
        return self._context

    @property
    def formulas(self) -> tuple[TypedFormula, ...]:
        """
        :returns: The formulas in their given order.
        """
        return self._formulas

    def with_formula(self, formula: TypedFormula) -> "Theory":
        """
        :param formula: A formula over the same context.
        :returns: The theory with the formula appended.
        """
        return Theory(self._context, self._formulas + (formula,))

    def __iter__(self) -> Iterator[TypedFormula]:
        return iter(self._formulas)

    def __len__(self) -> int:
        return len(self._formulas)

    def __contains__(self, formula: object) -> bool:
        return formula in self._formulas

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Theory):
            return NotImplemented
        return (self._context, self._formulas) == (other.context, other.formulas)

    def __hash__(self) -> int:
        return hash((self._context, self._formulas))

    def __str__(self) -> str:
        return "{" + "; ".join(str(formula) for formula in self._formulas) + "}"


def theory_value(model: Model, theory: Theory, bounds: Bounds | None = None) -> PointSet:
    """
    :param model: The model.
    :param theory: A theory.
    :returns: `T^f`, the intersection of the values; the full space for `T = {}`.
    """
    value = PointSpace(theory.context, model.algebra, bounds).full()
    for formula in theory:
        value = value & eval_formula(model, formula, bounds)
    return value


def _same_context(a: PointSet, u: TypedFormula) -> None:
    if a.context != u.context:
        raise ContextError(
            f"Set over {{{a.context}}} compared with a formula over {{{u.context}}}"
        )


def in_set_theory(model: Model, a: PointSet, u: TypedFormula) -> bool:
    """
    :param model: The model.
    :param a: A point set.
    :param u: A formula over the context of `A`.
    :returns: Whether `u` belongs to `A^f`, that is `A <= Val_f(u)`.
    """
    _same_context(a, u)
    return a.issubset(eval_formula(model, u, a.space.bounds))


def in_closure(
    model: Model, theory: Theory, v: TypedFormula, bounds: Bounds | None = None
) -> bool:
    """
    :param model: The model.
    :param theory: A theory `T`.
    :param v: A formula over the context of `T`.
    :returns: Whether `v` belongs to `T^ff`, that is `T^f <= Val_f(v)`.
    """
    if v.context != theory.context:
        raise ContextError(
            f"Formula over {{{v.context}}} tested against a theory over {{{theory.context}}}"
        )
    return theory_value(model, theory, bounds).issubset(eval_formula(model, v, bounds))


def _fiber_classes(labels: np.ndarray, shape: tuple[int, ...], axes: Sequence[int]) -> np.ndarray:
    """Group the fibers along the given axes by the set of block labels they meet.

    :returns: One class per fiber, in C order of the remaining axes.
    """
    count = int(labels.max()) + 1
    kept = [axis for axis in range(len(shape)) if axis not in axes]
    fiber = math.prod(shape[axis] for axis in axes)
    rows = np.transpose(labels.reshape(shape), kept + list(axes)).reshape(-1, fiber)
    presence = np.zeros((len(rows), count), dtype=bool)
    presence[np.repeat(np.arange(len(rows)), fiber), rows.ravel()] = True
    _, classes = np.unique(presence, axis=0, return_inverse=True)
    return classes.ravel()


def _spread(classes: np.ndarray, shape: tuple[int, ...], axis: int) -> np.ndarray:
    view = list(shape)
    view[axis] = 1
    return np.broadcast_to(classes.reshape(view), shape).ravel()


def _atom_labels(model: Model, space: PointSpace, term_depth: int) -> tuple[np.ndarray, int]:
    """Partition a space by the truth values of all atomic formulas."""
    sig = model.signature
    terms = enumerate_terms(sig, space.context, term_depth)
    values: dict[str, list[np.ndarray]] = {}
    for sort, sort_terms in terms.items():
        unique: dict[bytes, np.ndarray] = {}
        for term in sort_terms:
            value = np.broadcast_to(term_values(model.algebra, term, space), space.shape)
            unique.setdefault(value.tobytes(), np.ascontiguousarray(value).ravel())
        values[sort] = list(unique.values())
    columns = []
    atom_count = 0
    for rel in sig.rels:
        table = model.relation_array(rel.name)
        for args in itertools.product(*(values[sort] for sort in rel.arg_sorts)):
            columns.append(table[args])
            atom_count += 1
    for sort in sig.sorts:
        rows = values[sort]
        for index, row in enumerate(rows):
            if not index:
                continue
            earlier = np.stack(rows[:index])
            equal = earlier == row
            columns.append(np.where(equal.any(axis=0), equal.argmax(axis=0), index))
            atom_count += index
    labels = np.zeros(space.size, dtype=np.intp)
    for start in range(0, len(columns), 256):
        labels = refine_labels(labels, np.column_stack(columns[start : start + 256]))
    return labels, atom_count


def _effective_budget(model: Model, context: VarContext, budget: int, bounds: Bounds) -> int:
    base = PointSpace(context, model.algebra, bounds).size
    per_round = 1
    for sort in model.signature.sorts:
        per_round *= model.algebra.carrier(sort)
    while budget > 0 and base * per_round**budget > bounds.max_points:
        budget -= 1
    return budget


@functools.lru_cache(maxsize=128)
def _rf_family(model: Model, context: VarContext, budget: int, bounds: Bounds) -> DefinableFamily:
    reduced = _effective_budget(model, context, budget, bounds)
    if reduced < budget:
        logger.warning(
            "Reduced the extra-variable budget from %d to %d to stay below %d points",
            budget,
            reduced,
            bounds.max_points,
        )
    fresh = FreshNames(context.names)
    extra = [(fresh.take(), sort) for sort in model.signature.sorts for _ in range(reduced)]
    enlarged = context.extend(extra)
    space = PointSpace(enlarged, model.algebra, bounds)
    labels, atom_count = _atom_labels(model, space, bounds.term_depth)
    logger.debug(
        "Atomic formulas over {%s}: %d, giving %d blocks", enlarged, atom_count, labels.max() + 1
    )
    while True:
        before = int(labels.max()) + 1
        for axis in range(len(enlarged)):
            classes = _fiber_classes(labels, space.shape, [axis])
            labels = refine_labels(labels, _spread(classes, space.shape, axis))
        if int(labels.max()) + 1 == before:
            break
    target = PointSpace(context, model.algebra, bounds)
    if extra:
        fresh_axes = [enlarged.index(name) for name, _ in extra]
        projected = canonical_labels(_fiber_classes(labels, space.shape, fresh_axes))
    else:
        projected = labels
    family = DefinableFamily(
        target, projected, f"definable sets with {reduced} extra variables per sort"
    )
    logger.debug("Definable family over {%s} has %d atoms", context, family.atom_count)

    return family


def rf_family(
    model: Model,
    context: VarContext,
    budget: int | None = None,
    bounds: Bounds | None = None,
) -> DefinableFamily:
    """The family `R_f(X)` of sets definable by a single formula.

    Atomic formulas with terms up to the configured depth are evaluated over
    `X` enlarged by `budget` extra variables per sort; the Boolean algebra
    they generate is closed under every quantifier, and the sets whose
    cylinder lies in it are projected back to `X`. The family is returned
    through its atoms.

    :param model: A finite model.
    :param context: The context `X`.
    :param budget: The number of extra variables per sort, the largest
                   carrier by default.
    :param bounds: Supplies the term depth and the size limit.
    :returns: The definable family over `X`.
    """
    bounds = bounds or DEFAULT_BOUNDS
    if budget is None:
        budget = max(model.algebra.carrier(sort) for sort in model.signature.sorts)
    return _rf_family(model, context, budget, bounds)


@dataclass
class ClosureReport:
    """The data behind a closure `A^ff`."""

    value: PointSet
    orbits: list[PointSet]
    rf_value: PointSet
    converged: bool


def closure_report(
    model: Model, a: PointSet, budget: int | None = None
) -> ClosureReport:
    """Compute `A^ff` by orbits and cross-check it against the definable family.

    :param model: A finite model.
    :param a: A point set.
    :param budget: The extra-variable budget of the definable family.
    :returns: The closure with the orbits that make it up.
    """
    group = aut_model(model)
    invariant = invariant_sets(group, a.space)
    value = invariant.least_superset(a)
    orbits = [orbit for orbit in invariant.atoms if not (orbit & a).is_empty]
    family = rf_family(model, a.context, budget, a.space.bounds)
    rf_value = family.least_superset(a)
    if family.atom_count > invariant.atom_count:
        raise InvariantBreach(
            f"Definable family over {{{a.context}}} has {family.atom_count} atoms, "
            f"more than the {invariant.atom_count} orbits"
        )
    converged = family.atom_count == invariant.atom_count
    if converged and rf_value != value:
        raise InvariantBreach(
            f"Closure by orbits {value.indices()} differs from the definable "
            f"closure {rf_value.indices()}"
        )
    if not converged:
        logger.warning(
            "Definable family over {%s} has %d atoms but there are %d orbits; "
            "increase the budget",
            a.context,
            family.atom_count,
            invariant.atom_count,
        )
    return ClosureReport(value, orbits, rf_value, converged)


def set_closure(model: Model, a: PointSet, budget: int | None = None) -> PointSet:
    """
    :param model: A finite model.
    :param a: A point set.
    :param budget: The extra-variable budget of the cross-check.
    :returns: `A^ff`, the least invariant definable superset of `A`.
    """
    return closure_report(model, a, budget).value


def closed_sets(
    model: Model, context: VarContext, bounds: Bounds | None = None
) -> DefinableFamily:
    """
    :param model: A finite model.
    :param context: The context `X`.
    :returns: The lattice of algebraic sets over `X`, as the invariant sets of `Aut(f)`.
    """
    return invariant_sets(aut_model(model), PointSpace(context, model.algebra, bounds))


def noetherian_reduce(model: Model, theory: Theory, bounds: Bounds | None = None) -> Theory:
    """
    :param model: A finite model.
    :param theory: A theory `T`.
    :returns: The formulas of `T` that strictly shrink the running
              intersection, scanned left to right; its value is `T^f`.
    """
    running = PointSpace(theory.context, model.algebra, bounds).full()
    kept = []
    for formula in theory:
        narrowed = running & eval_formula(model, formula, bounds)
        if narrowed != running:
            kept.append(formula)
            running = narrowed
    return Theory(theory.context, kept)


def alv_meet(a: PointSet, b: PointSet) -> PointSet:
    """
    :param a: A closed set.
    :param b: A closed set of the same space.
    :returns: `A & B`, again closed.
    """
    if a.space != b.space:
        raise ContextError("Point sets live in different spaces")
    return a & b


def alv_join(model: Model, a: PointSet, b: PointSet) -> PointSet:
    """
    :param model: A finite model.
    :param a: A point set.
    :param b: A point set of the same space.
    :returns: The closure of `A | B`.
    """
    if a.space != b.space:
        raise ContextError("Point sets live in different spaces")
    return set_closure(model, a | b)


def regular_functions(model: Model, a: PointSet, budget: int | None = None) -> DefinableFamily:
    """The definable sets traced on `A`, standing for the characteristic
    functions of formulas modulo `A^f`.

    :param model: A finite model.
    :param a: A point set.
    :param budget: The extra-variable budget.
    :returns: The Boolean algebra `{B & A}` with unit `A`.
    """
    return rf_family(model, a.context, budget, a.space.bounds).restrict(a)


DISAGREE = "DISAGREE"
NO_DISAGREEMENT = "NO-DISAGREEMENT-UP-TO-BOUNDS"


@dataclass
class GeometricVerdict:
    """The outcome of a bounded comparison of two closure operators."""

    verdict: str
    context: VarContext | None = None
    theory: Theory | None = None
    candidate: TypedFormula | None = None
    in_first: bool | None = None
    in_second: bool | None = None
    theories_checked: int = 0

    @property
    def disagrees(self) -> bool:
        """
        :returns: Whether a disagreement was found.
        """
        return self.verdict == DISAGREE


def _same_relations(m1: Model, m2: Model) -> None:
    if m1.signature != m2.signature:
        raise ContextError("The models do not share their signature")


def _literals(
    m1: Model, m2: Model, context: VarContext, depth: int, bounds: Bounds
) -> tuple[list[TypedFormula], np.ndarray, np.ndarray]:
    """Atoms and negated atoms over a context, deduplicated by their values in both models.

    Terms are deduplicated first, keeping the smallest representative.
    """
    sig = m1.signature
    space1 = PointSpace(context, m1.algebra, bounds)
    space2 = PointSpace(context, m2.algebra, bounds)
    representatives = {}
    for sort, terms in enumerate_terms(sig, context, depth).items():
        for term in terms:
            key = (
                sort,
                np.broadcast_to(term_values(m1.algebra, term, space1), space1.shape).tobytes(),
                np.broadcast_to(term_values(m2.algebra, term, space2), space2.shape).tobytes(),
            )
            representatives.setdefault(key, term)
    kept_terms = set(representatives.values())
    atoms = [
        atom
        for atom in enumerate_atoms(sig, context, depth)
        if _terms_of(atom) <= kept_terms
    ]
    formulas: list[TypedFormula] = []
    first_rows, second_rows = [], []
    seen = set()
    for body in atoms + [Not(atom) for atom in atoms]:
        u = TypedFormula(context, body)
        first = eval_formula(m1, u, bounds).bits.ravel()
        second = eval_formula(m2, u, bounds).bits.ravel()
        key = (first.tobytes(), second.tobytes())
        if key in seen:
            continue
        seen.add(key)
        formulas.append(u)
        first_rows.append(first)
        second_rows.append(second)
    shape1 = (0, space1.size)
    shape2 = (0, space2.size)
    first_matrix = np.stack(first_rows) if first_rows else np.zeros(shape1, dtype=bool)
    second_matrix = np.stack(second_rows) if second_rows else np.zeros(shape2, dtype=bool)
    return formulas, first_matrix, second_matrix


def _terms_of(atom: Formula) -> set[Term]:
    if isinstance(atom, Rel):
        return set(atom.args)
    return {atom.lhs, atom.rhs}


def geometric_equiv_bounded(
    m1: Model,
    m2: Model,
    context_bound: int | None = None,
    depth_bound: int | None = None,
    theory_bound: int | None = None,
    bounds: Bounds | None = None,
) -> GeometricVerdict:
    """Search for a theory whose closures differ in two models.

    Contexts `x`, `x, y`, ... up to `context_bound` variables are visited in
    order. The formulas are the atoms with terms up to `depth_bound` and
    their negations, relation atoms first; theories are their subsets of up
    to `theory_bound` formulas, smallest first. A disagreement is a theory
    `T` and a formula `v` lying in `T^ff` for one model only. Finding none
    says nothing beyond the bounds.

    :param m1: The first model.
    :param m2: The second model over the same signature.
    :param context_bound: The largest context.
    :param depth_bound: The largest term depth.
    :param theory_bound: The largest theory.
    :param bounds: Supplies the defaults and the size limit.
    :returns: The verdict with the first witness found.
    """
    _same_relations(m1, m2)
    bounds = bounds or DEFAULT_BOUNDS
    context_bound = bounds.context_bound if context_bound is None else context_bound
    depth_bound = bounds.term_depth if depth_bound is None else depth_bound
    theory_bound = bounds.theory_bound if theory_bound is None else theory_bound
    checked = 0
    for context in contexts_up_to(m1.signature, context_bound):
        formulas, first, second = _literals(m1, m2, context, depth_bound, bounds)
        logger.debug("Comparing closures over {%s} with %d formulas", context, len(formulas))
        for size in range(theory_bound + 1):
            for members in itertools.combinations(range(len(formulas)), size):
                checked += 1
                value1 = first[list(members)].all(axis=0)
                value2 = second[list(members)].all(axis=0)
                closed1 = ~(value1 & ~first).any(axis=1)
                closed2 = ~(value2 & ~second).any(axis=1)
                differing = np.flatnonzero(closed1 != closed2)
                if len(differing):
                    candidate = int(differing[0])
                    return GeometricVerdict(
                        DISAGREE,
                        context,
                        Theory(context, (formulas[index] for index in members)),
                        formulas[candidate],
                        bool(closed1[candidate]),
                        bool(closed2[candidate]),
                        checked,
                    )
    return GeometricVerdict(NO_DISAGREEMENT, theories_checked=checked)


@dataclass
class ElementaryVerdict:
    """The outcome of a bounded search for a sentence telling two models apart."""

    verdict: str
    sentence: TypedFormula | None = None
    holds_in_first: bool | None = None
    holds_in_second: bool | None = None
    sentences_checked: int = 0

    @property
    def disagrees(self) -> bool:
        """
        :returns: Whether a separating sentence was found.
        """
        return self.verdict == DISAGREE


def _close_over(context: VarContext, body: Formula) -> Formula:
    for name in reversed(context.names):
        body = Exists(name, body)
    return body


def elementary_equiv_bounded(
    m1: Model,
    m2: Model,
    context_bound: int | None = None,
    depth_bound: int | None = None,
    bounds: Bounds | None = None,
) -> ElementaryVerdict:
    """Search for a sentence `E X. (l1 & l2)` true in exactly one model.

    `l1` and `l2` range over the atoms and negated atoms of
    :func:`geometric_equiv_bounded`. A sentence is represented over `X` with
    every variable bound; it holds when its value is the full space.

    :param m1: The first model.
    :param m2: The second model over the same signature.
    :param context_bound: The largest context.
    :param depth_bound: The largest term depth.
    :param bounds: Supplies the defaults and the size limit.
    :returns: The verdict with the first separating sentence.
    """
    _same_relations(m1, m2)
    bounds = bounds or DEFAULT_BOUNDS
    context_bound = bounds.context_bound if context_bound is None else context_bound
    depth_bound = bounds.term_depth if depth_bound is None else depth_bound
    checked = 0
    for context in contexts_up_to(m1.signature, context_bound):
        formulas, first, second = _literals(m1, m2, context, depth_bound, bounds)
        for i, j in itertools.combinations_with_replacement(range(len(formulas)), 2):
            checked += 1
            holds1 = bool((first[i] & first[j]).any())
            holds2 = bool((second[i] & second[j]).any())
            if holds1 != holds2:
                body = formulas[i].body if i == j else And(formulas[i].body, formulas[j].body)
                return ElementaryVerdict(
                    DISAGREE,
                    TypedFormula(context, _close_over(context, body)),
                    holds1,
                    holds2,
                    checked,
                )
    return ElementaryVerdict(NO_DISAGREEMENT, sentences_checked=checked)


def transfer_closed_set(
    m1: Model,
    m2: Model,
    a: PointSet,
    depth: int | None = None,
) -> PointSet:
    """Carry a set of the first model to the second through its quantifier-free theory.

    A point of the second model belongs to the result when its truth values
    on the atomic formulas occur on some point of `A` in the first model.

    :param m1: The model `A` lives in.
    :param m2: A model over the same signature.
    :param a: A point set over `X` in the first model.
    :param depth: The largest term depth of the atoms.
    :returns: `A^{f1 f2}` over `X` in the second model.
    """
    _same_relations(m1, m2)
    bounds = a.space.bounds
    depth = bounds.term_depth if depth is None else depth
    target = PointSpace(a.context, m2.algebra, bounds)
    atoms = enumerate_atoms(m1.signature, a.context, depth)
    if not atoms:
        return target.full() if not a.is_empty else target.empty()
    first = np.stack(
        [eval_formula(m1, TypedFormula(a.context, atom), bounds).bits.ravel() for atom in atoms]
    )
    second = np.stack(
        [eval_formula(m2, TypedFormula(a.context, atom), bounds).bits.ravel() for atom in atoms]
    )
    profiles = {column.tobytes() for column in first[:, a.bits.ravel()].T}
    flat = np.array([column.tobytes() in profiles for column in second.T], dtype=bool)
    return PointSet(target, flat.reshape(target.shape))
