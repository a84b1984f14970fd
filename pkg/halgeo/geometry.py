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

"""Point spaces, point sets and the evaluation of formulas in a model.

A point of the space over a context `X` is an assignment of elements to the
variables of `X`. A point set is a boolean array with one axis per variable
of the context, in context order, so the C-order flat index of a point is its
mixed-radix index with the first variable most significant.
"""

from collections.abc import Iterable, Iterator, Mapping, Sequence
import functools
import itertools
import logging
import math

import numpy as np

from .algebra import (
    App,
    FiniteAlgebra,
    Signature,
    Substitution,
    Term,
    Var,
    VarContext,
    eval_term,
    validate_algebra,
)
from .config import DEFAULT_BOUNDS, Bounds
from .errors import ContextError, SortError, SpaceTooLargeError
from .formula import (
    And,
    Equal,
    Exists,
    Formula,
    Not,
    Or,
    Rel,
    SubstApp,
    TypedFormula,
    check_formula,
)
from .util import ValidationReport, mixed_radix_digits, mixed_radix_index

logger = logging.getLogger(__name__)

Point = Mapping[str, int]
"""An assignment of elements to the variables of a context."""


class Model:
    """A finite algebra with an interpretation of the relation symbols.

    Relation symbols without an entry in `interp` are interpreted as empty.

    :param algebra: The algebra `G`; its signature supplies the relation symbols.
    :param interp: For every relation symbol the set of tuples it holds on.
    :param name: An optional instance name, used in reports.
    """

    def __init__(
        self,
        algebra: FiniteAlgebra,
        interp: Mapping[str, Iterable[tuple[int, ...]]],
        name: str = "",
    ):
        self._algebra = algebra
        self._interp = {
            rel: frozenset(tuple(int(e) for e in entry) for entry in interp.get(rel, ()))
            for rel in (symbol.name for symbol in algebra.signature.rels)
        }
        self._extra = sorted(set(interp) - set(self._interp))
        self._name = name
        self._arrays: dict[str, np.ndarray] = {}
        self._key = (
            algebra,
            tuple((rel, tuple(sorted(entries))) for rel, entries in self._interp.items()),
        )

    @property
    def algebra(self) -> FiniteAlgebra:
        """
        :returns: The algebra `G`.
        """
        return self._algebra

    @property
    def signature(self) -> Signature:
        """
        :returns: The signature including the relation symbols.
        """
        return self._algebra.signature

    @property
    def unknown_relations(self) -> list[str]:
        """
        :returns: Names in the interpretation that the signature does not declare.
        """
        return list(self._extra)

    @property
    def name(self) -> str:
        """
        :returns: The instance name, empty if the model is anonymous.
        """
        return self._name

    @property
    def interp(self) -> dict[str, frozenset[tuple[int, ...]]]:
        """
        :returns: The tuples of every relation symbol.
        """
        return dict(self._interp)

    def relation(self, name: str) -> frozenset[tuple[int, ...]]:
        """
        :param name: A relation symbol.
        :returns: The tuples the relation holds on.
        """
        if name not in self._interp:
            raise SortError(f"Unknown relation symbol `{name}`")
        return self._interp[name]

    def relation_array(self, name: str) -> np.ndarray:
        """
        :param name: A relation symbol.
        :returns: The relation as read-only boolean array indexed by its arguments.
        """
        if name in self._arrays:
            return self._arrays[name]
        symbol = self.signature.rel(name)
        shape = tuple(self._algebra.carrier(sort) for sort in symbol.arg_sorts)
        array = np.zeros(shape, dtype=bool)
        for entry in self.relation(name):
            array[entry] = True
        array.flags.writeable = False
        self._arrays[name] = array

        return array

    def renamed(self, name: str) -> "Model":
        """
        :param name: The new instance name.
        :returns: The same model under another name.
        """
        return Model(self._algebra, self._interp, name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Model):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Model({self._name or '<anonymous>'}, {self._interp!r})"


def validate_model(model: Model) -> ValidationReport:
    """
    :param model: A model.
    :returns: The violations of the algebra and of the relation tuples.
    """
    report = validate_algebra(model.algebra)
    for name in model.unknown_relations:
        report.add(f"rel {name}", "unknown relation")
    if not report.ok:
        return report
    for symbol in model.signature.rels:
        location = f"rel {symbol.name}"
        sizes = [model.algebra.carrier(sort) for sort in symbol.arg_sorts]
        for entry in sorted(model.relation(symbol.name)):
            if len(entry) != symbol.arity:
                report.add(location, "tuple arity mismatch")
            elif any(not 0 <= e < size for e, size in zip(entry, sizes)):
                report.add(location, "element out of range")

    return report


class PointSpace:
    """The affine space `Hom(W(X), G)` of all assignments `X -> G`.

    :param context: The context `X`.
    :param algebra: The algebra `G`.
    :param bounds: Supplies the largest accepted number of points.
    """

    def __init__(self, context: VarContext, algebra: FiniteAlgebra, bounds: Bounds | None = None):
        self._context = context
        self._algebra = algebra
        self._bounds = bounds or DEFAULT_BOUNDS
        self._shape = tuple(algebra.carrier(sort) for _, sort in context.pairs)
        self._size = math.prod(self._shape)
        if self._size > self._bounds.max_points:
            raise SpaceTooLargeError(
                f"The space over {{{context}}} has {self._size} points, "
                f"more than the limit of {self._bounds.max_points}"
            )

    @property
    def context(self) -> VarContext:
        """
        :returns: The context `X`.
        """
        return self._context

    @property
    def algebra(self) -> FiniteAlgebra:
        """
        :returns: The algebra `G`.
        """
        return self._algebra

    @property
    def bounds(self) -> Bounds:
        """
        :returns: The bounds the space was created with.
        """
        return self._bounds

    @property
    def shape(self) -> tuple[int, ...]:
        """
        :returns: The carrier size of every variable, in context order.
        """
        return self._shape

    @property
    def size(self) -> int:
        """
        :returns: The number of points.
        """
        return self._size

    def coordinates(self, name: str) -> np.ndarray:
        """
        :param name: A variable of the context.
        :returns: The value of the variable at every point.
        """
        axis = self._context.index(name)
        view = [1] * len(self._shape)
        view[axis] = self._shape[axis]
        values = np.arange(self._shape[axis]).reshape(view)
        return np.broadcast_to(values, self._shape)

    def point_index(self, point: Point) -> int:
        """
        :param point: A point of the space.
        :returns: Its mixed-radix index.
        """
        digits = []
        for (name, _), size in zip(self._context.pairs, self._shape):
            if name not in point:
                raise ContextError(f"The point has no value for `{name}`")
            value = point[name]
            if not 0 <= value < size:
                raise ContextError(f"Value {value} of `{name}` is out of range")
            digits.append(value)
        return mixed_radix_index(digits, self._shape)

    def index_point(self, index: int) -> dict[str, int]:
        """
        :param index: An index below :attr:`size`.
        :returns: The point with that index.
        """
        if not 0 <= index < self._size:
            raise ContextError(f"Index {index} is outside the space of {self._size} points")
        digits = mixed_radix_digits(index, self._shape)
        return dict(zip(self._context.names, digits))

    def points(self) -> Iterator[dict[str, int]]:
        """
        :returns: All points in index order.
        """
        names = self._context.names
        for digits in itertools.product(*(range(size) for size in self._shape)):
            yield dict(zip(names, digits))

    def empty(self) -> "PointSet":
        """
        :returns: The empty set of the space.
        """
        return PointSet(self, np.zeros(self._shape, dtype=bool))

    def full(self) -> "PointSet":
        """
        :returns: The set of all points.
        """
        return PointSet(self, np.ones(self._shape, dtype=bool))

    def from_indices(self, indices: Iterable[int]) -> "PointSet":
        """
        :param indices: Point indices.
        :returns: The set of the points with these indices.
        """
        flat = np.zeros(self._size, dtype=bool)
        for index in indices:
            if not 0 <= index < self._size:
                raise ContextError(
                    f"Index {index} is outside the space of {self._size} points"
                )
            flat[index] = True
        return PointSet(self, flat.reshape(self._shape))

    def from_points(self, points: Iterable[Point]) -> "PointSet":
        """
        :param points: Points of the space.
        :returns: The set of these points.
        """
        return self.from_indices(self.point_index(point) for point in points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSpace):
            return NotImplemented
        return self._context == other.context and self._algebra == other.algebra

    def __hash__(self) -> int:
        return hash((self._context, self._algebra))

    def __repr__(self) -> str:
        return f"PointSpace({{{self._context}}}, size={self._size})"


def point_index(space: PointSpace, point: Point) -> int:
    """
    :param space: A point space.
    :param point: A point of the space.
    :returns: The mixed-radix index of the point.
    """
    return space.point_index(point)


def index_point(space: PointSpace, index: int) -> dict[str, int]:
    """
    :param space: A point space.
    :param index: A point index.
    :returns: The point with that index.
    """
    return space.index_point(index)


class PointSet:
    """A subset of a point space.

    :param space: The point space.
    :param bits: A boolean array of the shape of the space.
    """

    def __init__(self, space: PointSpace, bits: np.ndarray):
        bits = np.array(bits, dtype=bool)
        if bits.shape != space.shape:
            raise ContextError(
                f"Bits of shape {bits.shape} do not fit the space of shape {space.shape}"
            )
        bits.flags.writeable = False
        self._space = space
        self._bits = bits

    @property
    def space(self) -> PointSpace:
        """
        :returns: The point space.
        """
        return self._space

    @property
    def context(self) -> VarContext:
        """
        :returns: The context of the space.
        """
        return self._space.context

    @property
    def bits(self) -> np.ndarray:
        """
        :returns: The read-only membership array.
        """
        return self._bits

    def indices(self) -> list[int]:
        """
        :returns: The indices of the members, ascending.
        """
        return [int(index) for index in np.flatnonzero(self._bits.ravel())]

    def points(self) -> list[dict[str, int]]:
        """
        :returns: The members in index order.
        """
        return [self._space.index_point(index) for index in self.indices()]

    @property
    def is_empty(self) -> bool:
        """
        :returns: Whether the set has no members.
        """
        return not self._bits.any()

    @property
    def is_full(self) -> bool:
        """
        :returns: Whether the set is the whole space.
        """
        return bool(self._bits.all())

    def issubset(self, other: "PointSet") -> bool:
        """
        :param other: A set of the same space.
        :returns: Whether every member is a member of `other`.
        """
        self._check(other)
        return not (self._bits & ~other.bits).any()

    def _check(self, other: "PointSet") -> None:
        if not isinstance(other, PointSet) or other.space != self._space:
            raise ContextError("Point sets live in different spaces")

    def __contains__(self, point: object) -> bool:
        if isinstance(point, Mapping):
            return bool(self._bits.ravel()[self._space.point_index(point)])
        return bool(self._bits.ravel()[int(point)])

    def __len__(self) -> int:
        return int(self._bits.sum())

    def __or__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self._space, self._bits | other.bits)

    def __and__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self._space, self._bits & other.bits)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self._space, self._bits & ~other.bits)

    def __invert__(self) -> "PointSet":
        return PointSet(self._space, ~self._bits)

    def __le__(self, other: "PointSet") -> bool:
        return self.issubset(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self._space == other.space and np.array_equal(self._bits, other.bits)

    def __hash__(self) -> int:
        return hash((self._space, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"PointSet({{{self.context}}}, {self.indices()})"


def term_values(algebra: FiniteAlgebra, term: Term, space: PointSpace) -> np.ndarray:
    """Evaluate a term at every point of a space at once.

    :param algebra: The algebra.
    :param term: A term over the context of the space.
    :param space: The point space.
    :returns: An integer array of the shape of the space.
    """
    if isinstance(term, Var):
        return space.coordinates(term.name)
    if not isinstance(term, App):
        raise TypeError(f"Not a term: {term!r}")
    table = algebra.table_array(term.op)
    if not term.args:
        return np.full(space.shape, table[()], dtype=np.intp)
    args = tuple(term_values(algebra, arg, space) for arg in term.args)
    return np.broadcast_to(table[args], space.shape)


def _exists_bits(bits: np.ndarray, axis: int) -> np.ndarray:
    return np.broadcast_to(bits.any(axis=axis, keepdims=True), bits.shape)


def _value(model: Model, body: Formula, space: PointSpace) -> np.ndarray:
    if isinstance(body, Equal):
        algebra = model.algebra
        return term_values(algebra, body.lhs, space) == term_values(algebra, body.rhs, space)
    if isinstance(body, Rel):
        args = tuple(term_values(model.algebra, arg, space) for arg in body.args)
        return np.broadcast_to(model.relation_array(body.name)[args], space.shape)
    if isinstance(body, Or):
        return _value(model, body.left, space) | _value(model, body.right, space)
    if isinstance(body, And):
        return _value(model, body.left, space) & _value(model, body.right, space)
    if isinstance(body, Not):
        return ~_value(model, body.body, space)
    if isinstance(body, Exists):
        return _exists_bits(_value(model, body.body, space), space.context.index(body.var))
    if isinstance(body, SubstApp):
        inner = PointSpace(body.subst.source, space.algebra, space.bounds)
        value = PointSet(inner, _value(model, body.body, inner))
        return subst_pushforward(body.subst, value).bits
    raise TypeError(f"Not a formula: {body!r}")


def eval_formula(model: Model, u: TypedFormula, bounds: Bounds | None = None) -> PointSet:
    """The value `Val_f(u)`: the set of points satisfying a formula.

    :param model: The model `f`.
    :param u: A formula over a context of the signature of the model.
    :param bounds: Limits the size of the point spaces.
    :returns: The value as point set over the context of the formula.

    Examples::

        u = parse_formula("x == y", VarContext.parse("x:s, y:s"), sig)
        print(eval_formula(f1, u).indices()) # [0, 4, 8]
    """
    check_formula(u.body, u.context, model.signature)
    space = PointSpace(u.context, model.algebra, bounds)
    return PointSet(space, _value(model, u.body, space))


def exists_quant(a: PointSet, var: str) -> PointSet:
    """
    :param a: A point set.
    :param var: A variable of its context.
    :returns: The cylinder `E var. A` along the axis of the variable.
    """
    if var not in a.context:
        raise ContextError(f"Variable `{var}` is not in the context {{{a.context}}}")
    return PointSet(a.space, _exists_bits(a.bits, a.context.index(var)))


def forall_quant(a: PointSet, var: str) -> PointSet:
    """
    :param a: A point set.
    :param var: A variable of its context.
    :returns: The points all of whose variations along `var` lie in `A`.
    """
    return ~exists_quant(~a, var)


def _substituted_values(s: Substitution, space: PointSpace) -> tuple[np.ndarray, ...]:
    return tuple(term_values(space.algebra, term, space) for _, term in s.items)


def subst_pushforward(s: Substitution, a: PointSet) -> PointSet:
    """The operator `s_*`: all points `nu` over the target with `nu . s` in `A`.

    :param s: A substitution `X -> Y`.
    :param a: A point set over `X`.
    :returns: A point set over `Y`.
    """
    if a.context != s.source:
        raise ContextError(
            f"Set over {{{a.context}}} cannot be pushed along a map from {{{s.source}}}"
        )
    target = PointSpace(s.target, a.space.algebra, a.space.bounds)
    values = _substituted_values(s, target)
    if not values:
        return PointSet(target, np.full(target.shape, bool(a.bits)))
    return PointSet(target, np.broadcast_to(a.bits[values], target.shape))


def subst_image(s: Substitution, b: PointSet) -> PointSet:
    """The operator `s^*`: the points `nu . s` for `nu` in `B`.

    :param s: A substitution `X -> Y`.
    :param b: A point set over `Y`.
    :returns: A point set over `X`.
    """
    if b.context != s.target:
        raise ContextError(
            f"Set over {{{b.context}}} is not over the target {{{s.target}}}"
        )
    source = PointSpace(s.source, b.space.algebra, b.space.bounds)
    target = b.space
    if not len(source.context):
        return PointSet(source, np.array(b.bits.any()))
    values = _substituted_values(s, target)
    bits = np.zeros(source.shape, dtype=bool)
    bits[tuple(np.asarray(value)[b.bits] for value in values)] = True
    return PointSet(source, bits)


def in_log_kernel(model: Model, point: Point, u: TypedFormula) -> bool:
    """
    :param model: The model.
    :param point: A point of the space of the formula.
    :param u: A formula.
    :returns: Whether the formula belongs to the logical kernel of the point.
    """
    return point in eval_formula(model, u)


def semantic_support(model: Model, u: TypedFormula) -> set[str]:
    """
    :param model: The model.
    :param u: A formula.
    :returns: The variables `x` with `E x. Val(u) != Val(u)`.
    """
    value = eval_formula(model, u)
    return {var for var in u.context.names if exists_quant(value, var) != value}


def holds_at(model: Model, context: VarContext, body: Formula, point: Point) -> bool:
    """Evaluate a formula at a single point, recursively.

    This is the naive reference evaluator; :func:`eval_formula` must agree
    with it.

    :param model: The model.
    :param context: The context of the formula.
    :param body: The formula.
    :param point: The assignment.
    :returns: Whether the formula holds.
    """
    algebra = model.algebra
    if isinstance(body, Equal):
        return eval_term(algebra, point, body.lhs) == eval_term(algebra, point, body.rhs)
    if isinstance(body, Rel):
        entry = tuple(eval_term(algebra, point, arg) for arg in body.args)
        return entry in model.relation(body.name)
    if isinstance(body, Or):
        return holds_at(model, context, body.left, point) or holds_at(
            model, context, body.right, point
        )
    if isinstance(body, And):
        return holds_at(model, context, body.left, point) and holds_at(
            model, context, body.right, point
        )
    if isinstance(body, Not):
        return not holds_at(model, context, body.body, point)
    if isinstance(body, Exists):
        size = algebra.carrier(context.sort_of(body.var))
        return any(
            holds_at(model, context, body.body, {**point, body.var: element})
            for element in range(size)
        )
    if isinstance(body, SubstApp):
        moved = {name: eval_term(algebra, point, term) for name, term in body.subst.items}
        return holds_at(model, body.subst.source, body.body, moved)
    raise TypeError(f"Not a formula: {body!r}")


def pointwise_value(model: Model, u: TypedFormula, bounds: Bounds | None = None) -> PointSet:
    """
    :param model: The model.
    :param u: A formula.
    :param bounds: Limits the size of the point space.
    :returns: `Val_f(u)` computed point by point with :func:`holds_at`.
    """
    space = PointSpace(u.context, model.algebra, bounds)
    return space.from_indices(
        index
        for index, point in enumerate(space.points())
        if holds_at(model, u.context, u.body, point)
    )


def canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Renumber block labels `0..k-1` in the order of their first point.

    Negative labels mark points outside the universe and stay `-1`.

    :param labels: A flat integer array of labels.
    :returns: The renumbered labels.
    """
    labels = np.asarray(labels).ravel()
    result = np.full(labels.shape, -1, dtype=np.intp)
    inside = labels >= 0
    if not inside.any():
        return result
    values, first = np.unique(labels[inside], return_index=True)
    order = np.argsort(first, kind="stable")
    renumber = np.empty(len(values), dtype=np.intp)
    renumber[order] = np.arange(len(values))
    result[inside] = renumber[np.searchsorted(values, labels[inside])]
    return result


def refine_labels(labels: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """Split blocks by additional per-point keys.

    :param labels: A flat label array.
    :param keys: A `(points, columns)` array; points with different rows are
                 separated.
    :returns: The labels of the common refinement.
    """
    rows = np.column_stack([np.asarray(labels).ravel(), keys.reshape(len(labels), -1)])
    _, inverse = np.unique(rows, axis=0, return_inverse=True)
    return canonical_labels(inverse.ravel())


class DefinableFamily:
    """A finite Boolean algebra of subsets of a point space.

    The family is given by its atoms, a partition of the universe; its members
    are exactly the unions of atoms. The universe is the whole space unless
    the family was restricted to a subset.

    :param space: The point space.
    :param labels: The atom of every point by flat index, `-1` outside the universe.
    :param description: How the family was obtained, for reports.
    :param witnesses: Optionally a defining formula for some atoms, keyed by
                      their label in `labels`.
    """

    def __init__(
        self,
        space: PointSpace,
        labels: np.ndarray,
        description: str = "",
        witnesses: Mapping[int, TypedFormula] | None = None,
    ):
        given = np.asarray(labels).ravel()
        labels = canonical_labels(given)
        if labels.shape != (space.size,):
            raise ContextError("Labels do not fit the point space")
        labels.flags.writeable = False
        self._space = space
        self._labels = labels
        self._count = int(labels.max()) + 1 if space.size else 0
        self._description = description
        self._witnesses: dict[int, TypedFormula] = {}
        if witnesses:
            values, first = np.unique(given, return_index=True)
            renumber = {int(v): int(labels[i]) for v, i in zip(values, first) if v >= 0}
            for number, formula in witnesses.items():
                if number not in renumber:
                    raise ValueError(f"Witness for atom {number}, which has no points")
                if formula.context != space.context:
                    raise ContextError(
                        f"Witness `{formula}` is over {{{formula.context}}}, "
                        f"not {{{space.context}}}"
                    )
                self._witnesses[renumber[number]] = formula

    @classmethod
    def from_atoms(
        cls,
        space: PointSpace,
        atoms: Iterable[PointSet],
        description: str = "",
        witnesses: Sequence[TypedFormula] | None = None,
    ) -> "DefinableFamily":
        """
        :param space: The point space.
        :param atoms: Disjoint non-empty point sets.
        :param description: How the family was obtained.
        :param witnesses: Optionally a defining formula for every atom, in order.
        :returns: The family they generate.
        """
        labels = np.full(space.size, -1, dtype=np.intp)
        count = 0
        for number, atom in enumerate(atoms):
            flat = atom.bits.ravel()
            if (labels[flat] >= 0).any():
                raise ValueError("Atoms of a family must be disjoint")
            labels[flat] = number
            count += 1
        if witnesses is not None and len(witnesses) != count:
            raise ValueError(f"Got {len(witnesses)} witnesses for {count} atoms")
        return cls(space, labels, description, dict(enumerate(witnesses or ())))

    @classmethod
    def generated(
        cls, model: Model, formulas: Sequence[TypedFormula], bounds: Bounds | None = None
    ) -> "DefinableFamily":
        """The Boolean algebra generated by the values of some formulas.

        Every atom is witnessed by the conjunction of the formulas true on it
        and the negations of the others.

        :param model: The model the formulas are evaluated in.
        :param formulas: Formulas over one context, at least one.
        :param bounds: Limits the size of the point space.
        :returns: The family.
        """
        if not formulas:
            raise ValueError("A generated family needs at least one formula")
        context = formulas[0].context
        space = PointSpace(context, model.algebra, bounds)
        table = np.column_stack([eval_formula(model, u, bounds).bits.ravel() for u in formulas])
        labels = refine_labels(np.zeros(space.size, dtype=np.intp), table)
        witnesses = {}
        for number in range(int(labels.max()) + 1):
            row = table[int(np.argmax(labels == number))]
            literals = [u.body if truth else Not(u.body) for u, truth in zip(formulas, row)]
            witnesses[number] = TypedFormula(context, functools.reduce(And, literals))
        return cls(space, labels, f"generated by {len(formulas)} formulas", witnesses)

    @property
    def space(self) -> PointSpace:
        """
        :returns: The point space.
        """
        return self._space

    @property
    def description(self) -> str:
        """
        :returns: How the family was obtained.
        """
        return self._description

    @property
    def labels(self) -> np.ndarray:
        """
        :returns: The atom of every point, `-1` outside the universe.
        """
        return self._labels

    @property
    def atom_count(self) -> int:
        """
        :returns: The number of atoms.
        """
        return self._count

    @property
    def atoms(self) -> list[PointSet]:
        """
        :returns: The atoms, ordered by their first point.
        """
        return [
            PointSet(self._space, (self._labels == number).reshape(self._space.shape))
            for number in range(self._count)
        ]

    @property
    def universe(self) -> PointSet:
        """
        :returns: The largest member.
        """
        return PointSet(self._space, (self._labels >= 0).reshape(self._space.shape))

    def least_superset(self, a: PointSet) -> PointSet:
        """
        :param a: A subset of the universe.
        :returns: The smallest member containing `A`.
        """
        if a.space != self._space:
            raise ContextError("The set does not live in the space of the family")
        flat = a.bits.ravel()
        if (self._labels[flat] < 0).any():
            raise ContextError("The set is not contained in the universe of the family")
        hit = np.unique(self._labels[flat])
        return PointSet(self._space, np.isin(self._labels, hit).reshape(self._space.shape))

    @property
    def witnesses(self) -> dict[int, TypedFormula]:
        """
        :returns: The defining formulas known for atoms, by atom number.
        """
        return dict(self._witnesses)

    def witness(self, a: PointSet) -> TypedFormula | None:
        """A formula whose value is the member `A`.

        :param a: A member of the family.
        :returns: The disjunction of the witnesses of its atoms, or `None` if
                  an atom it needs has none.
        """
        if a not in self:
            raise ContextError("The set is not a member of the family")
        numbers = [int(number) for number in np.unique(self._labels[a.bits.ravel()])]
        if any(number not in self._witnesses for number in numbers):
            return None
        if not numbers:
            if not self._witnesses:
                return None
            some = next(iter(self._witnesses.values())).body
            return TypedFormula(self._space.context, And(some, Not(some)))
        body = functools.reduce(Or, (self._witnesses[number].body for number in numbers))
        return TypedFormula(self._space.context, body)

    def restrict(self, a: PointSet) -> "DefinableFamily":
        """
        :param a: A point set of the space.
        :returns: The traces `B & A` of the members, a Boolean algebra with unit
                  `A & universe`. Witnesses are not carried over.
        """
        labels = np.where(a.bits.ravel(), self._labels, -1)
        return DefinableFamily(self._space, labels, f"{self._description} restricted")

    def sets(self) -> Iterator[PointSet]:
        """
        :returns: All members, ordered by the binary number of the atoms they contain.
        """
        atoms = [atom.bits for atom in self.atoms]
        for number in range(2**self._count):
            bits = np.zeros(self._space.shape, dtype=bool)
            for position, atom in enumerate(atoms):
                if number >> position & 1:
                    bits |= atom
            yield PointSet(self._space, bits)

    def is_closed_under_quantifiers(self) -> bool:
        """
        :returns: Whether `E x. B` is a member for every atom `B` and variable `x`.
        """
        return all(
            exists_quant(atom, var) in self
            for atom in self.atoms
            for var in self._space.context.names
        )

    def __contains__(self, a: object) -> bool:
        if not isinstance(a, PointSet) or a.space != self._space:
            return False
        flat = a.bits.ravel()
        inside = self._labels >= 0
        if (flat & ~inside).any():
            return False
        counts = np.bincount(self._labels[flat & inside], minlength=self._count)
        sizes = np.bincount(self._labels[inside], minlength=self._count)
        return bool(((counts == 0) | (counts == sizes)).all())

    def __iter__(self) -> Iterator[PointSet]:
        return self.sets()

    def __len__(self) -> int:
        return 2**self._count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DefinableFamily):
            return NotImplemented
        return self._space == other.space and np.array_equal(self._labels, other.labels)

    def __hash__(self) -> int:
        return hash((self._space, self._labels.tobytes()))

    def __repr__(self) -> str:
        return f"DefinableFamily({{{self._space.context}}}, atoms={self._count})"
