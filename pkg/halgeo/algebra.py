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

"""Multi-sorted signatures, finite algebras, terms and substitutions.

The class of algebras is the class of all algebras of a signature, so the
free algebra `W(X)` over a context `X` is the plain term algebra.
"""

from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
import itertools
import logging
import re

import numpy as np

from .errors import ContextError, SortError
from .util import ValidationReport, cycle_notation

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
"""Names of sorts, symbols and variables."""


@dataclass(frozen=True)
class OpSymbol:
    """An operation symbol `name : arg_sorts -> result_sort`."""

    name: str
    arg_sorts: tuple[str, ...]
    result_sort: str

    @property
    def arity(self) -> int:
        """
        :returns: The number of arguments.
        """
        return len(self.arg_sorts)


@dataclass(frozen=True)
class RelSymbol:
    """A relation symbol `name : arg_sorts`."""

    name: str
    arg_sorts: tuple[str, ...]

    @property
    def arity(self) -> int:
        """
        :returns: The number of arguments.
        """
        return len(self.arg_sorts)


def _op_symbol(value) -> OpSymbol:
    if isinstance(value, OpSymbol):
        return value
    name, arg_sorts, result_sort = value
    return OpSymbol(name, tuple(arg_sorts), result_sort)


def _rel_symbol(value) -> RelSymbol:
    if isinstance(value, RelSymbol):
        return value
    name, arg_sorts = value
    return RelSymbol(name, tuple(arg_sorts))


class Signature:
    """Sorts, operation symbols and relation symbols.

    The signature is accepted as given; use :func:`validate_signature` to
    check it.

    :param sorts: The sort names in their canonical order.
    :param ops: Operation symbols, either :class:`OpSymbol` instances or
                `(name, arg_sorts, result_sort)` triples.
    :param rels: Relation symbols, either :class:`RelSymbol` instances or
                 `(name, arg_sorts)` pairs.

    Examples::

        sig = Signature(["s"], [("add", ["s", "s"], "s")], [("p", ["s"])])
        print(sig.op("add").arity) # 2
    """

    def __init__(self, sorts: Iterable[str], ops: Iterable = (), rels: Iterable = ()):
        self._sorts = tuple(sorts)
        self._ops = tuple(_op_symbol(op) for op in ops)
        self._rels = tuple(_rel_symbol(rel) for rel in rels)
        self._op_index = {op.name: op for op in reversed(self._ops)}
        self._rel_index = {rel.name: rel for rel in reversed(self._rels)}

    @property
    def sorts(self) -> tuple[str, ...]:
        """
        :returns: The sorts.
        """
        return self._sorts

    @property
    def ops(self) -> tuple[OpSymbol, ...]:
        """
        :returns: The operation symbols.
        """
        return self._ops

    @property
    def rels(self) -> tuple[RelSymbol, ...]:
        """
        :returns: The relation symbols.
        """
        return self._rels

    @property
    def algebraic_part(self) -> tuple:
        """
        :returns: The sorts and operations; algebras are compared by this.
        """
        return (self._sorts, self._ops)

    def has_op(self, name: str) -> bool:
        """
        :param name: A symbol name.
        :returns: Whether an operation of that name exists.
        """
        return name in self._op_index

    def has_rel(self, name: str) -> bool:
        """
        :param name: A symbol name.
        :returns: Whether a relation of that name exists.
        """
        return name in self._rel_index

    def op(self, name: str) -> OpSymbol:
        """
        :param name: The name of an operation symbol.
        :returns: The symbol.
        """
        if name not in self._op_index:
            raise SortError(f"Unknown operation symbol `{name}`")
        return self._op_index[name]

    def rel(self, name: str) -> RelSymbol:
        """
        :param name: The name of a relation symbol.
        :returns: The symbol.
        """
        if name not in self._rel_index:
            raise SortError(f"Unknown relation symbol `{name}`")
        return self._rel_index[name]

    def with_rels(self, rels: Iterable) -> "Signature":
        """
        :param rels: The new relation symbols.
        :returns: A signature with the same sorts and operations.
        """
        return Signature(self._sorts, self._ops, rels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return (self._sorts, self._ops, self._rels) == (
            other.sorts,
            other.ops,
            other.rels,
        )

    def __hash__(self) -> int:
        return hash((self._sorts, self._ops, self._rels))

    def __repr__(self) -> str:
        return f"Signature({self._sorts!r}, {self._ops!r}, {self._rels!r})"


def validate_signature(sig: Signature) -> ValidationReport:
    """Check names and sort references of a signature.

    :param sig: The signature.
    :returns: One violation per problem; empty if the signature is valid.
    """
    report = ValidationReport()
    seen_sorts = set()
    for sort in sig.sorts:
        if sort in seen_sorts:
            report.add(f"sort {sort}", "duplicate name")
        elif not IDENTIFIER.match(sort):
            report.add(f"sort {sort}", "invalid identifier")
        seen_sorts.add(sort)
    seen_ops = set()
    for op in sig.ops:
        location = f"op {op.name}"
        if op.name in seen_ops:
            report.add(location, "duplicate name")
        elif not IDENTIFIER.match(op.name):
            report.add(location, "invalid identifier")
        seen_ops.add(op.name)
        for sort in (*op.arg_sorts, op.result_sort):
            if sort not in seen_sorts:
                report.add(location, f"unknown sort {sort}")
    seen_rels = set()
    for rel in sig.rels:
        location = f"rel {rel.name}"
        if rel.name in seen_rels:
            report.add(location, "duplicate name")
        elif not IDENTIFIER.match(rel.name):
            report.add(location, "invalid identifier")
        seen_rels.add(rel.name)
        if rel.arity < 1:
            report.add(location, "relation arity must be at least 1")
        for sort in rel.arg_sorts:
            if sort not in seen_sorts:
                report.add(location, f"unknown sort {sort}")

    return report


class FiniteAlgebra:
    """An algebra with finite carriers `0..n-1` per sort and total tables.

    :param signature: The signature; only its sorts and operations are
                      interpreted here.
    :param carriers: The carrier size of every sort.
    :param tables: For every operation the map from argument tuples to the
                   result element.

    Examples::

        sig = Signature(["s"], [("add", ["s", "s"], "s")])
        z3 = FiniteAlgebra.from_functions(sig, {"s": 3}, {"add": lambda a, b: (a + b) % 3})
        print(z3.apply("add", (1, 2))) # 0
    """

    def __init__(
        self,
        signature: Signature,
        carriers: Mapping[str, int],
        tables: Mapping[str, Mapping[tuple[int, ...], int]],
    ):
        self._signature = signature
        self._carriers = dict(carriers)
        self._tables = {name: dict(table) for name, table in tables.items()}
        self._arrays: dict[str, np.ndarray] = {}
        self._key = (
            signature.algebraic_part,
            tuple(sorted(self._carriers.items())),
            tuple(
                (name, tuple(sorted(table.items())))
                for name, table in sorted(self._tables.items())
            ),
        )
        self._hash = hash(self._key)

    @classmethod
    def from_functions(
        cls,
        signature: Signature,
        carriers: Mapping[str, int],
        functions: Mapping[str, Callable[..., int]],
    ) -> "FiniteAlgebra":
        """Tabulate Python functions as operation tables.

        :param signature: The signature.
        :param carriers: The carrier sizes.
        :param functions: A callable per operation symbol.
        :returns: The algebra.
        """
        tables = {}
        for op in signature.ops:
            ranges = [range(carriers[sort]) for sort in op.arg_sorts]
            function = functions[op.name]
            tables[op.name] = {
                args: function(*args) for args in itertools.product(*ranges)
            }
        return cls(signature, carriers, tables)

    @property
    def signature(self) -> Signature:
        """
        :returns: The signature of the algebra.
        """
        return self._signature

    @property
    def carriers(self) -> dict[str, int]:
        """
        :returns: A copy of the carrier sizes.
        """
        return dict(self._carriers)

    @property
    def size(self) -> int:
        """
        :returns: The total number of elements over all sorts.
        """
        return sum(self._carriers.values())

    def carrier(self, sort: str) -> int:
        """
        :param sort: A sort of the signature.
        :returns: The number of elements of that sort.
        """
        if sort not in self._carriers:
            raise SortError(f"The algebra has no carrier for sort `{sort}`")
        return self._carriers[sort]

    def table(self, op: str) -> dict[tuple[int, ...], int]:
        """
        :param op: An operation name.
        :returns: A copy of the table of the operation.
        """
        if op not in self._tables:
            raise SortError(f"The algebra has no table for operation `{op}`")
        return dict(self._tables[op])

    def apply(self, op: str, args: Sequence[int]) -> int:
        """
        :param op: An operation name.
        :param args: The argument elements.
        :returns: The result element.
        """
        try:
            return self._tables[op][tuple(args)]
        except KeyError as exception:
            raise SortError(
                f"Operation `{op}` is not defined for arguments {tuple(args)}"
            ) from exception

    def table_array(self, op: str) -> np.ndarray:
        """The table of an operation as array indexed by the arguments.

        :param op: An operation name.
        :returns: A read-only integer array with one axis per argument.
        """
        if op in self._arrays:
            return self._arrays[op]
        symbol = self._signature.op(op)
        shape = tuple(self.carrier(sort) for sort in symbol.arg_sorts)
        array = np.empty(shape, dtype=np.intp)
        for args in itertools.product(*(range(size) for size in shape)):
            array[args] = self.apply(op, args)
        array.flags.writeable = False
        self._arrays[op] = array

        return array

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return self is other or self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FiniteAlgebra(carriers={self._carriers!r}, ops={sorted(self._tables)!r})"


def validate_algebra(alg: FiniteAlgebra) -> ValidationReport:
    """Check carriers and tables of an algebra.

    :param alg: The algebra.
    :returns: One violation per problem; empty if the algebra is valid.
    """
    report = validate_signature(alg.signature)
    if not report.ok:
        return report
    carriers = alg.carriers
    for sort in alg.signature.sorts:
        if sort not in carriers:
            report.add(f"sort {sort}", "missing carrier")
        elif carriers[sort] < 1:
            report.add(f"sort {sort}", "empty carrier")
    if not report.ok:
        return report
    for op in alg.signature.ops:
        location = f"op {op.name}"
        try:
            table = alg.table(op.name)
        except SortError:
            report.add(location, "table not total")
            continue
        ranges = [range(carriers[sort]) for sort in op.arg_sorts]
        expected = set(itertools.product(*ranges))
        if any(args not in table for args in expected):
            report.add(location, "table not total")
        if any(args not in expected for args in table):
            report.add(location, "argument out of range")
        result_size = carriers[op.result_sort]
        if any(
            not isinstance(value, (int, np.integer)) or not 0 <= value < result_size
            for value in table.values()
        ):
            report.add(location, "element out of range")

    return report


class VarContext:
    """A finite set of sorted variables, ordered ascending by name.

    :param variables: `(name, sort)` pairs or a mapping from names to sorts.
    """

    def __init__(self, variables: Iterable[tuple[str, str]] | Mapping[str, str] = ()):
        if isinstance(variables, Mapping):
            variables = variables.items()
        pairs = tuple(sorted((str(name), str(sort)) for name, sort in variables))
        for first, second in zip(pairs, pairs[1:]):
            if first[0] == second[0]:
                raise SortError(f"Duplicate variable `{first[0]}` in context")
        self._pairs = pairs
        self._sorts = dict(pairs)
        self._positions = {name: index for index, (name, _) in enumerate(pairs)}

    @classmethod
    def parse(cls, text: str) -> "VarContext":
        """Read a context written as `x:s, y:s`.

        :param text: The context text, possibly empty.
        :returns: The context.
        """
        pairs = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            name, separator, sort = chunk.partition(":")
            name, sort = name.strip(), sort.strip()
            if not separator or not IDENTIFIER.match(name) or not IDENTIFIER.match(sort):
                raise SortError(f"Malformed variable declaration `{chunk}`")
            pairs.append((name, sort))
        return cls(pairs)

    @property
    def pairs(self) -> tuple[tuple[str, str], ...]:
        """
        :returns: The `(name, sort)` pairs in canonical order.
        """
        return self._pairs

    @property
    def names(self) -> tuple[str, ...]:
        """
        :returns: The variable names in canonical order.
        """
        return tuple(name for name, _ in self._pairs)

    def sort_of(self, name: str) -> str:
        """
        :param name: A variable of the context.
        :returns: The sort of the variable.
        """
        if name not in self._sorts:
            raise ContextError(f"Variable `{name}` is not in the context {{{self}}}")
        return self._sorts[name]

    def index(self, name: str) -> int:
        """
        :param name: A variable of the context.
        :returns: The position of the variable, which is its axis in point sets.
        """
        if name not in self._positions:
            raise ContextError(f"Variable `{name}` is not in the context {{{self}}}")
        return self._positions[name]

    def extend(self, variables: Iterable[tuple[str, str]]) -> "VarContext":
        """
        :param variables: Additional `(name, sort)` pairs.
        :returns: The enlarged context.
        """
        return VarContext(self._pairs + tuple(variables))

    def issubset(self, other: "VarContext") -> bool:
        """
        :param other: Another context.
        :returns: Whether every variable of this context is in `other` with
                  the same sort.
        """
        return all(other._sorts.get(name) == sort for name, sort in self._pairs)

    def check(self, signature: Signature) -> None:
        """Raise unless all sorts of the context are declared.

        :param signature: The signature.
        """
        for name, sort in self._pairs:
            if sort not in signature.sorts:
                raise SortError(f"Variable `{name}` has undeclared sort `{sort}`")

    def __contains__(self, name: object) -> bool:
        return name in self._sorts

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __len__(self) -> int:
        return len(self._pairs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VarContext):
            return NotImplemented
        return self._pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __str__(self) -> str:
        return ", ".join(f"{name}:{sort}" for name, sort in self._pairs)

    def __repr__(self) -> str:
        return f"VarContext({self._pairs!r})"


class Term:
    """An element of the term algebra `W(X)`."""

    def variables(self) -> frozenset[str]:
        """
        :returns: The variables occurring in the term.
        """
        raise NotImplementedError

    @property
    def depth(self) -> int:
        """
        :returns: The nesting depth of operations, 0 for variables and constants.
        """
        raise NotImplementedError


@dataclass(frozen=True)
class Var(Term):
    """A variable."""

    name: str

    def variables(self) -> frozenset[str]:
        return frozenset((self.name,))

    @property
    def depth(self) -> int:
        return 0

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App(Term):
    """An operation applied to argument terms; constants have no arguments."""

    op: str
    args: tuple[Term, ...] = ()

    def variables(self) -> frozenset[str]:
        return frozenset().union(*(arg.variables() for arg in self.args))

    @property
    def depth(self) -> int:
        if not self.args:
            return 0
        return 1 + max(arg.depth for arg in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.op
        return f"{self.op}({','.join(str(arg) for arg in self.args)})"


def term_sort(term: Term, context: VarContext, signature: Signature) -> str:
    """Check that a term is well-sorted and return its sort.

    :param term: The term.
    :param context: The context its variables live in.
    :param signature: The signature of its operations.
    :returns: The sort of the term.
    """
    if isinstance(term, Var):
        if term.name not in context:
            raise SortError(f"Unbound variable `{term.name}`")
        return context.sort_of(term.name)
    if signature.has_rel(term.op) and not signature.has_op(term.op):
        raise SortError(f"Relation symbol `{term.op}` used as a term")
    symbol = signature.op(term.op)
    if len(term.args) != symbol.arity:
        raise SortError(
            f"Operation `{term.op}` expects {symbol.arity} arguments, got {len(term.args)}"
        )
    for position, (arg, expected) in enumerate(zip(term.args, symbol.arg_sorts)):
        actual = term_sort(arg, context, signature)
        if actual != expected:
            raise SortError(
                f"Argument {position + 1} of `{term.op}` has sort `{actual}`, "
                f"expected `{expected}`"
            )
    return symbol.result_sort


def eval_term(alg: FiniteAlgebra, assignment: Mapping[str, int], term: Term) -> int:
    """Evaluate a term under an assignment of its variables.

    This is the unique homomorphic extension of the assignment to `W(X)`.

    :param alg: The algebra.
    :param assignment: The element of every variable.
    :param term: The term.
    :returns: The value of the term.
    """
    if isinstance(term, Var):
        if term.name not in assignment:
            raise SortError(f"Unbound variable `{term.name}`")
        return assignment[term.name]
    symbol = alg.signature.op(term.op)
    if len(term.args) != symbol.arity:
        raise SortError(
            f"Operation `{term.op}` expects {symbol.arity} arguments, got {len(term.args)}"
        )
    return alg.apply(term.op, [eval_term(alg, assignment, arg) for arg in term.args])


def rename_term(term: Term, mapping: Mapping[str, Term]) -> Term:
    """Replace variables by terms, leaving unmapped variables in place.

    :param term: The term.
    :param mapping: Replacement terms by variable name.
    :returns: The new term.
    """
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    return App(term.op, tuple(rename_term(arg, mapping) for arg in term.args))


class Substitution:
    """A homomorphism `s: W(X) -> W(Y)` given by the images of the variables.

    :param source: The context `X`.
    :param target: The context `Y`.
    :param mapping: A term over `Y` for every variable of `X`.
    :param signature: If given, the terms are checked to be well-sorted and
                      sort-preserving.

    Examples::

        s = Substitution(
            VarContext({"z": "s"}),
            VarContext({"x": "s", "y": "s"}),
            {"z": App("add", (Var("x"), Var("y")))},
        )
        print(s) # z := add(x,y)
    """

    def __init__(
        self,
        source: VarContext,
        target: VarContext,
        mapping: Mapping[str, Term],
        signature: Signature | None = None,
    ):
        missing = [name for name in source.names if name not in mapping]
        if missing:
            raise ContextError(f"Substitution has no image for {', '.join(missing)}")
        extra = [name for name in mapping if name not in source]
        if extra:
            raise ContextError(
                f"Substitution maps variables outside its source: {', '.join(sorted(extra))}"
            )
        for name in source.names:
            unbound = mapping[name].variables() - set(target.names)
            if unbound:
                raise ContextError(
                    f"Image of `{name}` uses variables outside the target: "
                    f"{', '.join(sorted(unbound))}"
                )
            if signature is not None:
                sort = term_sort(mapping[name], target, signature)
                if sort != source.sort_of(name):
                    raise SortError(
                        f"Substitution maps `{name}` of sort `{source.sort_of(name)}` "
                        f"to a term of sort `{sort}`"
                    )
        self._source = source
        self._target = target
        self._items = tuple((name, mapping[name]) for name in source.names)
        self._mapping = dict(self._items)

    @classmethod
    def identity(cls, context: VarContext) -> "Substitution":
        """
        :param context: A context `X`.
        :returns: The identity substitution of `X`.
        """
        return cls(context, context, {name: Var(name) for name in context.names})

    @classmethod
    def inclusion(cls, source: VarContext, target: VarContext) -> "Substitution":
        """
        :param source: A context `X`.
        :param target: A context `Y` containing `X`.
        :returns: The substitution `x -> x` from `X` to `Y`.
        """
        if not source.issubset(target):
            raise ContextError(f"{{{source}}} is not contained in {{{target}}}")
        return cls(source, target, {name: Var(name) for name in source.names})

    @property
    def source(self) -> VarContext:
        """
        :returns: The context `X` of the substituted variables.
        """
        return self._source

    @property
    def target(self) -> VarContext:
        """
        :returns: The context `Y` of the substituted terms.
        """
        return self._target

    @property
    def items(self) -> tuple[tuple[str, Term], ...]:
        """
        :returns: The `(variable, term)` pairs in canonical order.
        """
        return self._items

    @property
    def is_identity(self) -> bool:
        """
        :returns: Whether source and target agree and every variable maps to itself.
        """
        return self._source == self._target and all(
            term == Var(name) for name, term in self._items
        )

    def __call__(self, name: str) -> Term:
        if name not in self._mapping:
            raise ContextError(f"Variable `{name}` is not in the source {{{self._source}}}")
        return self._mapping[name]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return (self._source, self._target, self._items) == (
            other.source,
            other.target,
            other.items,
        )

    def __hash__(self) -> int:
        return hash((self._source, self._target, self._items))

    def __str__(self) -> str:
        return ", ".join(f"{name} := {term}" for name, term in self._items)

    def __repr__(self) -> str:
        return f"Substitution({{{self._source}}} -> {{{self._target}}}: {self})"


def apply_subst_term(s: Substitution, term: Term) -> Term:
    """Apply a substitution to a term over its source.

    :param s: The substitution.
    :param term: A term over `s.source`.
    :returns: The image term over `s.target`.
    """
    outside = term.variables() - set(s.source.names)
    if outside:
        raise ContextError(
            f"Term `{term}` uses variables outside the source: {', '.join(sorted(outside))}"
        )
    return rename_term(term, dict(s.items))


def compose_subst(s1: Substitution, s2: Substitution) -> Substitution:
    """Compose `s1: X -> Y` with `s2: Y -> Z`.

    :param s1: The first substitution.
    :param s2: The second substitution.
    :returns: `s2 . s1: X -> Z`.
    """
    if s1.target != s2.source:
        raise ContextError(
            f"Cannot compose: {{{s1.target}}} is not the source {{{s2.source}}}"
        )
    return Substitution(
        s1.source,
        s2.target,
        {name: apply_subst_term(s2, term) for name, term in s1.items},
    )


class AlgebraMap:
    """A map between algebras given by one function per sort.

    :param source: The domain algebra.
    :param target: The codomain algebra.
    :param per_sort: For every sort the images of `0..n-1`.
    """

    def __init__(
        self,
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        per_sort: Mapping[str, Sequence[int]],
    ):
        self._source = source
        self._target = target
        self._per_sort = {
            sort: tuple(int(value) for value in per_sort[sort])
            for sort in source.signature.sorts
        }
        self._key = tuple(self._per_sort[sort] for sort in source.signature.sorts)

    @classmethod
    def identity(cls, algebra: FiniteAlgebra) -> "AlgebraMap":
        """
        :param algebra: An algebra.
        :returns: The identity of the algebra.
        """
        return cls(
            algebra,
            algebra,
            {sort: range(algebra.carrier(sort)) for sort in algebra.signature.sorts},
        )

    @property
    def source(self) -> FiniteAlgebra:
        """
        :returns: The domain.
        """
        return self._source

    @property
    def target(self) -> FiniteAlgebra:
        """
        :returns: The codomain.
        """
        return self._target

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        """
        :returns: The images per sort in sort order; maps compare by this.
        """
        return self._key

    def images(self, sort: str) -> tuple[int, ...]:
        """
        :param sort: A sort.
        :returns: The images of `0..n-1` of that sort.
        """
        return self._per_sort[sort]

    def __call__(self, sort: str, element: int) -> int:
        return self._per_sort[sort][element]

    @property
    def is_identity(self) -> bool:
        """
        :returns: Whether every element is mapped to itself.
        """
        return all(
            images == tuple(range(len(images))) for images in self._per_sort.values()
        )

    def is_bijective(self) -> bool:
        """
        :returns: Whether every per-sort function is a bijection.
        """
        return all(
            sorted(self._per_sort[sort]) == list(range(self._target.carrier(sort)))
            for sort in self._source.signature.sorts
        )

    def is_homomorphism(self) -> bool:
        """
        :returns: Whether the map commutes with all operation tables.
        """
        for op in self._source.signature.ops:
            for args, result in self._source.table(op.name).items():
                mapped = [self(sort, arg) for sort, arg in zip(op.arg_sorts, args)]
                if self._target.apply(op.name, mapped) != self(op.result_sort, result):
                    return False
        return True

    def compose(self, inner: "AlgebraMap") -> "AlgebraMap":
        """
        :param inner: A map whose target is the source of this map.
        :returns: This map after `inner`.
        """
        return AlgebraMap(
            inner.source,
            self._target,
            {
                sort: [self._per_sort[sort][value] for value in inner.images(sort)]
                for sort in inner.source.signature.sorts
            },
        )

    def inverse(self) -> "AlgebraMap":
        """
        :returns: The inverse of a bijective map.
        """
        if not self.is_bijective():
            raise ValueError("Only bijective maps can be inverted")
        per_sort = {}
        for sort, images in self._per_sort.items():
            inverse = [0] * len(images)
            for element, image in enumerate(images):
                inverse[image] = element
            per_sort[sort] = inverse
        return AlgebraMap(self._target, self._source, per_sort)

    def cycle_notation(self) -> str:
        """
        :returns: The permutation of every sort in cycle notation, for
                  example `s: (1 2)`.
        """
        return "; ".join(
            f"{sort}: {cycle_notation(self._per_sort[sort])}"
            for sort in self._source.signature.sorts
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraMap):
            return NotImplemented
        return self._key == other.key

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other: "AlgebraMap") -> bool:
        return self._key < other.key

    def __repr__(self) -> str:
        return f"AlgebraMap({self._key!r})"


def find_isomorphisms(a: FiniteAlgebra, b: FiniteAlgebra) -> list[AlgebraMap]:
    """Find all isomorphisms between two algebras.

    Backtracking over the elements sort by sort, trying images in increasing
    order. Every fully assigned table entry is checked as soon as possible,
    so the maps come out in lexicographic order.

    :param a: The source algebra.
    :param b: The target algebra.
    :returns: All per-sort bijections commuting with the operations.
    """
    if a.signature.algebraic_part != b.signature.algebraic_part:
        raise SortError("Isomorphisms need algebras with the same sorts and operations")
    sorts = a.signature.sorts
    if any(a.carrier(sort) != b.carrier(sort) for sort in sorts):
        return []
    images = {sort: [-1] * a.carrier(sort) for sort in sorts}
    used = {sort: [False] * b.carrier(sort) for sort in sorts}
    slots = [(sort, element) for sort in sorts for element in range(a.carrier(sort))]
    touching: dict[tuple[str, int], list] = {slot: [] for slot in slots}
    constraints = []
    for op in a.signature.ops:
        for args, result in a.table(op.name).items():
            entry = (op, args, result)
            constraints.append(entry)
            for sort, arg in zip(op.arg_sorts, args):
                touching[(sort, arg)].append(entry)
            touching[(op.result_sort, result)].append(entry)

    def consistent(entries) -> bool:
        for op, args, result in entries:
            mapped = [images[sort][arg] for sort, arg in zip(op.arg_sorts, args)]
            if -1 in mapped:
                continue
            expected = b.apply(op.name, mapped)
            image = images[op.result_sort][result]
            if image == -1:
                if used[op.result_sort][expected]:
                    return False
            elif image != expected:
                return False
        return True

    found: list[AlgebraMap] = []

    def extend(position: int) -> None:
        if position == len(slots):
            found.append(AlgebraMap(a, b, images))
            return
        sort, element = slots[position]
        for candidate in range(b.carrier(sort)):
            if used[sort][candidate]:
                continue
            images[sort][element] = candidate
            used[sort][candidate] = True
            if consistent(touching[(sort, element)]):
                extend(position + 1)
            used[sort][candidate] = False
            images[sort][element] = -1

    if consistent(constraints):
        extend(0)
    logger.debug("Found %d isomorphisms between %r and %r", len(found), a, b)

    return found


class Group:
    """A finite group of automorphisms stored as explicit element list.

    The elements are deduplicated and sorted lexicographically, so the
    identity comes first.

    :param algebra: The algebra the automorphisms act on.
    :param elements: The automorphisms.
    """

    def __init__(self, algebra: FiniteAlgebra, elements: Iterable[AlgebraMap]):
        unique = {element.key: element for element in elements}
        self._algebra = algebra
        self._elements = tuple(unique[key] for key in sorted(unique))
        self._keys = frozenset(unique)

    @property
    def algebra(self) -> FiniteAlgebra:
        """
        :returns: The algebra acted on.
        """
        return self._algebra

    @property
    def elements(self) -> tuple[AlgebraMap, ...]:
        """
        :returns: The elements in lexicographic order.
        """
        return self._elements

    @property
    def keys(self) -> frozenset:
        """
        :returns: The keys of the elements.
        """
        return self._keys

    @property
    def order(self) -> int:
        """
        :returns: The number of elements.
        """
        return len(self._elements)

    def is_group(self) -> bool:
        """
        :returns: Whether the identity is present and the elements are
                  closed under composition and inverses.
        """
        if AlgebraMap.identity(self._algebra).key not in self._keys:
            return False
        for first in self._elements:
            if first.inverse().key not in self._keys:
                return False
            for second in self._elements:
                if first.compose(second).key not in self._keys:
                    return False
        return True

    def conjugate(self, delta: AlgebraMap) -> frozenset:
        """
        :param delta: An isomorphism from the algebra of the group.
        :returns: The keys of `delta . h . delta^-1` for all elements `h`.
        """
        inverse = delta.inverse()
        return frozenset(
            delta.compose(element).compose(inverse).key for element in self._elements
        )

    def restrict(self, predicate: Callable[[AlgebraMap], bool]) -> "Group":
        """
        :param predicate: Selects elements.
        :returns: The elements satisfying the predicate; a subgroup whenever
                  the predicate describes one.
        """
        return Group(self._algebra, (e for e in self._elements if predicate(e)))

    def issubgroup(self, other: "Group") -> bool:
        """
        :param other: A group over the same algebra.
        :returns: Whether all elements of this group are in `other`.
        """
        return self._keys <= other.keys

    def __contains__(self, element: object) -> bool:
        return isinstance(element, AlgebraMap) and element.key in self._keys

    def __iter__(self) -> Iterator[AlgebraMap]:
        return iter(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Group):
            return NotImplemented
        return self._algebra == other.algebra and self._keys == other.keys

    def __hash__(self) -> int:
        return hash(self._keys)

    def __repr__(self) -> str:
        return f"Group(order={self.order})"


def aut_group(a: FiniteAlgebra) -> Group:
    """
    :param a: An algebra.
    :returns: The automorphism group of the algebra.
    """
    return Group(a, find_isomorphisms(a, a))


def constant_extension(alg: FiniteAlgebra) -> FiniteAlgebra:
    """Add a constant `c_<sort>_<element>` naming every element.

    The term algebra of the extension plays the role of the free product of
    the algebra with the term algebra; its only automorphism is the identity.

    :param alg: The algebra.
    :returns: The algebra with one constant per element.
    """
    signature = alg.signature
    constants = [
        OpSymbol(f"c_{sort}_{element}", (), sort)
        for sort in signature.sorts
        for element in range(alg.carrier(sort))
    ]
    extended = Signature(signature.sorts, signature.ops + tuple(constants), signature.rels)
    tables = {op.name: alg.table(op.name) for op in signature.ops}
    for constant in constants:
        tables[constant.name] = {(): int(constant.name.rsplit("_", 1)[1])}

    return FiniteAlgebra(extended, alg.carriers, tables)
