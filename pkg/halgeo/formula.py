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

"""First-order formulas over a signature.

The concrete syntax is::

    formula := quant | or
    quant   := ("E" | "A") IDENT "." formula
    or      := and ("|" and)*
    and     := lit ("&" lit)*
    lit     := "!" lit | "(" formula ")" | quant | atom
    atom    := term "==" term | IDENT "(" [term ("," term)*] ")"
    term    := IDENT | IDENT "(" term ("," term)* ")"

A quantifier extends to the end of the enclosing parenthesis. `A x. u` is
read as `!E x. !u`. `#` starts a comment running to the end of the line.
"""

from collections.abc import Iterator
from dataclasses import dataclass
import logging
import re

from .algebra import (
    App,
    Signature,
    Substitution,
    Term,
    Var,
    VarContext,
    rename_term,
    term_sort,
)
from .errors import ContextError, ParseError, SortError
from .util import FreshNames

logger = logging.getLogger(__name__)


class Formula:
    """A node of the formula tree."""


@dataclass(frozen=True)
class Equal(Formula):
    """The atomic formula `lhs == rhs`."""

    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Rel(Formula):
    """A relation symbol applied to terms."""

    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    """Existential quantification of a variable of the context."""

    var: str
    body: Formula


@dataclass(frozen=True)
class SubstApp(Formula):
    """The formula `s_* body`; `body` lives over `s.source`, the node over `s.target`."""

    subst: Substitution
    body: Formula


def Forall(var: str, body: Formula) -> Formula:  # pylint: disable=invalid-name
    """
    :param var: The quantified variable.
    :param body: The formula.
    :returns: `!E var. !body`.
    """
    return Not(Exists(var, Not(body)))


def _contains_subst(body: Formula) -> bool:
    if isinstance(body, SubstApp):
        return True
    if isinstance(body, (Or, And)):
        return _contains_subst(body.left) or _contains_subst(body.right)
    if isinstance(body, (Not, Exists)):
        return _contains_subst(body.body)
    return False


@dataclass(frozen=True)
class TypedFormula:
    """A formula together with its type, the context `X` it lives over."""

    context: VarContext
    body: Formula

    @property
    def is_elementary(self) -> bool:
        """
        :returns: Whether the formula has no substitution nodes and binds only
                  variables of its context.
        """
        if _contains_subst(self.body):
            return False
        return all(var in self.context for var in bound_variables(self.body))

    def __str__(self) -> str:
        return format_formula(self.body)


def bound_variables(body: Formula) -> set[str]:
    """
    :param body: A formula without substitution nodes.
    :returns: The variables bound by a quantifier.
    """
    if isinstance(body, Exists):
        return {body.var} | bound_variables(body.body)
    if isinstance(body, (Or, And)):
        return bound_variables(body.left) | bound_variables(body.right)
    if isinstance(body, Not):
        return bound_variables(body.body)
    return set()


def free_variables(body: Formula) -> frozenset[str]:
    """The variables a formula depends on syntactically.

    A substitution node contributes the variables of the terms substituted
    for the free variables of its body.

    :param body: A formula.
    :returns: The free variables.
    """
    if isinstance(body, Equal):
        return body.lhs.variables() | body.rhs.variables()
    if isinstance(body, Rel):
        return frozenset().union(*(arg.variables() for arg in body.args))
    if isinstance(body, (Or, And)):
        return free_variables(body.left) | free_variables(body.right)
    if isinstance(body, Not):
        return free_variables(body.body)
    if isinstance(body, Exists):
        return free_variables(body.body) - {body.var}
    return frozenset().union(
        *(body.subst(name).variables() for name in free_variables(body.body))
    )


def check_formula(body: Formula, context: VarContext, sig: Signature) -> None:
    """Raise unless a formula is well-typed over a context.

    :param body: The formula.
    :param context: Its context.
    :param sig: The signature.
    """
    if isinstance(body, Equal):
        left = term_sort(body.lhs, context, sig)
        right = term_sort(body.rhs, context, sig)
        if left != right:
            raise SortError(
                f"Sides of `{body.lhs} == {body.rhs}` have sorts `{left}` and `{right}`"
            )
    elif isinstance(body, Rel):
        symbol = sig.rel(body.name)
        if len(body.args) != symbol.arity:
            raise SortError(
                f"Relation `{body.name}` expects {symbol.arity} arguments, "
                f"got {len(body.args)}"
            )
        for position, (arg, expected) in enumerate(zip(body.args, symbol.arg_sorts)):
            actual = term_sort(arg, context, sig)
            if actual != expected:
                raise SortError(
                    f"Argument {position + 1} of `{body.name}` has sort `{actual}`, "
                    f"expected `{expected}`"
                )
    elif isinstance(body, (Or, And)):
        check_formula(body.left, context, sig)
        check_formula(body.right, context, sig)
    elif isinstance(body, Not):
        check_formula(body.body, context, sig)
    elif isinstance(body, Exists):
        if body.var not in context:
            raise ContextError(
                f"Quantified variable `{body.var}` is not in the context {{{context}}}"
            )
        check_formula(body.body, context, sig)
    elif isinstance(body, SubstApp):
        if body.subst.target != context:
            raise ContextError(
                f"Substitution into {{{body.subst.target}}} used over {{{context}}}"
            )
        for name, term in body.subst.items:
            if term_sort(term, context, sig) != body.subst.source.sort_of(name):
                raise SortError(f"Substitution changes the sort of `{name}`")
        check_formula(body.body, body.subst.source, sig)
    else:
        raise TypeError(f"Not a formula: {body!r}")


_TOKEN = re.compile(
    r"""
    (?P<space>[ \t\r\n]+)
    | (?P<comment>\#[^\n]*)
    | (?P<eq>==)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<punct>[(),.!&|])
    | (?P<error>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, line_start = 1, 0
    for match in _TOKEN.finditer(text):
        kind = match.lastgroup
        value = match.group()
        column = match.start() - line_start + 1
        if kind == "error":
            raise ParseError(f"Unexpected character '{value}'", line, column)
        if kind not in ("space", "comment"):
            tokens.append(_Token(kind, value, line, column))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = match.start() + value.rindex("\n") + 1
    tokens.append(_Token("end", "", line, len(text) - line_start + 1))

    return tokens


class _Parser:
    """Recursive descent over the token list."""

    def __init__(self, text: str, context: VarContext, sig: Signature):
        self._tokens = _tokenize(text)
        self._position = 0
        self._context = context
        self._sig = sig

    def _peek(self, offset: int = 0) -> _Token:
        index = min(self._position + offset, len(self._tokens) - 1)
        return self._tokens[index]

    def _next(self) -> _Token:
        token = self._peek()
        self._position += 1
        return token

    def _at(self, text: str, offset: int = 0) -> bool:
        token = self._peek(offset)
        return token.kind != "ident" and token.text == text and token.kind != "end"

    def _expect(self, text: str) -> _Token:
        token = self._next()
        if token.kind == "ident" or token.text != text or token.kind == "end":
            found = token.text or "end of input"
            raise ParseError(f"Expected '{text}', found '{found}'", token.line, token.column)
        return token

    def _ident(self) -> _Token:
        token = self._next()
        if token.kind != "ident":
            found = token.text or "end of input"
            raise ParseError(f"Expected a name, found '{found}'", token.line, token.column)
        return token

    def finish(self) -> None:
        token = self._peek()
        if token.kind != "end":
            raise ParseError(f"Unexpected '{token.text}'", token.line, token.column)

    def _at_quantifier(self) -> bool:
        first = self._peek()
        return (
            first.kind == "ident"
            and first.text in ("E", "A")
            and self._peek(1).kind == "ident"
            and self._at(".", 2)
        )

    def formula(self) -> Formula:
        if self._at_quantifier():
            return self.quantifier()
        return self.disjunction()

    def quantifier(self) -> Formula:
        kind = self._next().text
        var = self._ident().text
        self._expect(".")
        body = self.formula()
        if kind == "A":
            return Forall(var, body)
        return Exists(var, body)

    def disjunction(self) -> Formula:
        node = self.conjunction()
        while self._at("|"):
            self._next()
            node = Or(node, self.conjunction())
        return node

    def conjunction(self) -> Formula:
        node = self.literal()
        while self._at("&"):
            self._next()
            node = And(node, self.literal())
        return node

    def literal(self) -> Formula:
        if self._at("!"):
            self._next()
            return Not(self.literal())
        if self._at("("):
            self._next()
            node = self.formula()
            self._expect(")")
            return node
        if self._at_quantifier():
            return self.quantifier()
        return self.atom()

    def atom(self) -> Formula:
        token = self._peek()
        if (
            token.kind == "ident"
            and self._sig.has_rel(token.text)
            and token.text not in self._context
            and self._at("(", 1)
        ):
            self._next()
            return Rel(token.text, self.arguments())
        lhs = self.term()
        self._expect("==")
        return Equal(lhs, self.term())

    def arguments(self) -> tuple[Term, ...]:
        self._expect("(")
        args = []
        if not self._at(")"):
            args.append(self.term())
            while self._at(","):
                self._next()
                args.append(self.term())
        self._expect(")")
        return tuple(args)

    def term(self) -> Term:
        token = self._ident()
        name = token.text
        if self._at("("):
            if self._sig.has_op(name):
                return App(name, self.arguments())
            if self._sig.has_rel(name):
                raise SortError(
                    f"Relation symbol `{name}` used as a term "
                    f"(line {token.line}, column {token.column})"
                )
            raise SortError(
                f"Unknown operation `{name}` (line {token.line}, column {token.column})"
            )
        if name in self._context:
            return Var(name)
        if self._sig.has_op(name):
            return App(name)
        if self._sig.has_rel(name):
            raise SortError(
                f"Relation symbol `{name}` used as a term "
                f"(line {token.line}, column {token.column})"
            )
        raise SortError(
            f"Unknown symbol `{name}` (line {token.line}, column {token.column})"
        )


def parse_formula(text: str, context: VarContext, sig: Signature) -> TypedFormula:
    """Read a formula and check it against a context.

    :param text: The formula in concrete syntax.
    :param context: The context `X` of the formula.
    :param sig: The signature.
    :returns: The typed formula.

    Examples::

        u = parse_formula("p(x) & E y. x == add(y,y)", VarContext.parse("x:s, y:s"), sig)
        print(u) # p(x) & (E y. x == add(y,y))
    """
    context.check(sig)
    parser = _Parser(text, context, sig)
    body = parser.formula()
    parser.finish()
    check_formula(body, context, sig)

    return TypedFormula(context, body)


def parse_term(text: str, context: VarContext, sig: Signature) -> Term:
    """
    :param text: A term in concrete syntax.
    :param context: The context of its variables.
    :param sig: The signature.
    :returns: The well-sorted term.
    """
    parser = _Parser(text, context, sig)
    term = parser.term()
    parser.finish()
    term_sort(term, context, sig)

    return term


def parse_substitution(
    text: str, source: VarContext, target: VarContext, sig: Signature
) -> Substitution:
    """Read a substitution written as `y := add(x,x), z := x`.

    Variables of the source that are not mentioned map to the variable of the
    same name, which then must be in the target.

    :param text: The substitution.
    :param source: The context of the substituted variables.
    :param target: The context of the terms.
    :param sig: The signature.
    :returns: The substitution.
    """
    mapping: dict[str, Term] = {}
    for chunk in filter(None, (part.strip() for part in _split_top_level(text))):
        name, separator, term_text = chunk.partition(":=")
        name = name.strip()
        if not separator or not name:
            raise ParseError(f"Expected `variable := term`, found '{chunk}'")
        if name not in source:
            raise ContextError(f"Variable `{name}` is not in the source {{{source}}}")
        mapping[name] = parse_term(term_text.strip(), target, sig)
    for name in source.names:
        mapping.setdefault(name, Var(name))

    return Substitution(source, target, mapping, sig)


def _split_top_level(text: str) -> Iterator[str]:
    depth, start = 0, 0
    for index, char in enumerate(text):
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        elif char == "," and depth == 0:
            yield text[start:index]
            start = index + 1
    yield text[start:]


_QUANT, _OR, _AND, _LIT = range(4)


def _level(body: Formula) -> int:
    if isinstance(body, Exists):
        return _QUANT
    if isinstance(body, Or):
        return _OR
    if isinstance(body, And):
        return _AND
    return _LIT


def format_formula(body: Formula, level: int = _QUANT) -> str:
    """Write a formula in concrete syntax with as few parentheses as possible.

    Substitution nodes are written `[x := t](body)`; that form is for display
    and is not read back by :func:`parse_formula`.

    :param body: The formula.
    :param level: The binding strength required by the surrounding text.
    :returns: The text.
    """
    if isinstance(body, Equal):
        text = f"{body.lhs} == {body.rhs}"
    elif isinstance(body, Rel):
        text = f"{body.name}({','.join(str(arg) for arg in body.args)})"
    elif isinstance(body, Or):
        text = f"{format_formula(body.left, _OR)} | {format_formula(body.right, _AND)}"
    elif isinstance(body, And):
        text = f"{format_formula(body.left, _AND)} & {format_formula(body.right, _LIT)}"
    elif isinstance(body, Not):
        text = f"!{format_formula(body.body, _LIT)}"
    elif isinstance(body, Exists):
        text = f"E {body.var}. {format_formula(body.body, _QUANT)}"
    elif isinstance(body, SubstApp):
        text = f"[{body.subst}]({format_formula(body.body, _QUANT)})"
    else:
        raise TypeError(f"Not a formula: {body!r}")
    if _level(body) < level:
        return f"({text})"
    return text


def apply_subst_formula(s: Substitution, u: TypedFormula) -> TypedFormula:
    """Build `s_* u` without normalizing it.

    :param s: A substitution `X -> Y`.
    :param u: A formula over `X`.
    :returns: The formula over `Y`.
    """
    if u.context != s.source:
        raise ContextError(
            f"Formula over {{{u.context}}} cannot be substituted by a map from "
            f"{{{s.source}}}"
        )
    return TypedFormula(s.target, SubstApp(s, u.body))


def normalize_elementary(u: TypedFormula, fresh: FreshNames | None = None) -> TypedFormula:
    """Eliminate substitution nodes.

    Substitutions are pushed into the atoms, `s_* phi(w1..wn) = phi(s w1..s wn)`.
    A quantifier under a non-trivial substitution is renamed to a fresh
    variable, which enlarges the context.

    :param u: A well-typed formula over `X`.
    :param fresh: The generator of fresh names; a new one avoiding `X` by default.
    :returns: An elementary formula over `X` plus the fresh variables.
    """
    if fresh is None:
        fresh = FreshNames(u.context.names)
    else:
        fresh.reserve(u.context.names)
    added: list[tuple[str, str]] = []

    def walk(node: Formula, env: dict[str, Term], sorts: VarContext) -> Formula:
        if isinstance(node, Equal):
            return Equal(rename_term(node.lhs, env), rename_term(node.rhs, env))
        if isinstance(node, Rel):
            return Rel(node.name, tuple(rename_term(arg, env) for arg in node.args))
        if isinstance(node, Or):
            return Or(walk(node.left, env, sorts), walk(node.right, env, sorts))
        if isinstance(node, And):
            return And(walk(node.left, env, sorts), walk(node.right, env, sorts))
        if isinstance(node, Not):
            return Not(walk(node.body, env, sorts))
        if isinstance(node, Exists):
            if all(term == Var(name) for name, term in env.items()):
                return Exists(node.var, walk(node.body, env, sorts))
            name = fresh.take()
            added.append((name, sorts.sort_of(node.var)))
            inner = dict(env)
            inner[node.var] = Var(name)
            return Exists(name, walk(node.body, inner, sorts))
        inner = {
            name: rename_term(term, env) for name, term in node.subst.items
        }
        return walk(node.body, inner, node.subst.source)

    identity = {name: Var(name) for name in u.context.names}
    body = walk(u.body, identity, u.context)
    if added:
        logger.debug("Normalization added fresh variables %s", added)

    return TypedFormula(u.context.extend(added), body)


def syntactic_support(u: TypedFormula) -> set[str]:
    """
    :param u: An elementary formula.
    :returns: The context variables occurring free in it.
    """
    if not u.is_elementary:
        raise ContextError(f"`{u}` is not elementary; normalize it first")
    return set(free_variables(u.body))
