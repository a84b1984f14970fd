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

"""Deterministic enumerators and seeded random generators of terms,
formulas, substitutions and point sets."""

import itertools
import random

import numpy as np

from .algebra import App, Signature, Substitution, Term, Var, VarContext
from .config import DEFAULT_BOUNDS, Bounds
from .formula import And, Equal, Exists, Formula, Not, Or, Rel, SubstApp
from .geometry import PointSet, PointSpace


def enumerate_terms(sig: Signature, context: VarContext, depth: int) -> dict[str, list[Term]]:
    """All terms up to a depth, by sort.

    Terms come ordered by depth; within a depth variables precede constants
    and operations follow the signature with arguments in product order.

    :param sig: The signature.
    :param context: The variables available.
    :param depth: The largest nesting depth.
    :returns: The terms of every sort.
    """
    levels: list[dict[str, list[Term]]] = []
    base: dict[str, list[Term]] = {sort: [] for sort in sig.sorts}
    for name, sort in context.pairs:
        base[sort].append(Var(name))
    for op in sig.ops:
        if not op.arity:
            base[op.result_sort].append(App(op.name))
    levels.append(base)
    for level in range(1, depth + 1):
        below = {
            sort: [term for lower in levels for term in lower[sort]] for sort in sig.sorts
        }
        current: dict[str, list[Term]] = {sort: [] for sort in sig.sorts}
        for op in sig.ops:
            if not op.arity:
                continue
            for args in itertools.product(*(below[sort] for sort in op.arg_sorts)):
                if max(arg.depth for arg in args) == level - 1:
                    current[op.result_sort].append(App(op.name, tuple(args)))
        levels.append(current)

    return {sort: [term for level in levels for term in level[sort]] for sort in sig.sorts}


def enumerate_atoms(sig: Signature, context: VarContext, depth: int) -> list[Formula]:
    """All atomic formulas with terms up to a depth.

    Relation atoms come first, then the equalities `s == t` with `s` listed
    before `t`.

    :param sig: The signature.
    :param context: The variables available.
    :param depth: The largest term depth.
    :returns: The atoms.
    """
    terms = enumerate_terms(sig, context, depth)
    atoms: list[Formula] = []
    for rel in sig.rels:
        for args in itertools.product(*(terms[sort] for sort in rel.arg_sorts)):
            atoms.append(Rel(rel.name, tuple(args)))
    for sort in sig.sorts:
        for lhs, rhs in itertools.combinations(terms[sort], 2):
            atoms.append(Equal(lhs, rhs))

    return atoms


def named_context(sig: Signature, size: int, sort: str | None = None) -> VarContext:
    """
    :param sig: The signature.
    :param size: The number of variables.
    :param sort: Their sort, the first sort of the signature by default.
    :returns: The context `x, y, z, ...` of that size.
    """
    names = ["x", "y", "z", "w", "u", "v"]
    if size > len(names):
        names += [f"x{index}" for index in range(size - len(names))]
    return VarContext((name, sort or sig.sorts[0]) for name in names[:size])


def random_term(
    rng: random.Random, sig: Signature, context: VarContext, sort: str, depth: int
) -> Term:
    """
    :param rng: The random generator.
    :param sig: The signature.
    :param context: The variables available.
    :param sort: The sort of the term.
    :param depth: The largest nesting depth.
    :returns: A random term of the sort.
    """
    leaves: list[Term] = [Var(name) for name, s in context.pairs if s == sort]
    leaves += [App(op.name) for op in sig.ops if not op.arity and op.result_sort == sort]
    builders = [op for op in sig.ops if op.arity and op.result_sort == sort]
    if depth > 0 and builders and (not leaves or rng.random() < 0.5):
        op = rng.choice(builders)
        return App(
            op.name,
            tuple(random_term(rng, sig, context, s, depth - 1) for s in op.arg_sorts),
        )
    if not leaves:
        raise ValueError(f"No term of sort `{sort}` over {{{context}}}")
    return rng.choice(leaves)


def random_substitution(
    rng: random.Random,
    sig: Signature,
    source: VarContext,
    target: VarContext,
    depth: int = 2,
) -> Substitution:
    """
    :param rng: The random generator.
    :param sig: The signature.
    :param source: The context of the substituted variables.
    :param target: The context of the terms.
    :param depth: The largest term depth.
    :returns: A random sort-preserving substitution.
    """
    mapping = {
        name: random_term(rng, sig, target, sort, depth) for name, sort in source.pairs
    }
    return Substitution(source, target, mapping, sig)


def random_formula(
    rng: random.Random,
    sig: Signature,
    context: VarContext,
    depth: int | None = None,
    with_substitutions: bool = True,
    term_depth: int = 2,
    bounds: Bounds | None = None,
) -> Formula:
    """A random formula over a context.

    Substitution nodes get a source context of one or two fresh-looking
    variables `a, b` of random sorts.

    :param rng: The random generator.
    :param sig: The signature.
    :param context: The context of the formula.
    :param depth: The largest connective depth, `formula_depth` of the bounds
                  by default.
    :param with_substitutions: Whether substitution nodes may occur.
    :param term_depth: The largest term depth in atoms.
    :param bounds: Supplies the default depth.
    :returns: The formula.
    """
    if depth is None:
        depth = (bounds or DEFAULT_BOUNDS).formula_depth
    if depth <= 0 or rng.random() < 0.2:
        return _random_atom(rng, sig, context, term_depth)
    choices = ["or", "and", "not"]
    if len(context):
        choices.append("exists")
    if with_substitutions:
        choices.append("subst")
    kind = rng.choice(choices)
    if kind == "or":
        return Or(
            random_formula(rng, sig, context, depth - 1, with_substitutions, term_depth),
            random_formula(rng, sig, context, depth - 1, with_substitutions, term_depth),
        )
    if kind == "and":
        return And(
            random_formula(rng, sig, context, depth - 1, with_substitutions, term_depth),
            random_formula(rng, sig, context, depth - 1, with_substitutions, term_depth),
        )
    if kind == "not":
        return Not(random_formula(rng, sig, context, depth - 1, with_substitutions, term_depth))
    if kind == "exists":
        return Exists(
            rng.choice(context.names),
            random_formula(rng, sig, context, depth - 1, with_substitutions, term_depth),
        )
    source = VarContext(
        (name, rng.choice(sig.sorts)) for name in ("a", "b")[: rng.randint(1, 2)]
    )
    usable = VarContext(pair for pair in source.pairs if _has_terms(sig, context, pair[1]))
    if not len(usable):
        return _random_atom(rng, sig, context, term_depth)
    subst = random_substitution(rng, sig, usable, context, 1)
    return SubstApp(
        subst, random_formula(rng, sig, usable, depth - 1, with_substitutions, term_depth)
    )


def _has_terms(sig: Signature, context: VarContext, sort: str) -> bool:
    if any(s == sort for _, s in context.pairs):
        return True
    return any(not op.arity and op.result_sort == sort for op in sig.ops)


def _random_atom(rng: random.Random, sig: Signature, context: VarContext, depth: int) -> Formula:
    rels = [
        rel for rel in sig.rels if all(_has_terms(sig, context, s) for s in rel.arg_sorts)
    ]
    sorts = [sort for sort in sig.sorts if _has_terms(sig, context, sort)]
    if rels and rng.random() < 0.5 or not sorts:
        rel = rng.choice(rels)
        return Rel(
            rel.name,
            tuple(random_term(rng, sig, context, sort, depth) for sort in rel.arg_sorts),
        )
    sort = rng.choice(sorts)
    return Equal(
        random_term(rng, sig, context, sort, depth),
        random_term(rng, sig, context, sort, depth),
    )


def random_pointset(rng: random.Random, space: PointSpace, density: float = 0.5) -> PointSet:
    """
    :param rng: The random generator.
    :param space: The point space.
    :param density: The probability of each point to be a member.
    :returns: A random subset of the space.
    """
    flat = np.array([rng.random() < density for _ in range(space.size)], dtype=bool)
    return PointSet(space, flat.reshape(space.shape))


def all_pointsets(space: PointSpace):
    """
    :param space: A small point space.
    :returns: Every subset of the space, ordered by the binary number of its
              membership vector.
    """
    for number in range(2**space.size):
        flat = np.array([(number >> index) & 1 for index in range(space.size)], dtype=bool)
        yield PointSet(space, flat.reshape(space.shape))


def contexts_up_to(sig: Signature, bound: int):
    """
    :param sig: The signature.
    :param bound: The largest number of variables.
    :returns: The contexts `x, y, ...` with 1 to `bound` variables, for every
              multiset of sorts, smallest first.
    """
    for size in range(1, bound + 1):
        names = named_context(sig, size).names
        for sorts in itertools.combinations_with_replacement(sig.sorts, size):
            yield VarContext(zip(names, sorts))
