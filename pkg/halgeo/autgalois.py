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

"""Automorphism groups of finite models acting on point sets.

An automorphism `delta` of `G` acts on the points over any context by
`mu -> delta . mu`. The sets invariant under a group `H` and the automorphisms
stabilizing a family of sets form a Galois correspondence; for finite `G`
every subgroup and every invariant family is closed.
"""

from collections.abc import Iterable, Mapping, Sequence
import itertools
import logging

import numpy as np

from .algebra import (
    AlgebraMap,
    FiniteAlgebra,
    Group,
    Substitution,
    VarContext,
    aut_group,
    find_isomorphisms,
)
from .config import DEFAULT_BOUNDS, Bounds
from .errors import ContextError
from .geometry import DefinableFamily, Model, PointSet, PointSpace, term_values
from .sampling import contexts_up_to

logger = logging.getLogger(__name__)


def _preserves(delta: AlgebraMap, model: Model) -> bool:
    for symbol in model.signature.rels:
        entries = model.relation(symbol.name)
        moved = {
            tuple(delta(sort, e) for sort, e in zip(symbol.arg_sorts, entry))
            for entry in entries
        }
        if moved != entries:
            return False
    return True


def aut_model(model: Model) -> Group:
    """
    :param model: A finite model.
    :returns: The automorphisms of the algebra mapping every relation onto itself.
    """
    return aut_group(model.algebra).restrict(lambda delta: _preserves(delta, model))


def transport_model(model: Model, delta: AlgebraMap) -> Model:
    """The model `f^delta` with `f^delta(phi) = delta(f(phi))`.

    :param model: A model over the source of `delta`.
    :param delta: An isomorphism of algebras.
    :returns: The transported model over the target of `delta`.
    """
    if delta.source != model.algebra:
        raise ContextError("The map does not start at the algebra of the model")
    interp = {}
    for symbol in model.signature.rels:
        interp[symbol.name] = {
            tuple(delta(sort, e) for sort, e in zip(symbol.arg_sorts, entry))
            for entry in model.relation(symbol.name)
        }
    return Model(delta.target, interp, model.name)


def is_model_isomorphism(delta: AlgebraMap, m1: Model, m2: Model) -> bool:
    """
    :param delta: A map between the algebras of the models.
    :param m1: The source model.
    :param m2: The target model.
    :returns: Whether `delta` is an isomorphism of algebras carrying every
              relation of `m1` onto the relation of the same name of `m2`.
    """
    if not (delta.is_bijective() and delta.is_homomorphism()):
        return False
    return transport_model(m1, delta).interp == m2.interp


class PointSubstitution:
    """A permutation of the points of a space.

    :param space: The point space.
    :param mapping: The index of the image of every point, by flat index.
    """

    def __init__(self, space: PointSpace, mapping: Sequence[int]):
        mapping = np.array(mapping, dtype=np.intp).ravel()
        if mapping.shape != (space.size,) or not np.array_equal(
            np.sort(mapping), np.arange(space.size)
        ):
            raise ValueError("A point substitution must be a permutation of the points")
        mapping.flags.writeable = False
        self._space = space
        self._mapping = mapping

    @property
    def space(self) -> PointSpace:
        """
        :returns: The point space.
        """
        return self._space

    @property
    def mapping(self) -> np.ndarray:
        """
        :returns: The image index of every point.
        """
        return self._mapping

    def __call__(self, index: int) -> int:
        return int(self._mapping[index])

    def image(self, a: PointSet) -> PointSet:
        """
        :param a: A set of the space.
        :returns: `{tau mu : mu in A}`.
        """
        flat = np.zeros(self._space.size, dtype=bool)
        flat[self._mapping[a.bits.ravel()]] = True
        return PointSet(self._space, flat.reshape(self._space.shape))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointSubstitution):
            return NotImplemented
        return self._space == other.space and np.array_equal(self._mapping, other.mapping)

    def __hash__(self) -> int:
        return hash((self._space, self._mapping.tobytes()))

    def __repr__(self) -> str:
        return f"PointSubstitution({self._mapping.tolist()})"


def _flat_coordinates(space: PointSpace) -> list[np.ndarray]:
    return [space.coordinates(name).ravel() for name in space.context.names]


def coordinatewise_substitution(
    space: PointSpace, perms: Mapping[str, Sequence[int]]
) -> PointSubstitution:
    """
    :param space: The point space.
    :param perms: A permutation of the carrier of its sort for every variable.
    :returns: The point substitution `(tau mu)(x) = perms[x](mu(x))`.
    """
    if not len(space.context):
        return PointSubstitution(space, [0])
    moved = [
        np.asarray(perms[name])[coordinates]
        for name, coordinates in zip(space.context.names, _flat_coordinates(space))
    ]
    return PointSubstitution(space, np.ravel_multi_index(moved, space.shape))


def point_permutation(delta: AlgebraMap, space: PointSpace) -> np.ndarray:
    """The index of `delta . mu` over the target algebra for every point `mu`.

    :param delta: A bijective map of algebras.
    :param space: A space over the source of `delta`.
    :returns: The flat target indices.
    """
    if space.algebra != delta.source:
        raise ContextError("The map does not start at the algebra of the space")
    if not len(space.context):
        return np.zeros(1, dtype=np.intp)
    moved = [
        np.asarray(delta.images(sort))[coordinates]
        for (_, sort), coordinates in zip(space.context.pairs, _flat_coordinates(space))
    ]
    return np.ravel_multi_index(moved, space.shape)


def induced_substitution(delta: AlgebraMap, space: PointSpace) -> PointSubstitution:
    """
    :param delta: An automorphism of the algebra of the space.
    :param space: The point space.
    :returns: The point substitution `mu -> delta . mu`.
    """
    return PointSubstitution(space, point_permutation(delta, space))


def act_on_pointset(delta: AlgebraMap, a: PointSet) -> PointSet:
    """The action `delta_* A = {mu : delta . mu in A}`.

    :param delta: An automorphism of the algebra of `A`.
    :param a: A point set.
    :returns: The moved set.
    """
    if delta.source != a.space.algebra or delta.target != a.space.algebra:
        raise ContextError("The map is not an automorphism of the algebra of the set")
    perm = point_permutation(delta, a.space)
    return PointSet(a.space, a.bits.ravel()[perm].reshape(a.space.shape))


def transport_pointset(delta: AlgebraMap, a: PointSet) -> PointSet:
    """
    :param delta: An isomorphism starting at the algebra of `A`.
    :param a: A point set.
    :returns: `{delta . mu : mu in A}` over the same context and the target algebra.
    """
    target = PointSpace(a.context, delta.target, a.space.bounds)
    flat = np.zeros(target.size, dtype=bool)
    flat[point_permutation(delta, a.space)[a.bits.ravel()]] = True
    return PointSet(target, flat.reshape(target.shape))


def _preserves_labels(labels: np.ndarray, mapping: np.ndarray) -> bool:
    """Whether equal labels stay equal and different labels stay different."""
    pairs = np.unique(np.column_stack([labels, labels[mapping]]), axis=0)
    return len(pairs) == len(np.unique(labels)) == len(np.unique(labels[mapping]))


def is_correct_substitution(tau: PointSubstitution) -> bool:
    """Check `mu(x) = nu(x) <=> (tau mu)(x) = (tau nu)(x)` for all points and variables.

    :param tau: A point substitution.
    :returns: Whether it is correct.
    """
    return all(
        _preserves_labels(coordinates, tau.mapping)
        for coordinates in _flat_coordinates(tau.space)
    )


def decompose_coordinatewise(tau: PointSubstitution) -> dict[str, tuple[int, ...]] | None:
    """
    :param tau: A point substitution.
    :returns: The permutation of every variable inducing `tau`, or `None` if
              `tau` is not correct.
    """
    if not is_correct_substitution(tau):
        return None
    perms = {}
    space = tau.space
    for (name, sort), coordinates in zip(space.context.pairs, _flat_coordinates(space)):
        perm = [0] * space.algebra.carrier(sort)
        perm_values = coordinates[tau.mapping]
        for value in range(len(perm)):
            perm[value] = int(perm_values[np.argmax(coordinates == value)])
        perms[name] = tuple(perm)
    return perms


def _fiber_labels(space: PointSpace, var: str) -> np.ndarray:
    others = [
        coordinates
        for name, coordinates in zip(space.context.names, _flat_coordinates(space))
        if name != var
    ]
    if not others:
        return np.zeros(space.size, dtype=np.intp)
    shape = tuple(
        size for name, size in zip(space.context.names, space.shape) if name != var
    )
    return np.ravel_multi_index(others, shape)


def commutes_with_quantifiers(tau: PointSubstitution) -> bool:
    """Check `tau(E x. A) = E x. tau(A)` for every set `A` and variable `x`.

    Both sides preserve unions, so singletons suffice: `tau` has to map every
    fiber along `x` onto a fiber along `x`.

    :param tau: A point substitution.
    :returns: Whether it commutes with all quantifiers.
    """
    return all(
        _preserves_labels(_fiber_labels(tau.space, var), tau.mapping)
        for var in tau.space.context.names
    )


def _restriction_indices(s: Substitution, target: PointSpace) -> np.ndarray:
    source = PointSpace(s.source, target.algebra, target.bounds)
    if not len(source.context):
        return np.zeros(target.size, dtype=np.intp)
    values = [
        np.asarray(term_values(target.algebra, term, target)).ravel() for _, term in s.items
    ]
    return np.ravel_multi_index(values, source.shape)


def commutes_with_substitution(
    tau_source: PointSubstitution, tau_target: PointSubstitution, s: Substitution
) -> bool:
    """Check `tau_target(s_* A) = s_*(tau_source(A))` for every set `A`.

    Equivalently `(tau_target nu) . s = tau_source(nu . s)` for every point `nu`.

    :param tau_source: A point substitution over `s.source`.
    :param tau_target: A point substitution over `s.target`.
    :param s: A substitution.
    :returns: Whether the square commutes.
    """
    if tau_source.space.context != s.source or tau_target.space.context != s.target:
        raise ContextError(
            "Point substitutions do not live over the contexts of the substitution"
        )
    restrict = _restriction_indices(s, tau_target.space)
    return bool(
        np.array_equal(restrict[tau_target.mapping], tau_source.mapping[restrict])
    )


def _coordinatewise_candidates(space: PointSpace) -> list[PointSubstitution]:
    choices = [
        list(itertools.permutations(range(space.algebra.carrier(sort))))
        for _, sort in space.context.pairs
    ]
    return [
        coordinatewise_substitution(space, dict(zip(space.context.names, perms)))
        for perms in itertools.product(*choices)
    ]


def halmos_automorphisms(
    algebra: FiniteAlgebra,
    contexts: Sequence[VarContext],
    substitutions: Iterable[Substitution],
    bounds: Bounds | None = None,
) -> list[dict[VarContext, PointSubstitution]]:
    """Families of point substitutions commuting with quantifiers and substitutions.

    A point substitution commutes with all quantifiers exactly when it is
    correct, and then it is coordinatewise, so candidates are the
    coordinatewise permutations of every context. A family picks one
    candidate per context such that every given substitution between the
    contexts commutes.

    :param algebra: The algebra `G`.
    :param contexts: The contexts considered.
    :param substitutions: Substitutions between these contexts.
    :param bounds: Limits the size of the point spaces.
    :returns: The commuting families in deterministic order.
    """
    spaces = {context: PointSpace(context, algebra, bounds) for context in contexts}
    candidates = {context: _coordinatewise_candidates(spaces[context]) for context in contexts}
    substitutions = list(substitutions)
    for s in substitutions:
        if s.source not in spaces or s.target not in spaces:
            raise ContextError(f"Substitution `{s}` leaves the given contexts")
    families = []
    order = list(contexts)

    def extend(position: int, chosen: dict[VarContext, PointSubstitution]) -> None:
        if position == len(order):
            families.append(dict(chosen))
            return
        context = order[position]
        for candidate in candidates[context]:
            chosen[context] = candidate
            if all(
                commutes_with_substitution(chosen[s.source], chosen[s.target], s)
                for s in substitutions
                if s.source in chosen and s.target in chosen
            ):
                extend(position + 1, chosen)
            del chosen[context]

    extend(0, {})
    logger.debug("Found %d commuting families over %d contexts", len(families), len(order))

    return families


def invariant_sets(group: Group, space: PointSpace) -> DefinableFamily:
    """The sets invariant under a group, the unions of its orbits.

    :param group: A group of automorphisms of the algebra of the space.
    :param space: The point space.
    :returns: The family whose atoms are the orbits.
    """
    perms = np.stack([point_permutation(delta, space) for delta in group])
    labels = perms.min(axis=0)
    return DefinableFamily(space, labels, f"invariant sets of a group of order {group.order}")


def orbits(group: Group, space: PointSpace) -> list[PointSet]:
    """
    :param group: A group of automorphisms.
    :param space: The point space.
    :returns: The orbits, ordered by their first point.
    """
    return invariant_sets(group, space).atoms


def stabilizer_of_family(
    ambient: Group, sets: Iterable[PointSet | DefinableFamily]
) -> Group:
    """
    :param ambient: A group of automorphisms.
    :param sets: Point sets, possibly over different contexts; a family
                 stands for all of its members.
    :returns: The elements of `ambient` fixing every set.
    """
    flat: list[PointSet] = []
    for entry in sets:
        if isinstance(entry, DefinableFamily):
            flat.extend(entry.atoms)
        else:
            flat.append(entry)
    return ambient.restrict(lambda delta: all(act_on_pointset(delta, a) == a for a in flat))


def element_context(algebra: FiniteAlgebra) -> VarContext:
    """
    :param algebra: An algebra.
    :returns: A context with one variable `g_<sort>_<element>` per element.
    """
    return VarContext(
        (f"g_{sort}_{element}", sort)
        for sort in algebra.signature.sorts
        for element in range(algebra.carrier(sort))
    )


def double_closure_subgroup(
    group: Group, context_bound: int | None = None, bounds: Bounds | None = None
) -> Group:
    """The closure `H''`: the automorphisms fixing every `H`-invariant set.

    Contexts of up to `context_bound` variables are used, plus the context
    with one variable per element when the algebra has at most four elements.

    :param group: A subgroup `H` of `Aut(G)`.
    :param context_bound: The largest number of variables.
    :param bounds: Supplies the default context bound and the size limit.
    :returns: `H''`.
    """
    bounds = bounds or DEFAULT_BOUNDS
    if context_bound is None:
        context_bound = bounds.context_bound
    algebra = group.algebra
    contexts = list(contexts_up_to(algebra.signature, context_bound))
    if algebra.size <= 4:
        contexts.append(element_context(algebra))
    families = [
        invariant_sets(group, PointSpace(context, algebra, bounds)) for context in contexts
    ]
    closure = stabilizer_of_family(aut_group(algebra), families)
    logger.debug("Closure of a group of order %d has order %d", group.order, closure.order)

    return closure


def conjugating_iso(
    a1: FiniteAlgebra, a2: FiniteAlgebra, h1: Group, h2: Group
) -> AlgebraMap | None:
    """
    :param a1: The first algebra.
    :param a2: The second algebra.
    :param h1: A group of automorphisms of `a1`.
    :param h2: A group of automorphisms of `a2`.
    :returns: The first isomorphism `delta` with `h2 = delta h1 delta^-1`, or `None`.
    """
    if a1.signature.algebraic_part != a2.signature.algebraic_part or h1.order != h2.order:
        return None
    for delta in find_isomorphisms(a1, a2):
        if h1.conjugate(delta) == h2.keys:
            return delta
    return None
