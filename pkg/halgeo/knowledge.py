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

"""Knowledge objects, knowledge bases and their informational equivalence.

A description `(X, T)` is a query to a model; its content `T^f` is the
reply. Two knowledge bases over finite multimodels are informationally
equivalent exactly when their instances can be matched such that matched
models are automorphic equivalent, which is what :func:`kb_equivalent`
decides.
"""

from collections.abc import Iterable, Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import itertools
import logging
import random

import numpy as np

from .algebra import AlgebraMap, FiniteAlgebra, Signature, Substitution, VarContext, compose_subst
from .autgalois import aut_model, conjugating_iso, transport_pointset
from .config import DEFAULT_BOUNDS, Bounds
from .errors import ContextError, InvariantBreach, SortError
from .formula import TypedFormula, apply_subst_formula
from .galois import Theory, in_set_theory, rf_family, theory_value
from .geometry import (
    Model,
    PointSet,
    PointSpace,
    eval_formula,
    exists_quant,
    subst_image,
    subst_pushforward,
    term_values,
    validate_model,
)
from .sampling import contexts_up_to
from .util import ValidationReport

logger = logging.getLogger(__name__)


class KnowledgeObject:
    """The knowledge `(X, T, A)` obtained from a model.

    :param description: The theory `T` over `X`.
    :param content: The point set `A`.
    :param model: The model the content was read from.
    """

    def __init__(self, description: Theory, content: PointSet, model: Model):
        if content.context != description.context:
            raise ContextError("The content does not live over the context of the description")
        self._description = description
        self._content = content
        self._model = model

    @property
    def context(self) -> VarContext:
        """
        :returns: The place of knowledge `X`.
        """
        return self._description.context

    @property
    def description(self) -> Theory:
        """
        :returns: The theory `T`.
        """
        return self._description

    @property
    def content(self) -> PointSet:
        """
        :returns: The content `A`.
        """
        return self._content

    @property
    def model(self) -> Model:
        """
        :returns: The model.
        """
        return self._model

    def is_consistent(self) -> bool:
        """
        :returns: Whether the content equals the value of the description.
        """
        return theory_value(self._model, self._description, self._content.space.bounds) == (
            self._content
        )

    def __repr__(self) -> str:
        return f"KnowledgeObject({{{self.context}}}, {self._description}, {self._content})"


def ct(model: Model, context: VarContext, theory: Theory) -> KnowledgeObject:
    """The content functor on objects, `Ct_f(X, T) = (X, T^f)`.

    :param model: The model `f`.
    :param context: The context `X`.
    :param theory: A theory over `X`.
    :returns: The knowledge object replying to the query `T`.
    """
    if theory.context != context:
        raise ContextError(f"The theory lives over {{{theory.context}}}, not {{{context}}}")
    return KnowledgeObject(theory, theory_value(model, theory), model)


class Multimodel:
    """A finite algebra with several named interpretations of its relations.

    :param algebra: The algebra `G` with the relation symbols in its signature.
    :param instances: The instances; each is a model over `algebra` and its
                      name is the instance name.
    :param name: A name for reports.
    """

    def __init__(self, algebra: FiniteAlgebra, instances: Iterable[Model], name: str = ""):
        self._algebra = algebra
        self._instances: dict[str, Model] = {}
        for model in instances:
            if not model.name:
                raise ValueError("Instances of a multimodel must be named")
            if model.name in self._instances:
                raise ValueError(f"Instance `{model.name}` is given twice")
            if model.algebra != algebra or model.signature != algebra.signature:
                raise ContextError(f"Instance `{model.name}` is not a model over the algebra")
            self._instances[model.name] = model
        self._name = name

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
    def name(self) -> str:
        """
        :returns: The name of the multimodel.
        """
        return self._name

    @property
    def names(self) -> tuple[str, ...]:
        """
        :returns: The instance names in declaration order.
        """
        return tuple(self._instances)

    def instance(self, name: str) -> Model:
        """
        :param name: An instance name.
        :returns: The instance.
        """
        if name not in self._instances:
            raise SortError(
                f"Unknown instance `{name}`, expected one of {', '.join(self._instances)}"
            )
        return self._instances[name]

    def select(self, names: Iterable[str]) -> "Multimodel":
        """
        :param names: Instance names.
        :returns: The multimodel with these instances only, in the given order.
        """
        return Multimodel(self._algebra, (self.instance(name) for name in names), self._name)

    def validate(self) -> ValidationReport:
        """
        :returns: The violations of every instance.
        """
        report = ValidationReport()
        for model in self._instances.values():
            report.extend(validate_model(model))
        return report

    def __contains__(self, name: object) -> bool:
        return name in self._instances

    def __iter__(self) -> Iterator[Model]:
        return iter(self._instances.values())

    def __len__(self) -> int:
        return len(self._instances)

    def __repr__(self) -> str:
        return f"Multimodel({self._name or '<anonymous>'}, {list(self._instances)})"


def rename_relations(multimodel: Multimodel, mapping: Mapping[str, str]) -> Multimodel:
    """
    :param multimodel: A multimodel.
    :param mapping: New names for some relation symbols.
    :returns: The same multimodel with the relation symbols renamed.
    """
    sig = multimodel.signature
    rels = [(mapping.get(rel.name, rel.name), rel.arg_sorts) for rel in sig.rels]
    if len({name for name, _ in rels}) != len(rels):
        raise SortError("Renaming identifies two relation symbols")
    algebra = multimodel.algebra
    renamed = FiniteAlgebra(
        sig.with_rels(rels),
        algebra.carriers,
        {op.name: algebra.table(op.name) for op in sig.ops},
    )
    instances = [
        Model(
            renamed,
            {mapping.get(rel, rel): entries for rel, entries in model.interp.items()},
            model.name,
        )
        for model in multimodel
    ]
    return Multimodel(renamed, instances, multimodel.name)


class KnowledgeBase:
    """A multimodel answering queries.

    :param multimodel: The multimodel `(G, Phi, F)`.

    Examples::

        kb = KnowledgeBase(fix_a.select(["f1"]))
        reply = kb.query(VarContext.parse("x:s"), theory, "f1")
        print(reply.content.indices()) # [1]
    """

    def __init__(self, multimodel: Multimodel):
        self._multimodel = multimodel

    @property
    def multimodel(self) -> Multimodel:
        """
        :returns: The multimodel.
        """
        return self._multimodel

    @property
    def names(self) -> tuple[str, ...]:
        """
        :returns: The instance names.
        """
        return self._multimodel.names

    def instance(self, name: str) -> Model:
        """
        :param name: An instance name.
        :returns: The instance.
        """
        return self._multimodel.instance(name)

    def query(self, context: VarContext, theory: Theory, instance: str) -> KnowledgeObject:
        """
        :param context: The place of knowledge `X`.
        :param theory: The query `T` over `X`.
        :param instance: The instance asked.
        :returns: The reply `(X, T, T^f)`.
        """
        return ct(self.instance(instance), context, theory)

    def __len__(self) -> int:
        return len(self._multimodel)

    def __repr__(self) -> str:
        return f"KnowledgeBase({self._multimodel!r})"


def _check_morphism(s: Substitution, a: PointSet, b: PointSet) -> None:
    if a.context != s.target or b.context != s.source:
        raise ContextError(
            f"A morphism {{{s.source}}} -> {{{s.target}}} needs A over the target and "
            f"B over the source, got {{{a.context}}} and {{{b.context}}}"
        )


def admissible_sets(model: Model, s: Substitution, a: PointSet, b: PointSet) -> bool:
    """Whether `nu . s` lies in `B` for every `nu` in `A`.

    The pointwise image and the inclusion `A <= s_* B` are both computed and
    must agree.

    :param model: The model the sets belong to.
    :param s: A substitution `Y -> X`.
    :param a: A point set over `X`.
    :param b: A point set over `Y`.
    :returns: Whether `s` is admissible for `A` and `B`.
    """
    _check_morphism(s, a, b)
    if a.space.algebra != model.algebra:
        raise ContextError("The sets do not live over the algebra of the model")
    pointwise = subst_image(s, a).issubset(b)
    pushed = a.issubset(subst_pushforward(s, b))
    if pointwise != pushed:
        raise InvariantBreach(
            f"Admissibility of `{s}` is {pointwise} pointwise but {pushed} by inclusion"
        )
    return pointwise


def admissible_theories(model: Model, s: Substitution, t1: Theory, t2: Theory) -> bool:
    """Whether `s_* u` lies in `(T1^f)^f` for every `u` in `T2`.

    :param model: The model.
    :param s: A substitution `Y -> X`.
    :param t1: A theory over `X`.
    :param t2: A theory over `Y`.
    :returns: Whether `s` is admissible for the theories.
    """
    if t1.context != s.target or t2.context != s.source:
        raise ContextError(
            f"A morphism {{{s.source}}} -> {{{s.target}}} needs theories over "
            f"{{{s.target}}} and {{{s.source}}}"
        )
    content = theory_value(model, t1)
    return all(in_set_theory(model, content, apply_subst_formula(s, u)) for u in t2)


def substitutions_equivalent(s1: Substitution, s2: Substitution, a: PointSet) -> bool:
    """
    :param s1: A substitution `Y -> X`.
    :param s2: A substitution `Y -> X`.
    :param a: A point set over `X`.
    :returns: Whether `nu . s1 = nu . s2` for every `nu` in `A`.
    """
    if s1.source != s2.source or s1.target != s2.target or a.context != s1.target:
        raise ContextError("The substitutions do not share their contexts with the set")
    space = a.space
    members = a.bits
    for name, term in s1.items:
        first = np.broadcast_to(term_values(space.algebra, term, space), space.shape)
        second = np.broadcast_to(term_values(space.algebra, s2(name), space), space.shape)
        if (first != second)[members].any():
            return False
    return True


def agree_modulo(
    model: Model, s1: Substitution, s2: Substitution, a: PointSet, u: TypedFormula
) -> bool:
    """
    :param model: The model.
    :param s1: A substitution `Y -> X`.
    :param s2: A substitution `Y -> X`.
    :param a: A point set over `X`.
    :param u: A formula over `Y`.
    :returns: Whether `s1_* u` and `s2_* u` have the same value on `A`.
    """
    value = eval_formula(model, u, a.space.bounds)
    first = subst_pushforward(s1, value)
    second = subst_pushforward(s2, value)
    return (a & first) == (a & second)


def compose_morphisms(
    model: Model,
    s1: Substitution,
    s2: Substitution,
    a: PointSet,
    b: PointSet,
    c: PointSet,
) -> Substitution | None:
    """Compose the morphisms `A -> B` given by `s1: Y -> X` and `B -> C` given by `s2: Z -> Y`.

    :param model: The model.
    :returns: The composite `Z -> X`, admissible for `A` and `C`, or `None` if
              one of the two is not admissible.
    """
    if not (admissible_sets(model, s1, a, b) and admissible_sets(model, s2, b, c)):
        return None
    composite = compose_subst(s2, s1)
    if not admissible_sets(model, composite, a, c):
        raise InvariantBreach(
            f"The composite `{composite}` of admissible morphisms is not admissible"
        )
    return composite


def models_automorphic_equivalent(m1: Model, m2: Model) -> AlgebraMap | None:
    """
    :param m1: A finite model.
    :param m2: A finite model, possibly with other relation names.
    :returns: The first isomorphism `delta` of the algebras with
              `Aut(m2) = delta Aut(m1) delta^-1`, or `None`.
    """
    return conjugating_iso(m1.algebra, m2.algebra, aut_model(m1), aut_model(m2))


@dataclass
class EquivalenceWitness:
    """A matching of instances with a conjugating isomorphism per matched pair."""

    alpha: dict[str, str]
    deltas: dict[str, AlgebraMap] = field(default_factory=dict)

    def inverse(self) -> "EquivalenceWitness":
        """
        :returns: The witness of the equivalence in the other direction.
        """
        return EquivalenceWitness(
            {target: source for source, target in self.alpha.items()},
            {self.alpha[source]: delta.inverse() for source, delta in self.deltas.items()},
        )


def _knowledge_base(kb: KnowledgeBase | Multimodel) -> KnowledgeBase:
    return kb if isinstance(kb, KnowledgeBase) else KnowledgeBase(kb)


def kb_equivalent(
    kb1: KnowledgeBase | Multimodel, kb2: KnowledgeBase | Multimodel, jobs: int = 1
) -> EquivalenceWitness | None:
    """Decide informational equivalence of two knowledge bases over finite models.

    Every pair of instances is checked for automorphic equivalence; the
    checks are independent and run on `jobs` threads. A perfect matching of
    the compatible pairs is then searched by backtracking, trying instance
    names in lexicographic order.

    :param kb1: The first knowledge base.
    :param kb2: The second knowledge base.
    :param jobs: The number of parallel pairwise checks.
    :returns: The witness of the first matching found, or `None`.
    """
    kb1 = _knowledge_base(kb1)
    kb2 = _knowledge_base(kb2)
    if len(kb1) != len(kb2):
        logger.debug("Knowledge bases have %d and %d instances", len(kb1), len(kb2))
        return None
    left = sorted(kb1.names)
    right = sorted(kb2.names)
    pairs = list(itertools.product(left, right))

    def check(pair: tuple[str, str]) -> AlgebraMap | None:
        return models_automorphic_equivalent(kb1.instance(pair[0]), kb2.instance(pair[1]))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(check, pairs))
    else:
        results = [check(pair) for pair in pairs]
    edges = {pair: delta for pair, delta in zip(pairs, results) if delta is not None}
    logger.debug("Compatible instance pairs: %s", sorted(edges))

    alpha: dict[str, str] = {}

    def match(position: int) -> bool:
        if position == len(left):
            return True
        source = left[position]
        for target in right:
            if target in alpha.values() or (source, target) not in edges:
                continue
            alpha[source] = target
            if match(position + 1):
                return True
            del alpha[source]
        return False

    if not match(0):
        return None
    return EquivalenceWitness(
        {source: alpha[source] for source in left},
        {source: edges[(source, alpha[source])] for source in left},
    )


def verify_witness(
    kb1: KnowledgeBase | Multimodel, kb2: KnowledgeBase | Multimodel, witness: EquivalenceWitness
) -> bool:
    """Recheck a witness: `alpha` is a bijection and every `delta_f` conjugates
    `Aut(f)` onto `Aut(f^alpha)` element by element.

    :param kb1: The first knowledge base.
    :param kb2: The second knowledge base.
    :param witness: A witness for the pair.
    :returns: Whether it is valid.
    """
    kb1 = _knowledge_base(kb1)
    kb2 = _knowledge_base(kb2)
    alpha = witness.alpha
    if sorted(alpha) != sorted(kb1.names) or sorted(alpha.values()) != sorted(kb2.names):
        return False
    for source, target in alpha.items():
        delta = witness.deltas.get(source)
        if delta is None or not (delta.is_bijective() and delta.is_homomorphism()):
            return False
        group = aut_model(kb1.instance(source))
        conjugated = {delta.compose(h).compose(delta.inverse()) for h in group}
        if conjugated != set(aut_model(kb2.instance(target))):
            return False
    return True


@dataclass
class GammaReport:
    """The outcome of :func:`induced_gamma_check`."""

    ok: bool = True
    failures: list[str] = field(default_factory=list)
    contexts: list[VarContext] = field(default_factory=list)

    def fail(self, context: VarContext, message: str) -> None:
        """
        :param context: The context the failure was found in.
        :param message: What failed.
        """
        self.ok = False
        self.failures.append(f"{{{context}}}: {message}")


def _sample_member(rng: random.Random, space: PointSpace, atoms: list[PointSet]) -> PointSet:
    member = space.empty()
    for atom in atoms:
        if rng.random() < 0.5:
            member = member | atom
    return member


def induced_gamma_check(
    delta: AlgebraMap,
    m1: Model,
    m2: Model,
    context_bound: int | None = None,
    samples: int = 20,
    seed: int = 0,
    bounds: Bounds | None = None,
) -> GammaReport:
    """Check that `delta` carries the definable sets of `m1` onto those of `m2`.

    For every context up to the bound the atoms of the first family must be
    carried onto the atoms of the second and unions of two atoms onto the
    unions of their images. Complement, union and the quantifiers are then
    compared on sampled members.

    :param delta: An isomorphism of the algebras of `m1` and `m2`.
    :param m1: The first model.
    :param m2: The second model.
    :param context_bound: The largest context.
    :param samples: The number of members sampled per context.
    :param seed: The seed of the sampler.
    :param bounds: Supplies the default context bound and the size limit.
    :returns: The report.
    """
    bounds = bounds or DEFAULT_BOUNDS
    context_bound = bounds.context_bound if context_bound is None else context_bound
    rng = random.Random(seed)
    report = GammaReport()
    if delta.source != m1.algebra or delta.target != m2.algebra:
        report.fail(VarContext(), "the map does not connect the algebras of the models")
        return report
    for context in contexts_up_to(m1.signature, context_bound):
        report.contexts.append(context)
        first = rf_family(m1, context, bounds=bounds)
        second = rf_family(m2, context, bounds=bounds)
        if first.atom_count != second.atom_count:
            report.fail(
                context, f"families have {len(first)} and {len(second)} members"
            )
            continue
        atoms = first.atoms
        images = [transport_pointset(delta, atom) for atom in atoms]
        if set(images) != set(second.atoms):
            report.fail(context, "atoms are not carried onto atoms")
            continue
        broken = next(
            (
                (left, right)
                for left, right in itertools.combinations(range(len(atoms)), 2)
                if transport_pointset(delta, atoms[left] | atoms[right])
                != images[left] | images[right]
            ),
            None,
        )
        if broken is not None:
            report.fail(context, f"union of atoms {broken[0]} and {broken[1]} is not preserved")
            continue
        for _ in range(samples):
            member = _sample_member(rng, first.space, atoms)
            other = _sample_member(rng, first.space, atoms)
            image = transport_pointset(delta, member)
            if transport_pointset(delta, ~member) != ~image:
                report.fail(context, "complement is not preserved")
                break
            if transport_pointset(delta, member | other) != image | transport_pointset(
                delta, other
            ):
                report.fail(context, "union is not preserved")
                break
            moved = [
                var
                for var in context.names
                if transport_pointset(delta, exists_quant(member, var))
                != exists_quant(image, var)
            ]
            if moved:
                report.fail(context, f"quantifier over {moved[0]} is not preserved")
                break
    logger.debug("Checked %d contexts, %d failures", len(report.contexts), len(report.failures))

    return report
