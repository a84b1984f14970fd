"""Tests for knowledge bases, their morphisms and informational equivalence."""

import pytest

from halgeo.algebra import AlgebraMap, Substitution, VarContext
from halgeo.errors import ContextError, SortError
from halgeo.formula import parse_formula, parse_substitution
from halgeo.galois import Theory
from halgeo.geometry import Model, PointSpace
from halgeo import knowledge
from halgeo.knowledge import (
    EquivalenceWitness,
    KnowledgeBase,
    Multimodel,
    admissible_sets,
    admissible_theories,
    agree_modulo,
    compose_morphisms,
    ct,
    induced_gamma_check,
    kb_equivalent,
    models_automorphic_equivalent,
    rename_relations,
    substitutions_equivalent,
    verify_witness,
)

Y = VarContext.parse("y:s")
Z = VarContext.parse("z:s")


@pytest.fixture(name="double")
def fixture_double(sig, x) -> Substitution:
    return parse_substitution("y := add(x,x)", Y, x, sig)


def test_ct(f1, sig, x):
    reply = ct(f1, x, Theory(x, [parse_formula("p(x)", x, sig)]))
    assert reply.content.indices() == [1]
    assert reply.is_consistent()
    contradiction = Theory(x, [parse_formula("p(x)", x, sig), parse_formula("!p(x)", x, sig)])
    assert ct(f1, x, contradiction).content.is_empty


def test_ct_checks_context(f1, sig, x, xy):
    with pytest.raises(ContextError):
        ct(f1, xy, Theory(x, [parse_formula("p(x)", x, sig)]))


def test_query(fix_a, sig, x):
    kb = KnowledgeBase(fix_a)
    reply = kb.query(x, Theory(x, [parse_formula("p(x)", x, sig)]), "f12")
    assert reply.content.indices() == [1, 2]
    assert kb.names == ("f1", "f2", "f12")


def test_multimodel_rejects_unnamed_instance(z3):
    with pytest.raises(ValueError):
        Multimodel(z3, [Model(z3, {})])


def test_multimodel_rejects_duplicate_instance(z3):
    with pytest.raises(ValueError):
        Multimodel(z3, [Model(z3, {}, "f"), Model(z3, {}, "f")])


def test_multimodel_rejects_other_algebra(z3, z2):
    with pytest.raises(ContextError):
        Multimodel(z3, [Model(z2, {}, "f")])


def test_multimodel_select(fix_a):
    selected = fix_a.select(["f12", "f1"])
    assert selected.names == ("f12", "f1")
    assert "f2" not in selected
    with pytest.raises(SortError):
        fix_a.instance("f3")
    assert fix_a.validate().ok


def test_rename_relations(fix_a):
    renamed = rename_relations(fix_a, {"p": "q"})
    assert [rel.name for rel in renamed.signature.rels] == ["q"]
    assert renamed.instance("f1").relation("q") == {(1,)}
    assert renamed.algebra == fix_a.algebra


def test_admissible_sets(f1, x, double):
    a = PointSpace(x, f1.algebra).from_indices([1])
    space = PointSpace(Y, f1.algebra)
    assert admissible_sets(f1, double, a, space.from_indices([2]))
    assert not admissible_sets(f1, double, a, space.from_indices([0]))


def test_admissible_sets_checks_direction(f1, x, double):
    a = PointSpace(x, f1.algebra).from_indices([1])
    with pytest.raises(ContextError):
        admissible_sets(f1, double, a, a)


def test_admissible_theories(f1, sig, x, double):
    t1 = Theory(x, [parse_formula("p(x)", x, sig)])
    assert admissible_theories(f1, double, t1, Theory(Y, [parse_formula("p(add(y,y))", Y, sig)]))
    assert not admissible_theories(f1, double, t1, Theory(Y, [parse_formula("p(y)", Y, sig)]))


def test_substitutions_equivalent(f1, sig, x, double):
    same = parse_substitution("y := x", Y, x, sig)
    space = PointSpace(x, f1.algebra)
    assert substitutions_equivalent(same, double, space.from_indices([0]))
    assert not substitutions_equivalent(same, double, space.from_indices([1]))


def test_agree_modulo(f1, sig, x, double):
    same = parse_substitution("y := x", Y, x, sig)
    space = PointSpace(x, f1.algebra)
    u = parse_formula("p(y)", Y, sig)
    assert agree_modulo(f1, same, double, space.from_indices([0]), u)
    assert not agree_modulo(f1, same, double, space.from_indices([1, 2]), u)


def test_compose_morphisms(f1, sig, x, double):
    second = parse_substitution("z := add(y,y)", Z, Y, sig)
    a = PointSpace(x, f1.algebra).from_indices([1])
    b = PointSpace(Y, f1.algebra).from_indices([2])
    c = PointSpace(Z, f1.algebra).from_indices([1])
    composite = compose_morphisms(f1, double, second, a, b, c)
    assert composite.source == Z
    assert composite.target == x
    assert str(composite) == "z := add(add(x,x),add(x,x))"
    c = PointSpace(Z, f1.algebra).from_indices([0])
    assert compose_morphisms(f1, double, second, a, b, c) is None


def test_models_automorphic_equivalent(f1, f2, f12):
    assert models_automorphic_equivalent(f1, f2).is_identity
    assert models_automorphic_equivalent(f12, f1) is None


def test_kb_equivalent_single_instances(fix_a):
    witness = kb_equivalent(fix_a.select(["f1"]), fix_a.select(["f2"]))
    assert witness.alpha == {"f1": "f2"}
    assert witness.deltas["f1"].is_identity
    assert verify_witness(fix_a.select(["f1"]), fix_a.select(["f2"]), witness)


def test_kb_not_equivalent(fix_a):
    assert kb_equivalent(fix_a.select(["f12"]), fix_a.select(["f1"])) is None
    assert kb_equivalent(fix_a.select(["f12", "f1"]), fix_a.select(["f1"])) is None


@pytest.mark.parametrize("jobs", [1, 3])
def test_kb_equivalent_matching(fix_a, jobs):
    first = KnowledgeBase(fix_a.select(["f1", "f12"]))
    second = KnowledgeBase(fix_a.select(["f2", "f12"]))
    witness = kb_equivalent(first, second, jobs=jobs)
    assert witness.alpha == {"f1": "f2", "f12": "f12"}
    assert verify_witness(first, second, witness)
    assert verify_witness(second, first, witness.inverse())


def test_kb_equivalent_ignores_document_order(fix_a):
    witness = kb_equivalent(fix_a.select(["f12", "f1"]), fix_a.select(["f12", "f2"]))
    assert list(witness.alpha.items()) == [("f1", "f2"), ("f12", "f12")]
    assert list(witness.deltas) == ["f1", "f12"]


def test_kb_equivalent_across_relation_names(fix_a):
    renamed = rename_relations(fix_a.select(["f1"]), {"p": "q"})
    assert kb_equivalent(renamed, fix_a.select(["f2"])) is not None


def test_verify_witness_rejects_missing_delta(fix_a):
    witness = EquivalenceWitness({"f1": "f2"})
    assert not verify_witness(fix_a.select(["f1"]), fix_a.select(["f2"]), witness)


def test_induced_gamma_check(f1, f2, f12):
    negation = AlgebraMap(f1.algebra, f1.algebra, {"s": [0, 2, 1]})
    assert induced_gamma_check(negation, f1, f2).ok
    report = induced_gamma_check(AlgebraMap.identity(f1.algebra), f1, f12)
    assert not report.ok
    assert report.failures[0] == "{x:s}: families have 8 and 4 members"


def test_induced_gamma_check_compares_unions(monkeypatch, f12):
    monkeypatch.setattr(knowledge, "transport_pointset", lambda _delta, a: ~a)
    report = induced_gamma_check(AlgebraMap.identity(f12.algebra), f12, f12, context_bound=1)
    assert not report.ok
    assert report.failures == ["{x:s}: union of atoms 0 and 1 is not preserved"]


def test_multimodel_of_other_carrier(fix_b):
    assert fix_b.algebra.carrier("s") == 2
    assert fix_b.names == ("f",)
