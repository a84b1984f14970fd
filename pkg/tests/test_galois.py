"""Tests for theories, closures and the bounded equivalence searches."""

import pytest

from halgeo.algebra import FiniteAlgebra, VarContext, aut_group
from halgeo.autgalois import stabilizer_of_family
from halgeo.errors import ContextError
from halgeo.formula import parse_formula
from halgeo.galois import (
    DISAGREE,
    NO_DISAGREEMENT,
    Theory,
    alv_join,
    alv_meet,
    closed_sets,
    closure_report,
    elementary_equiv_bounded,
    geometric_equiv_bounded,
    in_closure,
    in_set_theory,
    noetherian_reduce,
    regular_functions,
    rf_family,
    set_closure,
    theory_value,
    transfer_closed_set,
)
from halgeo.geometry import Model, PointSpace, eval_formula


def theory(sig, context, *texts):
    return Theory(context, (parse_formula(text, context, sig) for text in texts))


def test_theory_rejects_mixed_contexts(sig, x, xy):
    with pytest.raises(ContextError):
        Theory(x, [parse_formula("p(x)", xy, sig)])


def test_theory_str(sig, x):
    assert str(theory(sig, x, "p(x)", "x == x")) == "{p(x); x == x}"


def test_theory_value(f1, sig, x):
    assert theory_value(f1, theory(sig, x, "p(x)")).indices() == [1]
    assert theory_value(f1, theory(sig, x, "p(x)", "!p(x)")).is_empty
    assert theory_value(f1, theory(sig, x)).is_full


def test_in_set_theory(f1, sig, x):
    space = PointSpace(x, f1.algebra)
    u = parse_formula("p(x)", x, sig)
    assert in_set_theory(f1, space.from_indices([1]), u)
    assert not in_set_theory(f1, space.full(), u)


def test_in_closure(f1, sig, x):
    t = theory(sig, x, "p(x)")
    assert in_closure(f1, t, parse_formula("p(x) | p(add(x,x))", x, sig))
    assert not in_closure(f1, t, parse_formula("x == add(x,x)", x, sig))


def test_in_closure_checks_context(f1, sig, x, xy):
    with pytest.raises(ContextError):
        in_closure(f1, theory(sig, x, "p(x)"), parse_formula("p(y)", xy, sig))


def test_rf_family_of_f12(f12, x):
    family = rf_family(f12, x, budget=0)
    assert [atom.indices() for atom in family.atoms] == [[0], [1, 2]]
    assert len(family) == 4


def test_rf_family_of_f1_is_powerset(f1, x):
    assert len(rf_family(f1, x, budget=0)) == 8


def test_rf_family_without_relations(z3, x):
    assert rf_family(Model(z3, {}), x, budget=0).atom_count == 2


def test_rf_family_matches_orbits(f12, xy):
    assert rf_family(f12, xy).atom_count == 5


def test_rf_family_is_closed_under_quantifiers(f12, xy):
    assert rf_family(f12, xy).is_closed_under_quantifiers()


def test_closure_by_orbits(f12, xy):
    a = PointSpace(xy, f12.algebra).from_points([{"x": 0, "y": 1}])
    report = closure_report(f12, a)
    assert report.value.indices() == [1, 2]
    assert report.converged
    assert report.rf_value == report.value
    assert [orbit.indices() for orbit in report.orbits] == [[1, 2]]


def test_closure_in_rigid_model(f1, x):
    a = PointSpace(x, f1.algebra).from_indices([1])
    assert set_closure(f1, a) == a


def test_closure_is_idempotent(f12, xy, rng):
    space = PointSpace(xy, f12.algebra)
    for _ in range(10):
        a = space.from_indices(i for i in range(space.size) if rng.random() < 0.3)
        closure = set_closure(f12, a)
        assert a <= closure
        assert set_closure(f12, closure) == closure


def test_closed_sets(f12, x):
    assert [atom.indices() for atom in closed_sets(f12, x).atoms] == [[0], [1, 2]]


def test_aut_is_stabilizer_of_definable_sets(f1, f12, x):
    ambient = aut_group(f12.algebra)
    assert stabilizer_of_family(ambient, [rf_family(f12, x)]).order == 2
    assert stabilizer_of_family(ambient, [rf_family(f1, x)]).order == 1


def test_noetherian_reduce(f1, sig, x):
    t = theory(sig, x, "x == x", "p(x)", "p(x) | p(add(x,x))")
    assert noetherian_reduce(f1, t) == theory(sig, x, "p(x)")


def test_lattice_operations(f12, x):
    space = PointSpace(x, f12.algebra)
    a, b = space.from_indices([0]), space.from_indices([1, 2])
    assert alv_meet(a, b).is_empty
    assert alv_join(f12, a, b).is_full


def test_lattice_operations_check_space(f12, x, xy):
    with pytest.raises(ContextError):
        alv_meet(PointSpace(x, f12.algebra).full(), PointSpace(xy, f12.algebra).full())


def test_regular_functions(f1, f12, x):
    space = PointSpace(x, f1.algebra)
    members = regular_functions(f1, space.from_indices([1]))
    assert [member.indices() for member in members] == [[], [1]]
    members = regular_functions(f12, space.from_indices([1, 2]))
    assert [member.indices() for member in members] == [[], [1, 2]]


def test_isomorphic_models_have_no_disagreement(f1, f2):
    verdict = geometric_equiv_bounded(f1, f2)
    assert verdict.verdict == NO_DISAGREEMENT
    assert not verdict.disagrees
    assert verdict.theories_checked > 0


def test_geometric_disagreement_witness(f1, f12, x):
    verdict = geometric_equiv_bounded(f1, f12)
    assert verdict.verdict == DISAGREE
    assert verdict.context == x
    assert str(verdict.theory) == "{p(x)}"
    assert str(verdict.candidate) == "p(add(x,x))"
    assert verdict.in_first is False
    assert verdict.in_second is True


def test_geometric_requires_shared_signature(f1, sig):
    algebra = FiniteAlgebra(
        sig.with_rels([("q", ["s"])]), f1.algebra.carriers, {"add": f1.algebra.table("add")}
    )
    renamed = Model(algebra, {"q": [(0,)]})
    with pytest.raises(ContextError):
        geometric_equiv_bounded(f1, renamed)


def test_elementary_equivalence(f1, f2, f12):
    assert elementary_equiv_bounded(f1, f2).verdict == NO_DISAGREEMENT
    verdict = elementary_equiv_bounded(f1, f12)
    assert verdict.disagrees
    assert verdict.sentence.context == VarContext.parse("x:s")
    assert eval_formula(f1, verdict.sentence).is_full == verdict.holds_in_first
    assert eval_formula(f12, verdict.sentence).is_full == verdict.holds_in_second
    assert verdict.holds_in_first != verdict.holds_in_second


def test_transfer_closed_set(f1, f2, x):
    a = PointSpace(x, f1.algebra).from_indices([1])
    assert transfer_closed_set(f1, f2, a).indices() == [2]
