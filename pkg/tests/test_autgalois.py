"""Tests for automorphism groups acting on point spaces."""

import pytest

from halgeo.algebra import AlgebraMap, App, Group, Substitution, Var, VarContext, aut_group
from halgeo.autgalois import (
    PointSubstitution,
    act_on_pointset,
    aut_model,
    commutes_with_quantifiers,
    commutes_with_substitution,
    conjugating_iso,
    coordinatewise_substitution,
    decompose_coordinatewise,
    double_closure_subgroup,
    element_context,
    halmos_automorphisms,
    induced_substitution,
    invariant_sets,
    is_correct_substitution,
    is_model_isomorphism,
    orbits,
    stabilizer_of_family,
    transport_model,
    transport_pointset,
)
from halgeo.geometry import PointSpace


@pytest.fixture(name="negation")
def fixture_negation(z3) -> AlgebraMap:
    return AlgebraMap(z3, z3, {"s": [0, 2, 1]})


@pytest.fixture(name="trivial")
def fixture_trivial(z3) -> Group:
    return Group(z3, [AlgebraMap.identity(z3)])


def test_aut_model(f1, f12):
    assert aut_model(f1).order == 1
    assert [delta.cycle_notation() for delta in aut_model(f12)] == ["s: ()", "s: (1 2)"]


def test_transport_model(f1, f2, negation):
    assert transport_model(f1, negation).interp == f2.interp
    assert is_model_isomorphism(negation, f1, f2)
    assert not is_model_isomorphism(AlgebraMap.identity(f1.algebra), f1, f2)


def test_act_on_pointset(z3, x, negation):
    a = PointSpace(x, z3).from_indices([1])
    assert act_on_pointset(negation, a).indices() == [2]
    assert transport_pointset(negation, a).indices() == [2]


def test_transposition_of_two_points_is_not_correct(fix_b, xy):
    space = PointSpace(xy, fix_b.algebra)
    tau = PointSubstitution(space, [1, 0, 2, 3])
    assert not is_correct_substitution(tau)
    assert not commutes_with_quantifiers(tau)
    assert decompose_coordinatewise(tau) is None


def test_point_substitution_must_be_permutation(fix_b, xy):
    with pytest.raises(ValueError):
        PointSubstitution(PointSpace(xy, fix_b.algebra), [0, 0, 1, 2])


def test_coordinatewise_substitution_decomposes(z3, xy):
    space = PointSpace(xy, z3)
    tau = coordinatewise_substitution(space, {"x": (1, 2, 0), "y": (0, 2, 1)})
    assert is_correct_substitution(tau)
    assert commutes_with_quantifiers(tau)
    assert decompose_coordinatewise(tau) == {"x": (1, 2, 0), "y": (0, 2, 1)}


def test_induced_substitution_commutes_with_substitutions(z3, xy, negation):
    z = VarContext.parse("z:s")
    s = Substitution(z, xy, {"z": App("add", (Var("x"), Var("y")))})
    source = induced_substitution(negation, PointSpace(z, z3))
    target = induced_substitution(negation, PointSpace(xy, z3))
    assert commutes_with_substitution(source, target, s)
    skewed = coordinatewise_substitution(PointSpace(xy, z3), {"x": (0, 2, 1), "y": (0, 1, 2)})
    assert not commutes_with_substitution(source, skewed, s)


def test_halmos_automorphisms_single_context(z3, x):
    assert len(halmos_automorphisms(z3, [x], [])) == 6


def test_halmos_automorphisms_are_affine_over_addition(z3, xy):
    z = VarContext.parse("z:s")
    s = Substitution(z, xy, {"z": App("add", (Var("x"), Var("y")))})
    families = halmos_automorphisms(z3, [z, xy], [s])
    assert len(families) == 18


def test_orbits(z3, x):
    group = aut_group(z3)
    assert [orbit.indices() for orbit in orbits(group, PointSpace(x, z3))] == [[0], [1, 2]]
    assert len(invariant_sets(group, PointSpace(x, z3))) == 4


def test_stabilizer_of_family(z3, x, trivial):
    space = PointSpace(x, z3)
    ambient = aut_group(z3)
    assert stabilizer_of_family(ambient, [invariant_sets(ambient, space)]) == ambient
    assert stabilizer_of_family(ambient, [invariant_sets(trivial, space)]).order == 1
    assert stabilizer_of_family(ambient, [space.full()]) == ambient


def test_double_closure(z3, trivial):
    assert double_closure_subgroup(trivial) == trivial
    assert double_closure_subgroup(aut_group(z3)) == aut_group(z3)


def test_element_context(z3):
    assert element_context(z3).names == ("g_s_0", "g_s_1", "g_s_2")


def test_conjugating_iso(z3, trivial):
    assert conjugating_iso(z3, z3, trivial, trivial).is_identity
    assert conjugating_iso(z3, z3, aut_group(z3), trivial) is None
