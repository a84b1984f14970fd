"""Tests for point spaces, formula values and the set operators."""

import random

import pytest

from halgeo.algebra import App, Substitution, Var, VarContext
from halgeo.config import DEFAULT_BOUNDS, Bounds
from halgeo.errors import ContextError, SpaceTooLargeError
from halgeo.formula import (
    Equal,
    Rel,
    TypedFormula,
    apply_subst_formula,
    normalize_elementary,
    parse_formula,
)
from halgeo.geometry import (
    DefinableFamily,
    Model,
    PointSpace,
    eval_formula,
    exists_quant,
    forall_quant,
    in_log_kernel,
    pointwise_value,
    semantic_support,
    subst_image,
    subst_pushforward,
    validate_model,
)
from halgeo.sampling import random_formula


@pytest.fixture(name="sum_subst")
def fixture_sum_subst(xy) -> Substitution:
    return Substitution(VarContext.parse("z:s"), xy, {"z": App("add", (Var("x"), Var("y")))})


def test_point_index_uses_first_variable_as_most_significant(z3, xy):
    space = PointSpace(xy, z3)
    assert space.point_index({"x": 0, "y": 1}) == 1
    assert space.point_index({"x": 2, "y": 0}) == 6
    assert space.index_point(5) == {"x": 1, "y": 2}


def test_point_index_rejects_out_of_range(z3, xy):
    with pytest.raises(ContextError):
        PointSpace(xy, z3).point_index({"x": 3, "y": 0})


def test_space_limit(z3, xy):
    with pytest.raises(SpaceTooLargeError):
        PointSpace(xy, z3, Bounds(max_points=8))


def test_empty_context_has_one_point(z3):
    space = PointSpace(VarContext(), z3)
    assert space.size == 1
    assert list(space.points()) == [{}]


def test_eval_diagonal(f1, sig, xy):
    assert eval_formula(f1, parse_formula("x == y", xy, sig)).indices() == [0, 4, 8]


def test_eval_relation(f1, sig, x):
    assert eval_formula(f1, parse_formula("p(x)", x, sig)).indices() == [1]
    assert eval_formula(f1, parse_formula("p(x) | !p(x)", x, sig)).is_full


def test_eval_quantifier(f1, sig, xy):
    value = eval_formula(f1, parse_formula("E y. x == add(y,y)", xy, sig))
    assert value.is_full
    value = eval_formula(f1, parse_formula("A y. p(add(x,y))", xy, sig))
    assert value.is_empty


def test_exists_cylinder(z3, xy):
    a = PointSpace(xy, z3).from_points([{"x": 0, "y": 1}])
    assert exists_quant(a, "x").indices() == [1, 4, 7]
    assert forall_quant(a, "x").is_empty


def test_exists_unknown_variable(z3, x):
    with pytest.raises(ContextError):
        exists_quant(PointSpace(x, z3).full(), "y")


def test_exists_of_empty_and_full(z3, xy):
    space = PointSpace(xy, z3)
    assert exists_quant(space.empty(), "y") == space.empty()
    assert exists_quant(space.full(), "y") == space.full()


def test_pushforward(z3, sum_subst):
    a = PointSpace(sum_subst.source, z3).from_indices([0])
    assert subst_pushforward(sum_subst, a).indices() == [0, 5, 7]


def test_pushforward_checks_context(z3, sum_subst, xy):
    with pytest.raises(ContextError):
        subst_pushforward(sum_subst, PointSpace(xy, z3).full())


def test_image(z3, sum_subst, xy):
    b = PointSpace(xy, z3).from_points([{"x": 1, "y": 2}])
    assert subst_image(sum_subst, b).indices() == [0]


def test_pushforward_identity(z3, xy):
    a = PointSpace(xy, z3).from_indices([1, 3, 8])
    assert subst_pushforward(Substitution.identity(xy), a) == a


def test_pushforward_matches_formula_substitution(f12, sig, sum_subst):
    u = parse_formula("p(z)", sum_subst.source, sig)
    pushed = subst_pushforward(sum_subst, eval_formula(f12, u))
    assert pushed == eval_formula(f12, apply_subst_formula(sum_subst, u))


def test_log_kernel(f1, sig, x):
    assert in_log_kernel(f1, {"x": 1}, parse_formula("p(x)", x, sig))
    assert not in_log_kernel(f1, {"x": 0}, parse_formula("p(x)", x, sig))


def test_semantic_support(f1, sig, xy):
    assert semantic_support(f1, parse_formula("p(x)", xy, sig)) == {"x"}
    assert semantic_support(f1, parse_formula("p(x) | !p(x)", xy, sig)) == set()
    assert semantic_support(f1, parse_formula("x == y", xy, sig)) == {"x", "y"}


def test_normalization_keeps_value_under_cylinder(f12, sig, x):
    z = VarContext.parse("z:s")
    s = Substitution(z, x, {"z": Var("x")})
    u = apply_subst_formula(s, parse_formula("E z. p(z)", z, sig))
    normal = normalize_elementary(u)
    assert normal.context.names == ("_v0", "x")
    assert str(normal) == "E _v0. p(_v0)"
    value = eval_formula(f12, u)
    cylinder = subst_pushforward(Substitution.inclusion(x, normal.context), value)
    assert eval_formula(f12, normal) == cylinder


def test_vectorized_and_pointwise_values_agree(f12, sig, xy, rng):
    for _ in range(40):
        u = TypedFormula(xy, random_formula(rng, sig, xy, 3))
        assert eval_formula(f12, u) == pointwise_value(f12, u), str(u)


def test_sampled_formula_depth_comes_from_bounds(sig, xy):
    assert isinstance(
        random_formula(random.Random(7), sig, xy, bounds=Bounds(formula_depth=0)), (Equal, Rel)
    )
    for seed in range(20):
        assert str(random_formula(random.Random(seed), sig, xy)) == str(
            random_formula(random.Random(seed), sig, xy, DEFAULT_BOUNDS.formula_depth)
        )


def test_validate_model_reports_bad_tuple(z3):
    assert validate_model(Model(z3, {"p": [(3,)]})).messages == ["element out of range"]
    assert validate_model(Model(z3, {"q": [(0,)]})).messages == ["unknown relation"]
    assert validate_model(Model(z3, {"p": [(0,)]})).ok


def test_family_from_atoms(z3, x):
    space = PointSpace(x, z3)
    atoms = [space.from_indices([0]), space.from_indices([1, 2])]
    family = DefinableFamily.from_atoms(space, atoms)
    assert family.atom_count == 2
    assert len(family) == 4
    assert [member.indices() for member in family] == [[], [0], [1, 2], [0, 1, 2]]
    assert space.from_indices([1, 2]) in family
    assert space.from_indices([1]) not in family
    assert family.least_superset(space.from_indices([1])).indices() == [1, 2]
    assert family.is_closed_under_quantifiers()


def test_family_rejects_overlapping_atoms(z3, x):
    space = PointSpace(x, z3)
    with pytest.raises(ValueError):
        DefinableFamily.from_atoms(
            space, [space.from_indices([0, 1]), space.from_indices([1])]
        )


def test_family_restrict(z3, x):
    space = PointSpace(x, z3)
    atoms = [space.from_indices([0]), space.from_indices([1, 2])]
    family = DefinableFamily.from_atoms(space, atoms)
    restricted = family.restrict(space.from_indices([1, 2]))
    assert restricted.atom_count == 1
    assert restricted.universe.indices() == [1, 2]
    with pytest.raises(ContextError):
        restricted.least_superset(space.from_indices([0]))


def test_generated_family_witnesses_every_member(f12, sig, x):
    formulas = [parse_formula("p(x)", x, sig), parse_formula("x == add(x,x)", x, sig)]
    family = DefinableFamily.generated(f12, formulas)
    assert [atom.indices() for atom in family.atoms] == [[0], [1, 2]]
    assert str(family.witnesses[0]) == "!p(x) & x == add(x,x)"
    for member in family:
        assert eval_formula(f12, family.witness(member)) == member
    with pytest.raises(ContextError):
        family.witness(family.space.from_indices([1]))


def test_family_witnesses_follow_atoms(f1, sig, x):
    space = PointSpace(x, f1.algebra)
    atoms = [space.from_indices([1, 2]), space.from_indices([0])]
    witnesses = [parse_formula("!(x == add(x,x))", x, sig), parse_formula("x == add(x,x)", x, sig)]
    family = DefinableFamily.from_atoms(space, atoms, witnesses=witnesses)
    assert str(family.witnesses[0]) == "x == add(x,x)"
    assert eval_formula(f1, family.witness(space.empty())).is_empty
    assert family.restrict(space.from_indices([1])).witnesses == {}
    assert DefinableFamily.from_atoms(space, atoms).witness(space.full()) is None
    with pytest.raises(ValueError):
        DefinableFamily.from_atoms(space, atoms, witnesses=witnesses[:1])
