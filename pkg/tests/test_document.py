"""Tests for the model and theory documents and the bundled models."""

import pytest

from halgeo.algebra import VarContext
from halgeo.assets import Models, load_reference
from halgeo.document import (
    parse_model_document,
    parse_model_file,
    parse_model_text,
    parse_theory_lines,
    parse_theory_text,
    read_model_document,
)
from halgeo.errors import HalgeoError, ParseError

HEADER = """\
sort s = 3
op add : s s -> s
0 1 2
1 2 0
2 0 1
rel p : s
"""


def test_bundled_fix_a(z3, f1, f12):
    fix_a = parse_model_file(Models.fixA)
    assert fix_a.name == "fixA"
    assert fix_a.names == ("f1", "f2", "f12")
    assert fix_a.algebra == z3
    assert fix_a.instance("f1") == f1
    assert fix_a.instance("f12").interp == f12.interp


def test_bundled_fix_b():
    fix_b = Models.fixB()
    assert fix_b.algebra.carrier("s") == 2
    assert fix_b.instance("f").relation("p") == {(1,)}


def test_model_finder():
    assert Models.names() == ["fixA", "fixB"]
    assert str(Models.fixA).endswith("fixA.model")
    with pytest.raises(AttributeError):
        _ = Models.fixC


def test_comments_and_blank_lines_are_ignored():
    text = "# leading comment\n" + HEADER + "\ninstance f  # trailing\np: 0\n"
    multimodel = parse_model_text(text)
    assert multimodel.instance("f").relation("p") == {(0,)}


def test_row_with_wrong_entry_count():
    text = HEADER.replace("1 2 0", "1 2 0 1")
    with pytest.raises(ParseError) as info:
        parse_model_text(text)
    assert info.value.message == "Table row of `add` has 4 entries, expected 3"
    assert info.value.line == 4


def test_element_out_of_range():
    text = HEADER.replace("2 0 1", "2 0 3")
    with pytest.raises(ParseError) as info:
        parse_model_text(text)
    assert info.value.message == "Element 3 is out of range for sort `s` of size 3"
    assert (info.value.line, info.value.column) == (5, 5)


def test_missing_table_rows():
    with pytest.raises(ParseError):
        parse_model_text("sort s = 2\nop add : s s -> s\n0 1\n")


def test_unknown_sort():
    with pytest.raises(ParseError) as info:
        parse_model_text("sort s = 2\nrel p : t\n")
    assert info.value.message == "Unknown sort `t`"


def test_carrier_limit():
    with pytest.raises(ParseError):
        parse_model_text("sort s = 9\n")
    with pytest.raises(ParseError):
        parse_model_text("sort s = 0\n")


def test_operations_precede_relations():
    with pytest.raises(ParseError) as info:
        parse_model_text("sort s = 1\nrel p : s\nop c : -> s\n0\n")
    assert info.value.message == "Operations must precede relations"


def test_unknown_relation_in_instance():
    with pytest.raises(ParseError) as info:
        parse_model_text(HEADER + "instance f\nq: 1\n")
    assert info.value.message == "Unknown relation `q`"
    assert info.value.line == 8


def test_duplicate_instance():
    with pytest.raises(ParseError):
        parse_model_text(HEADER + "instance f\ninstance f\n")


def test_tuple_arity():
    with pytest.raises(ParseError):
        parse_model_text(HEADER + "instance f\np: 1, 2\n")


def test_named_elements_constants_and_binary_relations():
    text = """\
sort s = 2
names s = off on
op c : -> s
on
op neg : s -> s
on off
rel r : s s
instance f
r: off, on
"""
    document = parse_model_document(text)
    algebra = document.multimodel.algebra
    assert algebra.apply("c", ()) == 1
    assert algebra.apply("neg", (0,)) == 1
    assert document.multimodel.instance("f").relation("r") == {(0, 1)}
    assert document.element("s", "on") == 1
    assert document.element("s", "0") == 0
    with pytest.raises(ParseError):
        document.element("s", "2")


def test_read_missing_file(tmp_path):
    with pytest.raises(HalgeoError):
        read_model_document(str(tmp_path / "missing.model"))


def test_theory_text(sig):
    theory = parse_theory_text("vars x:s\np(x)\n# comment\nx == add(x,x)\n", sig)
    assert [str(formula) for formula in theory] == ["p(x)", "x == add(x,x)"]
    assert theory.context.names == ("x",)


def test_theory_text_error_position(sig):
    with pytest.raises(ParseError) as info:
        parse_theory_text("vars x:s\np(x)\np(x) &\n", sig)
    assert (info.value.line, info.value.column) == (3, 7)


def test_theory_text_needs_vars(sig):
    with pytest.raises(ParseError):
        parse_theory_text("p(x)\n", sig)


def test_theory_lines(sig):
    context = VarContext.parse("x:s")
    theory = parse_theory_lines(context, ["p(x)", "x == add(x,x)"], sig)
    assert [str(formula) for formula in theory] == ["p(x)", "x == add(x,x)"]
    assert theory.context == context
    assert not len(parse_theory_lines(context, [], sig))


def test_theory_lines_error_names_the_entry(sig):
    with pytest.raises(ParseError) as info:
        parse_theory_lines(VarContext.parse("x:s"), ["p(x)", "p(x) &"], sig)
    assert (info.value.line, info.value.column) == (2, 7)


def test_load_reference_selects_instances():
    document = load_reference("fixA:f12,f1")
    assert document.multimodel.names == ("f12", "f1")


def test_load_reference_from_path(tmp_path):
    path = tmp_path / "small.model"
    path.write_text(HEADER + "instance g\np: 0\n", encoding="utf-8")
    document = load_reference(str(path))
    assert document.multimodel.name == "small"
    assert document.multimodel.names == ("g",)


def test_load_reference_unknown():
    with pytest.raises(HalgeoError) as info:
        load_reference("nothing")
    assert "bundled are fixA, fixB" in str(info.value)
