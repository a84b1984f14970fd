"""Tests for the `halgeo` command line on the bundled models.

Expected outputs live in `tests/golden`, one file per output.
"""

import os

from click.testing import CliRunner
import pytest

from halgeo import cli
from halgeo.errors import InvariantBreach

GOLDEN = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")


def run(*args: str):
    return CliRunner().invoke(cli.main, list(args))


def golden(name: str) -> str:
    with open(os.path.join(GOLDEN, name + ".txt"), encoding="utf-8") as file:
        return file.read()


def test_eval_diagonal():
    result = run("eval", "--model", "fixA", "--instance", "f1", "--vars", "x:s,y:s",
                 "--formula", "x == y")
    assert result.exit_code == 0
    assert result.output == golden("eval_diagonal")


def test_eval_contradiction():
    result = run("eval", "-m", "fixA", "-i", "f1", "-x", "x:s", "-f", "p(x) & !p(x)")
    assert result.exit_code == 0
    assert result.output == golden("eval_contradiction")


def test_eval_unknown_instance():
    result = run("eval", "-m", "fixA", "-i", "f3", "-x", "x:s", "-f", "p(x)")
    assert result.exit_code == 2
    assert "error:" in result.output


def test_eval_needs_instance():
    result = run("eval", "-m", "fixA", "-x", "x:s", "-f", "p(x)")
    assert result.exit_code == 2


def test_eval_single_instance_model():
    result = run("eval", "-m", "fixB", "-x", "x:s", "-f", "p(x)")
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "indices: 1"


def test_eval_reports_parse_error():
    result = run("eval", "-m", "fixA:f1", "-x", "x:s", "-f", "p(x) &")
    assert result.exit_code == 2
    assert "error: Expected a name, found 'end of input' (line 1, column 7)" in result.output


def test_unknown_model():
    result = run("aut", "-m", "no-such-model")
    assert result.exit_code == 2
    assert "bundled are fixA, fixB" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ("-p", "1"),
        ("--point", "x=0,y=1"),
    ],
)
def test_closure(args):
    result = run("closure", "-m", "fixA", "-i", "f12", "-x", "x:s,y:s", *args)
    assert result.exit_code == 0
    assert result.output == golden("closure_orbit")


def test_closure_rigid():
    result = run("closure", "-m", "fixA", "-i", "f1", "-x", "x:s", "-p", "1")
    assert result.exit_code == 0
    assert result.output == golden("closure_rigid")


def test_closure_of_everything():
    result = run("closure", "-m", "fixA", "-i", "f1", "-x", "x:s", "-p", "0,1,2")
    assert result.exit_code == 0
    assert result.output == golden("closure_everything")


def test_closure_rejects_bad_indices():
    result = run("closure", "-m", "fixA", "-i", "f1", "-x", "x:s", "-p", "one")
    assert result.exit_code == 2


@pytest.mark.parametrize(
    "args, expected",
    [
        (("-m", "fixA"), "aut_swap"),
        (("-m", "fixA", "-i", "f1"), "aut_trivial"),
        (("-m", "fixA", "-i", "f12"), "aut_swap"),
        (("-m", "fixB"), "aut_trivial"),
    ],
)
def test_aut(args, expected):
    result = run("aut", *args)
    assert result.exit_code == 0
    assert result.output == golden(expected)


def test_kb_equivalent():
    result = run("kb-equiv", "fixA:f1", "fixA:f2")
    assert result.exit_code == 0
    assert result.output == golden("kb_equiv")


def test_kb_equivalent_in_parallel():
    result = run("--jobs", "2", "kb-equiv", "fixA:f1,f12", "fixA:f2,f12")
    assert result.exit_code == 0
    assert "alpha: f1 -> f2\nalpha: f12 -> f12\n" in result.output


def test_kb_not_equivalent():
    result = run("kb-equiv", "fixA:f12", "fixA:f1")
    assert result.exit_code == 1
    assert result.output == golden("kb_not_equiv")


def test_invariant_breach_exit_code(monkeypatch):
    def breach(*_args, **_kwargs):
        raise InvariantBreach("two computations disagree")

    monkeypatch.setattr(cli, "kb_equivalent", breach)
    result = run("kb-equiv", "fixA:f1", "fixA:f2")
    assert result.exit_code == 1
    assert "invariant breach: two computations disagree" in result.output


def test_theory_closure_member():
    base = ("theory-closure-member", "-m", "fixA", "-i", "f1", "-x", "x:s", "-T", "p(x)")
    result = run(*base, "-c", "p(x) | p(add(x,x))")
    assert result.exit_code == 0
    assert result.output == golden("member_true")
    result = run(*base, "-c", "x == add(x,x)")
    assert result.exit_code == 1
    assert result.output == golden("member_false")


def test_theory_closure_member_names_the_bad_formula():
    result = run("theory-closure-member", "-m", "fixA:f1", "-x", "x:s",
                 "-T", "p(x)", "-T", "p(x) &", "-c", "p(x)")
    assert result.exit_code == 2
    assert "(line 2, column 7)" in result.output


@pytest.mark.parametrize(
    "formula, expected",
    [
        ("p(x)", "support_x"),
        ("p(x) | !p(x)", "support_none"),
        ("x == y", "support_xy"),
    ],
)
def test_support(formula, expected):
    result = run("support", "-m", "fixA:f1", "-x", "x:s,y:s", "-f", formula)
    assert result.exit_code == 0
    assert result.output == golden(expected)


def test_normalize_into_atoms():
    result = run("normalize", "-m", "fixA", "-x", "y:s", "-f", "p(y)",
                 "-s", "y := add(x,x)", "-t", "x:s")
    assert result.exit_code == 0
    assert result.output == golden("normalize_atoms")


def test_normalize_renames_quantifier():
    result = run("normalize", "-m", "fixA", "-x", "z:s", "-f", "E z. p(z)",
                 "-s", "z := x", "-t", "x:s")
    assert result.exit_code == 0
    assert result.output == golden("normalize_renamed")


def test_admissible():
    base = ("admissible", "-m", "fixA", "-i", "f1", "--source", "y:s", "--target", "x:s",
            "-s", "y := add(x,x)", "--set-a", "1")
    result = run(*base, "--set-b", "2")
    assert result.exit_code == 0
    assert result.output == golden("admissible_true")
    result = run(*base, "--set-b", "0")
    assert result.exit_code == 1
    assert result.output == golden("admissible_false")


@pytest.mark.parametrize("instance", ["f1", "f12"])
def test_rf(instance):
    result = run("rf", "-m", "fixA", "-i", instance, "-x", "x:s", "--budget", "0")
    assert result.exit_code == 0
    assert result.output == golden(f"rf_{instance}")


def test_geo_equiv_disagreement():
    result = run("geo-equiv", "fixA:f1", "fixA:f12", "--depth", "3")
    assert result.exit_code == 1
    lines = result.output.splitlines(keepends=True)
    assert lines[0] == "verdict: DISAGREE\n"
    assert lines[1].startswith("theories: ")
    assert "".join(lines[2:]) == golden("geo_equiv_witness")


def test_geo_equiv_isomorphic_models():
    result = run("geo-equiv", "fixA:f1", "fixA:f2")
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "verdict: NO-DISAGREEMENT-UP-TO-BOUNDS"


def test_elem_equiv():
    result = run("elem-equiv", "fixA:f1", "fixA:f12")
    assert result.exit_code == 1
    assert result.output.splitlines()[0] == "verdict: DISAGREE"
    result = run("elem-equiv", "fixA:f1", "fixA:f2")
    assert result.exit_code == 0
