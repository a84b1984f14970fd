"""Tests for the helpers and the bounds."""

import pytest

from halgeo.config import Bounds
from halgeo.util import (
    FreshNames,
    ValidationReport,
    cycle_notation,
    mixed_radix_digits,
    mixed_radix_index,
)


@pytest.mark.parametrize(
    "permutation, expected",
    [
        ((0, 1, 2), "()"),
        ((0, 2, 1), "(1 2)"),
        ((1, 2, 0), "(0 1 2)"),
        ((1, 0, 3, 2), "(0 1)(2 3)"),
    ],
)
def test_cycle_notation(permutation, expected):
    assert cycle_notation(permutation) == expected


def test_mixed_radix():
    assert mixed_radix_index((2, 1), (3, 3)) == 7
    assert mixed_radix_index((1, 0, 1), (2, 3, 2)) == 7
    assert mixed_radix_digits(7, (2, 3, 2)) == (1, 0, 1)
    assert mixed_radix_index((), ()) == 0


def test_fresh_names():
    fresh = FreshNames(["_v0", "x"])
    assert fresh.take() == "_v1"
    fresh.reserve(["_v2"])
    assert fresh.take() == "_v3"
    assert FreshNames(prefix="g").take() == "g0"


def test_validation_report():
    report = ValidationReport()
    assert report.ok
    assert str(report) == "valid"
    report.add("op add", "unknown sort t")
    other = ValidationReport()
    other.add("rel p", "relation arity must be at least 1")
    report.extend(other)
    assert not report.ok
    assert len(report) == 2
    assert report.messages == ["unknown sort t", "relation arity must be at least 1"]
    assert str(report) == "op add: unknown sort t\nrel p: relation arity must be at least 1"


def test_bounds_from_env():
    bounds = Bounds.from_env({"HALGEO_MAX_POINTS": "64", "UNRELATED": "x"})
    assert bounds.max_points == 64
    assert bounds.max_carrier == 8
    assert bounds == Bounds(max_points=64)


@pytest.mark.parametrize("raw", ["many", "-1"])
def test_bounds_from_env_rejects_bad_values(raw):
    with pytest.raises(ValueError):
        Bounds.from_env({"HALGEO_TERM_DEPTH": raw})


def test_bounds_replace():
    bounds = Bounds().replace(context_bound=3)
    assert bounds.context_bound == 3
    assert bounds.theory_bound == 2
    with pytest.raises(TypeError):
        Bounds().replace(colour=1)
