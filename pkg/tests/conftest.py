"""Shared fixtures: the cyclic group of order three with a unary relation."""

import os
import random
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

# pylint: disable=wrong-import-position
from halgeo.algebra import FiniteAlgebra, Signature, VarContext
from halgeo.geometry import Model
from halgeo.knowledge import Multimodel


def z3_signature() -> Signature:
    return Signature(["s"], [("add", ["s", "s"], "s")], [("p", ["s"])])


def z3_algebra() -> FiniteAlgebra:
    return FiniteAlgebra.from_functions(
        z3_signature(), {"s": 3}, {"add": lambda a, b: (a + b) % 3}
    )


def z2_algebra() -> FiniteAlgebra:
    return FiniteAlgebra.from_functions(
        z3_signature(), {"s": 2}, {"add": lambda a, b: (a + b) % 2}
    )


@pytest.fixture(name="z3")
def fixture_z3() -> FiniteAlgebra:
    return z3_algebra()


@pytest.fixture(name="z2")
def fixture_z2() -> FiniteAlgebra:
    return z2_algebra()


@pytest.fixture(name="sig")
def fixture_sig() -> Signature:
    return z3_signature()


@pytest.fixture(name="f1")
def fixture_f1(z3) -> Model:
    return Model(z3, {"p": [(1,)]}, name="f1")


@pytest.fixture(name="f2")
def fixture_f2(z3) -> Model:
    return Model(z3, {"p": [(2,)]}, name="f2")


@pytest.fixture(name="f12")
def fixture_f12(z3) -> Model:
    return Model(z3, {"p": [(1,), (2,)]}, name="f12")


@pytest.fixture(name="fix_a")
def fixture_fix_a(f1, f2, f12) -> Multimodel:
    return Multimodel(f1.algebra, [f1, f2, f12], name="fixA")


@pytest.fixture(name="fix_b")
def fixture_fix_b() -> Multimodel:
    algebra = z2_algebra()
    return Multimodel(algebra, [Model(algebra, {"p": [(1,)]}, name="f")], name="fixB")


@pytest.fixture(name="xy")
def fixture_xy() -> VarContext:
    return VarContext.parse("x:s, y:s")


@pytest.fixture(name="x")
def fixture_x() -> VarContext:
    return VarContext.parse("x:s")


@pytest.fixture(name="rng")
def fixture_rng() -> random.Random:
    return random.Random(1234)
