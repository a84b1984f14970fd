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

"""Desk-scale bounds shared by the library and the command line."""

import os
from collections.abc import Mapping


class Bounds:
    """Limits that keep the exhaustive computations at desk scale.

    :param max_carrier: The largest carrier accepted per sort.
    :param max_points: The largest point space that is materialized.
    :param formula_depth: Depth bound of the formula samplers.
    :param term_depth: Term depth of the atomic formulas generating the
                       definable sets.
    :param context_bound: The number of variables of the largest context
                          visited by bounded sweeps.
    :param theory_bound: The number of formulas of the largest theory
                         visited by bounded sweeps.
    """

    ENVIRONMENT = {
        "max_carrier": "HALGEO_MAX_CARRIER",
        "max_points": "HALGEO_MAX_POINTS",
        "formula_depth": "HALGEO_FORMULA_DEPTH",
        "term_depth": "HALGEO_TERM_DEPTH",
    }
    """Environment variables overriding the defaults."""

    def __init__(
        self,
        max_carrier: int = 8,
        max_points: int = 2**20,
        formula_depth: int = 6,
        term_depth: int = 2,
        context_bound: int = 2,
        theory_bound: int = 2,
    ):
        self._max_carrier = max_carrier
        self._max_points = max_points
        self._formula_depth = formula_depth
        self._term_depth = term_depth
        self._context_bound = context_bound
        self._theory_bound = theory_bound

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> "Bounds":
        """Read the defaults, overridden by the environment.

        :param environ: The environment to read, `os.environ` by default.
        :returns: The bounds.
        """
        if environ is None:
            environ = os.environ
        values = {}
        for field, variable in cls.ENVIRONMENT.items():
            if variable not in environ:
                continue
            raw = environ[variable]
            try:
                value = int(raw)
            except ValueError as exception:
                raise ValueError(
                    f"Environment variable {variable} must be an integer, got '{raw}'"
                ) from exception
            if value < 0:
                raise ValueError(f"Environment variable {variable} must be positive")
            values[field] = value

        return cls(**values)

    @property
    def max_carrier(self) -> int:
        """
        :returns: The largest carrier accepted per sort.
        """
        return self._max_carrier

    @property
    def max_points(self) -> int:
        """
        :returns: The largest number of points of a materialized space.
        """
        return self._max_points

    @property
    def formula_depth(self) -> int:
        """
        :returns: The depth bound of the formula samplers.
        """
        return self._formula_depth

    @property
    def term_depth(self) -> int:
        """
        :returns: The term depth of the generating atomic formulas.
        """
        return self._term_depth

    @property
    def context_bound(self) -> int:
        """
        :returns: The size of the largest context of bounded sweeps.
        """
        return self._context_bound

    @property
    def theory_bound(self) -> int:
        """
        :returns: The size of the largest theory of bounded sweeps.
        """
        return self._theory_bound

    def replace(self, **changes: int) -> "Bounds":
        """
        :param changes: New values of some of the bounds.
        :returns: A copy with the given bounds replaced.
        """
        values = {
            "max_carrier": self._max_carrier,
            "max_points": self._max_points,
            "formula_depth": self._formula_depth,
            "term_depth": self._term_depth,
            "context_bound": self._context_bound,
            "theory_bound": self._theory_bound,
        }
        for name, value in changes.items():
            if name not in values:
                raise TypeError(f"Unknown bound `{name}`")
            values[name] = value

        return Bounds(**values)

    def _values(self) -> tuple[int, ...]:
        return (
            self._max_carrier,
            self._max_points,
            self._formula_depth,
            self._term_depth,
            self._context_bound,
            self._theory_bound,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bounds):
            return NotImplemented
        return self._values() == other._values()

    def __hash__(self) -> int:
        return hash(self._values())

    def __repr__(self) -> str:
        return (
            f"Bounds(max_carrier={self._max_carrier}, max_points={self._max_points}, "
            f"formula_depth={self._formula_depth}, term_depth={self._term_depth}, "
            f"context_bound={self._context_bound}, theory_bound={self._theory_bound})"
        )


DEFAULT_BOUNDS = Bounds.from_env()
"""The bounds used when a function is called without explicit bounds."""
