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

"""Exceptions raised by halgeo."""


class HalgeoError(Exception):
    """Base class of all errors raised by the library."""


class ParseError(HalgeoError):
    """Malformed formula, theory or model text.

    :param message: What went wrong.
    :param line: The 1-based line of the offending token.
    :param column: The 1-based column of the offending token.
    """

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self._message = message
        self._line = line
        self._column = column

    @property
    def message(self) -> str:
        """
        :returns: The error message without the position.
        """
        return self._message

    @property
    def line(self) -> int:
        """
        :returns: The line of the error.
        """
        return self._line

    @property
    def column(self) -> int:
        """
        :returns: The column of the error.
        """
        return self._column


class SortError(HalgeoError):
    """An ill-sorted term or formula, or a reference to an unknown symbol."""


class ContextError(HalgeoError):
    """Arguments live over different variable contexts or point spaces."""


class SpaceTooLargeError(HalgeoError):
    """A point space exceeds the configured number of points."""


class InvariantBreach(HalgeoError):
    """Two independent computations of the same value disagreed."""
