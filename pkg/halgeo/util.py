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

"""Helper classes and functions for halgeo."""

from collections.abc import Iterable, Iterator, Sequence


class Violation:
    """A single failed check of a validation.

    :param location: Where the problem was found, for example `op add`.
    :param message: What is wrong there.
    """

    def __init__(self, location: str, message: str):
        self._location = location
        self._message = message

    @property
    def location(self) -> str:
        """
        :returns: The place of the violation.
        """
        return self._location

    @property
    def message(self) -> str:
        """
        :returns: The description of the violation.
        """
        return self._message

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Violation):
            return NotImplemented
        return (self._location, self._message) == (other.location, other.message)

    def __hash__(self) -> int:
        return hash((self._location, self._message))

    def __str__(self) -> str:
        return f"{self._location}: {self._message}"

    def __repr__(self) -> str:
        return f"Violation({self._location!r}, {self._message!r})"


class ValidationReport:
    """Collects the violations found by a validation.

    An empty report means that everything checked holds.

    Examples::

        report = ValidationReport()
        report.add("op add", "unknown sort t")
        print(report.ok) # False
        print(report.messages) # ["unknown sort t"]
    """

    def __init__(self, violations: Iterable[Violation] = ()):
        self._violations: list[Violation] = list(violations)

    @property
    def ok(self) -> bool:
        """
        :returns: Whether no violation was recorded.
        """
        return not self._violations

    @property
    def messages(self) -> list[str]:
        """
        :returns: The messages of all violations in the order of discovery.
        """
        return [violation.message for violation in self._violations]

    def add(self, location: str, message: str) -> None:
        """Record a violation.

        :param location: Where the problem was found.
        :param message: What is wrong there.
        """
        self._violations.append(Violation(location, message))

    def extend(self, other: "ValidationReport") -> None:
        """Append all violations of another report.

        :param other: The report whose violations are copied.
        """
        self._violations.extend(other)

    def __bool__(self) -> bool:
        return bool(self._violations)

    def __iter__(self) -> Iterator[Violation]:
        return iter(self._violations)

    def __len__(self) -> int:
        return len(self._violations)

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(str(violation) for violation in self._violations)


class FreshNames:
    """Generates variable names `_v0, _v1, ...` that avoid a set of names.

    The generator is the only stateful object used during a normalization
    and should not be shared between normalizations.

    :param avoid: Names that must never be produced.
    :param prefix: The prefix of the generated names.

    Examples::

        fresh = FreshNames(["_v0", "x"])
        print(fresh.take()) # "_v1"
        print(fresh.take()) # "_v2"
    """

    def __init__(self, avoid: Iterable[str] = (), prefix: str = "_v"):
        self._avoid = set(avoid)
        self._counter = 0
        self._prefix = prefix

    def take(self) -> str:
        """
        :returns: The next unused name.
        """
        while True:
            name = f"{self._prefix}{self._counter}"
            self._counter += 1
            if name not in self._avoid:
                self._avoid.add(name)
                return name

    def reserve(self, names: Iterable[str]) -> None:
        """Exclude more names from generation.

        :param names: The names that must not be produced.
        """
        self._avoid.update(names)


def cycle_notation(permutation: Sequence[int]) -> str:
    """Write a permutation of `0..n-1` as product of disjoint cycles.

    Fixed points are omitted, the identity is written as `()`.

    Examples::

        print(cycle_notation((0, 2, 1))) # "(1 2)"
        print(cycle_notation((0, 1))) # "()"

    :param permutation: The images of `0..n-1`.
    :returns: The cycle notation.
    """
    seen = set()
    cycles = []
    for start in range(len(permutation)):
        if start in seen or permutation[start] == start:
            seen.add(start)
            continue
        cycle = []
        current = start
        while current not in seen:
            seen.add(current)
            cycle.append(str(current))
            current = permutation[current]
        cycles.append("(" + " ".join(cycle) + ")")
    if not cycles:
        return "()"
    return "".join(cycles)


def mixed_radix_index(digits: Sequence[int], radices: Sequence[int]) -> int:
    """Combine digits into an index, the first digit being most significant.

    Examples::

        print(mixed_radix_index((2, 1), (3, 3))) # 7

    :param digits: The digits, each below its radix.
    :param radices: The radix of each position.
    :returns: The index.
    """
    index = 0
    for digit, radix in zip(digits, radices):
        index = index * radix + digit
    return index


def mixed_radix_digits(index: int, radices: Sequence[int]) -> tuple[int, ...]:
    """Inverse of :func:`mixed_radix_index`.

    :param index: The index.
    :param radices: The radix of each position.
    :returns: The digits, most significant first.
    """
    digits = []
    for radix in reversed(radices):
        index, digit = divmod(index, radix)
        digits.append(digit)
    return tuple(reversed(digits))
