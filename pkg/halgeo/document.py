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

"""Text formats of models and theories.

A model document declares sorts, operation tables, relation symbols and any
number of instances::

    sort s = 3
    names s = zero one two
    op add : s s -> s
    0 1 2
    1 2 0
    2 0 1
    rel p : s
    instance f1
    p: 1

A table has one row per tuple of all but the last argument, in row-major
order, and one entry per element of the sort of the last argument. Tuple
lines list the elements of one tuple separated by commas. Elements are
numbers or names declared with `names`. `#` starts a comment.

A theory document starts with `vars x:s, y:s` and has one formula per line.
"""

from collections.abc import Iterable
from dataclasses import dataclass, field
import itertools
import logging
import math
import os
import re

from .algebra import IDENTIFIER, FiniteAlgebra, Signature, VarContext
from .config import DEFAULT_BOUNDS
from .errors import HalgeoError, ParseError
from .formula import parse_formula
from .galois import Theory
from .geometry import Model
from .knowledge import Multimodel

logger = logging.getLogger(__name__)

_SORT = re.compile(r"sort\s+(?P<name>\S+)\s*=\s*(?P<size>\S+)\Z")
_NAMES = re.compile(r"names\s+(?P<sort>\S+)\s*=(?P<names>.*)\Z")
_OP = re.compile(r"op\s+(?P<name>\S+)\s*:(?P<args>[^-]*)->\s*(?P<result>\S+)\Z")
_REL = re.compile(r"rel\s+(?P<name>\S+)\s*:(?P<args>.*)\Z")
_INSTANCE = re.compile(r"instance\s+(?P<name>\S+)\Z")
_TUPLE = re.compile(r"(?P<name>[^:\s]+)\s*:(?P<elements>.*)\Z")


@dataclass
class _Line:
    number: int
    indent: int
    text: str

    def column(self, offset: int = 0) -> int:
        return self.indent + offset + 1


def _lines(text: str) -> list[_Line]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        stripped = content.lstrip()
        if stripped:
            lines.append(_Line(number, len(content) - len(stripped), stripped))
    return lines


@dataclass
class ModelDocument:
    """A parsed model document.

    :param multimodel: The algebra with all of its instances.
    :param aliases: The element names declared per sort.
    """

    multimodel: Multimodel
    aliases: dict[str, list[str]] = field(default_factory=dict)

    def element(self, sort: str, token: str) -> int:
        """
        :param sort: A sort.
        :param token: An element number or name.
        :returns: The element.
        """
        names = self.aliases.get(sort, [])
        if token in names:
            return names.index(token)
        size = self.multimodel.algebra.carrier(sort)
        if not token.isdigit() or int(token) >= size:
            raise ParseError(f"`{token}` is not an element of sort `{sort}`")
        return int(token)


class _ModelReader:
    """Reads a model document line by line."""

    def __init__(self, text: str):
        self._lines = _lines(text)
        self._position = 0
        self._sorts: dict[str, int] = {}
        self._aliases: dict[str, list[str]] = {}
        self._ops: list[tuple[str, tuple[str, ...], str]] = []
        self._tables: dict[str, dict[tuple[int, ...], int]] = {}
        self._rels: list[tuple[str, tuple[str, ...]]] = []
        self._instances: list[tuple[str, dict[str, set[tuple[int, ...]]]]] = []
        self._names: set[str] = set()

    def _declare(self, name: str, line: _Line, offset: int) -> None:
        if not IDENTIFIER.match(name):
            raise ParseError(f"Invalid name `{name}`", line.number, line.column(offset))
        if name in self._names:
            raise ParseError(f"Duplicate name `{name}`", line.number, line.column(offset))
        self._names.add(name)

    def _sort(self, name: str, line: _Line) -> str:
        if name not in self._sorts:
            offset = line.text.find(name)
            raise ParseError(f"Unknown sort `{name}`", line.number, line.column(offset))
        return name

    def _element(self, sort: str, token: str, line: _Line, offset: int) -> int:
        if token in self._aliases.get(sort, []):
            return self._aliases[sort].index(token)
        if not token.isdigit():
            raise ParseError(
                f"`{token}` is not an element of sort `{sort}`", line.number, line.column(offset)
            )
        value = int(token)
        if value >= self._sorts[sort]:
            raise ParseError(
                f"Element {value} is out of range for sort `{sort}` of size {self._sorts[sort]}",
                line.number,
                line.column(offset),
            )
        return value

    def read(self) -> tuple[FiniteAlgebra, list[Model], dict[str, list[str]]]:
        while self._position < len(self._lines):
            line = self._lines[self._position]
            self._position += 1
            keyword = line.text.split()[0]
            if keyword == "sort":
                self._read_sort(line)
            elif keyword == "names":
                self._read_names(line)
            elif keyword == "op":
                self._read_op(line)
            elif keyword == "rel":
                self._read_rel(line)
            elif keyword == "instance":
                self._read_instance(line)
            else:
                raise ParseError(f"Unexpected line `{line.text}`", line.number, line.column())
        signature = Signature(self._sorts, self._ops, self._rels)
        algebra = FiniteAlgebra(signature, self._sorts, self._tables)
        models = [Model(algebra, interp, name) for name, interp in self._instances]
        return algebra, models, self._aliases

    def _read_sort(self, line: _Line) -> None:
        if self._instances:
            raise ParseError("Sorts must precede the instances", line.number, line.column())
        match = _SORT.match(line.text)
        if not match:
            raise ParseError("Expected `sort NAME = SIZE`", line.number, line.column())
        name, size = match.group("name"), match.group("size")
        self._declare(name, line, match.start("name"))
        if not size.isdigit() or int(size) == 0:
            raise ParseError(
                f"Carrier size must be a positive number, got `{size}`",
                line.number,
                line.column(match.start("size")),
            )
        if int(size) > DEFAULT_BOUNDS.max_carrier:
            raise ParseError(
                f"Carrier of `{name}` exceeds the limit of {DEFAULT_BOUNDS.max_carrier}",
                line.number,
                line.column(match.start("size")),
            )
        self._sorts[name] = int(size)

    def _read_names(self, line: _Line) -> None:
        match = _NAMES.match(line.text)
        if not match:
            raise ParseError("Expected `names SORT = NAME ...`", line.number, line.column())
        sort = self._sort(match.group("sort"), line)
        names = match.group("names").split()
        if len(names) != self._sorts[sort] or len(set(names)) != len(names):
            raise ParseError(
                f"Sort `{sort}` needs {self._sorts[sort]} distinct names, got {len(names)}",
                line.number,
                line.column(match.start("names")),
            )
        for name in names:
            if name.isdigit() or not IDENTIFIER.match(name):
                offset = line.text.find(name)
                raise ParseError(
                    f"Invalid element name `{name}`", line.number, line.column(offset)
                )
        self._aliases[sort] = names

    def _read_op(self, line: _Line) -> None:
        if self._rels or self._instances:
            raise ParseError("Operations must precede relations", line.number, line.column())
        match = _OP.match(line.text)
        if not match:
            raise ParseError("Expected `op NAME : SORT ... -> SORT`", line.number, line.column())
        name = match.group("name")
        self._declare(name, line, match.start("name"))
        args = tuple(self._sort(sort, line) for sort in match.group("args").split())
        result = self._sort(match.group("result"), line)
        self._ops.append((name, args, result))
        sizes = [self._sorts[sort] for sort in args]
        row_count = math.prod(sizes[:-1])
        width = sizes[-1] if sizes else 1
        rows = itertools.product(*(range(size) for size in sizes[:-1]))
        table = {}
        for leading in rows:
            if self._position >= len(self._lines):
                raise ParseError(
                    f"Table of `{name}` needs {row_count} rows", line.number, line.column()
                )
            row = self._lines[self._position]
            self._position += 1
            entries = row.text.split()
            if len(entries) != width:
                raise ParseError(
                    f"Table row of `{name}` has {len(entries)} entries, expected {width}",
                    row.number,
                    row.column(),
                )
            offsets = [match.start() for match in re.finditer(r"\S+", row.text)]
            for last, (entry, offset) in enumerate(zip(entries, offsets)):
                key = leading + (last,) if sizes else ()
                table[key] = self._element(result, entry, row, offset)
        self._tables[name] = table

    def _read_rel(self, line: _Line) -> None:
        if self._instances:
            raise ParseError("Relations must precede the instances", line.number, line.column())
        match = _REL.match(line.text)
        if not match:
            raise ParseError("Expected `rel NAME : SORT ...`", line.number, line.column())
        name = match.group("name")
        self._declare(name, line, match.start("name"))
        args = tuple(self._sort(sort, line) for sort in match.group("args").split())
        if not args:
            raise ParseError(
                f"Relation `{name}` needs at least one argument", line.number, line.column()
            )
        self._rels.append((name, args))

    def _read_instance(self, line: _Line) -> None:
        match = _INSTANCE.match(line.text)
        if not match:
            raise ParseError("Expected `instance NAME`", line.number, line.column())
        name = match.group("name")
        if not IDENTIFIER.match(name) or name in (entry[0] for entry in self._instances):
            raise ParseError(
                f"Invalid or duplicate instance `{name}`",
                line.number,
                line.column(match.start("name")),
            )
        rels = dict(self._rels)
        interp: dict[str, set[tuple[int, ...]]] = {rel: set() for rel in rels}
        while self._position < len(self._lines):
            row = self._lines[self._position]
            entry = _TUPLE.match(row.text)
            if not entry or row.text.split()[0] in ("instance", "sort", "op", "rel", "names"):
                break
            self._position += 1
            rel = entry.group("name")
            if rel not in rels:
                raise ParseError(f"Unknown relation `{rel}`", row.number, row.column())
            tokens = entry.group("elements").split(",")
            if len(tokens) != len(rels[rel]):
                raise ParseError(
                    f"Relation `{rel}` takes {len(rels[rel])} elements, got {len(tokens)}",
                    row.number,
                    row.column(entry.start("elements")),
                )
            offset = entry.start("elements")
            elements = []
            for sort, token in zip(rels[rel], tokens):
                stripped = token.strip()
                position = offset + len(token) - len(token.lstrip())
                elements.append(self._element(sort, stripped, row, position))
                offset += len(token) + 1
            interp[rel].add(tuple(elements))
        self._instances.append((name, interp))


def parse_model_document(text: str, name: str = "") -> ModelDocument:
    """
    :param text: A model document.
    :param name: The name of the multimodel.
    :returns: The parsed document.
    """
    algebra, models, aliases = _ModelReader(text).read()
    multimodel = Multimodel(algebra, models, name)
    report = multimodel.validate()
    if not report.ok:
        raise ParseError(f"Invalid model: {report}")
    logger.debug("Read %s with instances %s", name or "a model", list(multimodel.names))

    return ModelDocument(multimodel, aliases)


def parse_model_text(text: str, name: str = "") -> Multimodel:
    """
    :param text: A model document.
    :param name: The name of the multimodel.
    :returns: The multimodel it declares.
    """
    return parse_model_document(text, name).multimodel


def read_model_document(path: str) -> ModelDocument:
    """
    :param path: The path of a model document.
    :returns: The parsed document, named after the file.
    """
    try:
        with open(path, encoding="utf-8") as document:
            text = document.read()
    except OSError as exception:
        raise HalgeoError(f"Cannot read model file '{path}': {exception}") from exception
    stem = os.path.splitext(os.path.basename(path))[0]
    return parse_model_document(text, stem)


def parse_model_file(path: str) -> Multimodel:
    """Read a model document.

    :param path: The path of the document.
    :returns: The multimodel.

    Examples::

        fix_a = parse_model_file(Models.fixA)
        print(fix_a.names) # ('f1', 'f2', 'f12')
    """
    return read_model_document(path).multimodel


def parse_theory_text(text: str, sig: Signature) -> Theory:
    """Read a theory document.

    :param text: The document, a `vars` line followed by one formula per line.
    :param sig: The signature of the formulas.
    :returns: The theory.
    """
    lines = _lines(text)
    if not lines or lines[0].text.split()[0] != "vars":
        raise ParseError("A theory starts with `vars x:s, ...`", lines[0].number if lines else 1)
    header = lines[0]
    try:
        context = VarContext.parse(header.text[len("vars") :])
    except HalgeoError as exception:
        raise ParseError(str(exception), header.number, header.column()) from exception
    formulas = []
    for line in lines[1:]:
        try:
            formulas.append(parse_formula(line.text, context, sig))
        except ParseError as exception:
            raise ParseError(
                exception.message, line.number, line.column(exception.column - 1)
            ) from exception
        except HalgeoError as exception:
            raise ParseError(str(exception), line.number, line.column()) from exception
    return Theory(context, formulas)


def parse_theory_lines(context: VarContext, texts: Iterable[str], sig: Signature) -> Theory:
    """Read a theory given as separate formulas, as on the command line.

    Parse errors report the 1-based number of the entry as their line.

    :param context: The context of the theory.
    :param texts: One formula per entry.
    :param sig: The signature.
    :returns: The theory.
    """
    formulas = []
    for number, text in enumerate(texts, start=1):
        try:
            formulas.append(parse_formula(text, context, sig))
        except ParseError as exception:
            raise ParseError(exception.message, number, exception.column) from exception
    return Theory(context, formulas)
