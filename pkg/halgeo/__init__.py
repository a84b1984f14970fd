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

"""Algebraic geometry over finite many-sorted models and the informational
equivalence of knowledge bases."""

from .algebra import FiniteAlgebra, Signature, VarContext
from .errors import HalgeoError
from .formula import TypedFormula, parse_formula
from .galois import Theory
from .geometry import Model, PointSet, PointSpace, eval_formula
from .knowledge import KnowledgeBase, Multimodel
