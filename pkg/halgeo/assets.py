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

"""Provides easy access to the model documents bundled with the project."""

import os

from .document import ModelDocument, read_model_document
from .errors import HalgeoError
from .knowledge import Multimodel


class _FileFinder(str):
    """Obtain the file path of assets from the attributes of this class.

    :param basepath: The path prepended to an attribute name. This is usually a
                     folder.
    :param postfix: This is appended after the attribute name. Usually a file
                    extension.

    Examples::

        print(os.listdir("models/")) # ["fixA.model"]
        models = _FileFinder("models/", ".model")
        print(models.fixA) # "models/fixA.model"
        fix_a = models.fixA() # the parsed multimodel
    """

    def __new__(cls, basepath: str, postfix: str = ""):
        return super().__new__(cls, basepath)

    def __init__(self, basepath: str, postfix: str = ""):
        self._basepath = basepath
        self._postfix = postfix

    def __call__(self) -> Multimodel:
        """
        :returns: The multimodel of the document.
        """
        return read_model_document(str(self)).multimodel

    def __getattr__(self, name: str) -> "_FileFinder":
        if name.startswith("_"):
            raise AttributeError(name)
        path = self._basepath + name + self._postfix
        try:
            os.stat(path)
        except OSError as exception:
            raise AttributeError(
                f"No attribute `{name}`. File '{path}' does not exist"
            ) from exception

        return _FileFinder(path)

    def names(self) -> list[str]:
        """
        :returns: The attribute names of all files in the folder.
        """
        return sorted(
            entry[: -len(self._postfix)] if self._postfix else entry
            for entry in os.listdir(self._basepath)
            if entry.endswith(self._postfix)
        )

    def __str__(self):
        return self._basepath


Models = _FileFinder(os.path.dirname(__file__) + os.sep + "models" + os.sep, ".model")
"""Get the paths to the model documents in `halgeo/models` as attributes.

Examples::

    from halgeo.assets import Models
    print(Models.fixA)  # halgeo/models/fixA.model
"""


def load_reference(reference: str) -> ModelDocument:
    """Load the document behind a model reference `NAME[:inst,inst]`.

    `NAME` is a path or the name of a bundled model. Listed instances are
    selected in the given order.

    :param reference: The model reference.
    :returns: The document, restricted to the selected instances.
    """
    name, _, selection = reference.rpartition(":") if ":" in reference else (reference, "", "")
    if os.path.exists(name):
        path = name
    else:
        try:
            path = str(getattr(Models, name))
        except AttributeError as exception:
            raise HalgeoError(
                f"No model file '{name}' and no bundled model of that name; "
                f"bundled are {', '.join(Models.names())}"
            ) from exception
    document = read_model_document(path)
    if selection:
        names = [entry.strip() for entry in selection.split(",") if entry.strip()]
        document = ModelDocument(document.multimodel.select(names), document.aliases)

    return document
