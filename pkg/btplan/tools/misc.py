"""
Miscellaneous python functions

.. autosummary::
   :nosignatures:

   ensure_directory_exists
   classproperty
   canonical_json
   content_hash
   write_text_atomic
"""

import functools
import hashlib
import json
import os
from pathlib import Path
from typing import Any, Union


def ensure_directory_exists(folder: Union[str, Path]) -> None:
    """creates a folder if it not already exists

    Args:
        folder (str): path of the new folder
    """
    if str(folder) == "":
        return
    Path(folder).mkdir(parents=True, exist_ok=True)


class classproperty(property):
    """decorator that can be used to define read-only properties for classes.

    Example:
        The decorator can be used much like the `property` decorator::

            class Test():

                item: str = 'World'

                @classproperty
                def message(cls):
                    return 'Hello ' + cls.item

            print(Test.message)
    """

    def __init__(self, fget, doc=None):
        @functools.wraps(fget)
        def wrapped(obj):
            return fget(obj.__class__)

        super().__init__(fget=wrapped, doc=doc)
        if doc is not None:
            self.__doc__ = doc

    def __get__(self, obj, objtype):
        return self.fget.__wrapped__(objtype)

    def setter(self, fset):
        raise NotImplementedError("classproperty is read-only")


def canonical_json(data: Any) -> str:
    """serialize data to JSON with sorted keys and without insignificant whitespace

    Args:
        data: A JSON-serializable python object

    Returns:
        str: A representation that is identical for equal data
    """
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def content_hash(data: Any) -> str:
    """return a stable hexadecimal digest of JSON-serializable data"""
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def write_text_atomic(path: Union[str, Path], text: str) -> None:
    """write a text file such that readers never observe a partial file

    Args:
        path (str or :class:`~pathlib.Path`): The destination
        text (str): The content, written as UTF-8
    """
    path = Path(path)
    ensure_directory_exists(path.parent)
    tmp_path = path.with_name(path.name + ".tmp")
    with open(tmp_path, "w", encoding="utf-8", newline="\n") as fp:
        fp.write(text)
    os.replace(tmp_path, path)
