"""
Blackboards holding the string values exchanged between nodes

Port values of the form `{key}` refer to blackboard entries. Trees referenced through
`SubTree` elements receive their own blackboard whose entries are either remapped to
entries of the parent or set to literal values.

.. autosummary::
   :nosignatures:

   Blackboard
   parse_reference
"""

from __future__ import annotations

import logging
import re
from typing import Dict, Optional

_REFERENCE_RE = re.compile(r"^\{\s*([^{}\s]+)\s*\}$")


def parse_reference(value: str) -> Optional[str]:
    """return the key of a blackboard reference `{key}` or `None`"""
    match = _REFERENCE_RE.match(value.strip())
    return match.group(1) if match else None


class Blackboard:
    """a scope of key-value pairs, possibly linked to a parent scope"""

    def __init__(
        self,
        parent: Blackboard = None,
        remapping: Dict[str, str] = None,
        *,
        autoremap: bool = False,
    ):
        """
        Args:
            parent (:class:`Blackboard`, optional):
                The scope of the tree that references this one
            remapping (dict, optional):
                Maps keys of this scope to keys of the parent scope
            autoremap (bool):
                Whether keys without explicit remapping are shared with the parent
        """
        if (remapping or autoremap) and parent is None:
            raise ValueError("Remapping requires a parent blackboard")
        self.parent = parent
        self.remapping: Dict[str, str] = dict(remapping or {})
        self.autoremap = autoremap
        self._values: Dict[str, str] = {}
        self._logger = logging.getLogger(self.__class__.__name__)

    def _target(self, key: str):
        """return the scope and key that store `key`"""
        if key in self.remapping:
            return self.parent, self.remapping[key]
        if self.autoremap and key not in self._values:
            return self.parent, key
        return None, key

    def get(self, key: str) -> Optional[str]:
        scope, target = self._target(key)
        if scope is not None:
            return scope.get(target)
        return self._values.get(key)

    def set(self, key: str, value: str) -> None:
        scope, target = self._target(key)
        if scope is not None:
            scope.set(target, value)
        else:
            self._values[key] = str(value)

    def define(self, key: str, value: str) -> None:
        """store a value in this scope regardless of remapping"""
        self._values[key] = str(value)

    def __contains__(self, key: str) -> bool:
        return self.get(key) is not None

    def resolve(self, value: str) -> str:
        """replace a blackboard reference by the stored value

        References to missing entries are returned unchanged.
        """
        key = parse_reference(value)
        if key is None:
            return value
        stored = self.get(key)
        if stored is None:
            self._logger.debug(f"Blackboard entry `{key}` is not set")
            return value
        return stored

    def to_dict(self) -> Dict[str, str]:
        """dict: the entries stored in this scope"""
        return dict(self._values)

    def __repr__(self):
        return f"{self.__class__.__name__}({self._values!r})"
