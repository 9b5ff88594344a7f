"""
Infrastructure for describing configuration parameters

.. autosummary::
   :nosignatures:

   Parameter
   convert_bool
"""

from __future__ import annotations

import logging
import os
from typing import Any, Callable, Dict, Optional

_TRUE_STRINGS = {"1", "true", "yes", "on"}
_FALSE_STRINGS = {"0", "false", "no", "off", ""}


def convert_bool(value: Any) -> bool:
    """convert a value to a boolean, accepting the usual textual spellings

    Args:
        value: The value, typically a `bool` or a string read from the environment

    Returns:
        bool: The interpreted value
    """
    if isinstance(value, str):
        text = value.strip().lower()
        if text in _TRUE_STRINGS:
            return True
        elif text in _FALSE_STRINGS:
            return False
        raise ValueError(f"Cannot interpret `{value}` as a boolean")
    return bool(value)


class Parameter:
    """class representing a single parameter"""

    def __init__(
        self,
        name: str,
        default_value=None,
        cls: Callable = object,
        description: str = "",
        env_var: Optional[str] = None,
        extra: Dict[str, Any] = None,
    ):
        """initialize a parameter

        Args:
            name (str):
                The name of the parameter
            default_value:
                The default value
            cls:
                The type of the parameter, which is used for conversion. `bool` is
                replaced by :func:`convert_bool` so textual values are understood.
            description (str):
                A string describing the impact of this parameter
            env_var (str, optional):
                Name of an environment variable that overrides the default value
            extra (dict):
                Extra arguments that are stored with the parameter
        """
        self.name = name
        self.default_value = default_value
        self.cls = convert_bool if cls is bool else cls
        self.description = description
        self.env_var = env_var
        self.extra = {} if extra is None else extra

        if cls is not object and default_value is not None:
            # check whether the default value is of the correct type
            if self.cls(default_value) != default_value:
                logging.warning(
                    "Default value `%s` does not seem to be of type `%s`",
                    name,
                    getattr(cls, "__name__", cls),
                )

    def __repr__(self):
        return (
            f'{self.__class__.__name__}(name="{self.name}", default_value='
            f'"{self.default_value}", env_var={self.env_var!r}, '
            f'description="{self.description}")'
        )

    __str__ = __repr__

    @property
    def value(self):
        """the current value, taking environment overrides into account"""
        if self.env_var and self.env_var in os.environ:
            return self.convert(os.environ[self.env_var])
        return self.convert()

    def convert(self, value=None):
        """converts a `value` into the correct type for this parameter. If
        `value` is not given, the default value is converted.

        Args:
            value: The value to convert

        Returns:
            The converted value
        """
        if value is None:
            value = self.default_value

        if self.cls is object or value is None:
            return value
        try:
            return self.cls(value)
        except ValueError:
            raise ValueError(
                f"Could not convert {value!r} for parameter '{self.name}'"
            )
