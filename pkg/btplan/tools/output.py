"""
Showing the progress of long evaluations

.. autosummary::
   :nosignatures:

   get_progress_bar_class
   display_progress
"""

import sys
import warnings
from typing import Iterable, Optional, Type


class SimpleProgress:
    """writes one dot to stderr per finished item"""

    def __init__(self, iterable: Iterable = None, total: int = None, **kwargs):
        self.iterable = [] if iterable is None else iterable
        self.total = total
        self.n = 0

    def __iter__(self):
        for item in self.iterable:
            yield item
            self.n += 1
            sys.stderr.write(".")
            sys.stderr.flush()
        sys.stderr.write("\n")

    def set_description(self, desc: str = None, refresh: bool = True):
        pass

    def close(self):
        pass


def get_progress_bar_class() -> Type:
    """the class used for progress bars

    Returns `tqdm.tqdm` if the optional package is installed and
    :class:`SimpleProgress` otherwise.
    """
    try:
        import tqdm
    except ImportError:
        warnings.warn("`tqdm` is not installed. Progress is indicated by dots.")
        return SimpleProgress
    return tqdm.tqdm


def display_progress(
    iterator: Iterable,
    total: int = None,
    enabled: Optional[bool] = None,
    **kwargs,
):
    """wrap an iterator such that its progress is shown on stderr

    Args:
        iterator (iter): The items
        total (int): The number of items, if known
        enabled (bool, optional): Whether progress is shown. The default is the
            configuration value `harness.progress`.
        **kwargs: Forwarded to the progress bar class, e.g. `desc` or `unit`

    Returns:
        An iterable yielding the same items
    """
    if enabled is None:
        from .. import config

        enabled = config["harness.progress"]
    if not enabled:
        return iterator
    return get_progress_bar_class()(iterator, total=total, **kwargs)
