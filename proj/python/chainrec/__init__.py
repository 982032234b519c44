"""Exact recurrence analysis for finite Markov chains and interval maps.

The heavy lifting lives in the compiled ``_core`` module; this package
re-exports its whole public surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _doc

__doc__ = _doc
__version__ = "0.1.0"
