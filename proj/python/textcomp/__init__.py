"""Pairwise text-complexity assessment toolkit (C++ core)."""

from ._textcomp import *  # noqa: F401,F403
from ._textcomp import __doc__  # noqa: F401

__version__ = "0.1.0"
