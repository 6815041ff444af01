"""Exact rational-point counts on universal torsors and Manin-Peyre constants."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__, build_id  # noqa: F401
