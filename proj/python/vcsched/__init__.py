"""Hybrid offline/online graph-task scheduling over vehicular clouds."""

from ._vcsched import *  # noqa: F401,F403
from ._vcsched import __doc__  # noqa: F401
