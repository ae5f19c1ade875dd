"""Exact coherent-state optics and entanglement concentration for cluster-type states."""

from ._ecsim import *  # noqa: F401,F403
from ._ecsim import __version__

__all__ = [name for name in dir() if not name.startswith("_")]
