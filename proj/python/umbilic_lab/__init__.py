"""Curvature, stability deficits, level sets and inverse curvature flow
for starshaped surfaces in three-dimensional space forms."""

from ._umbilic import *  # noqa: F401,F403
from ._umbilic import Error, Spaceform, Hypersurface

__all__ = [name for name in dir() if not name.startswith("_")]
