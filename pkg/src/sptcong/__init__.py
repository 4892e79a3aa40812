"""Exact q-series toolkit for smallest-parts congruences.

Builds the generating functions and mock modular forms attached to spt,
s-bar-pt1 and M2spt, applies weight 3/2 Hecke operators to them, and
verifies their congruences on finite ranges.
"""

from .series import INF, UNIT, QSeries

__all__ = ["INF", "UNIT", "QSeries"]
__version__ = "0.1.0"
