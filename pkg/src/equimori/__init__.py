"""Equivariant reduction of rational-surface lattices.

The package models the 1-cycle lattice of a rational surface together with a
finite group of isometries, enumerates negative curves, runs the equivariant
contraction loop to a minimal model, and carries the supporting arithmetic:
ramified-cover Euler characteristics, the double-cover branch case analysis,
and exact cyclotomic invariant theory for (4,4)-curves on P^1 x P^1.
"""

from . import covers, curves, cyclo, groups, invariants, mori, picard  # noqa: F401
from .errors import EquimoriError  # noqa: F401

__version__ = "0.1.0"
