"""Exact-arithmetic homology for semisimplicial, augmented semisimplicial,
and semicubical modules, with the comparison functors between them."""

__version__ = "0.1.0"
