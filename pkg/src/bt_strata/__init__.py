"""Lattice models of the basic locus of unitary Rapoport-Zink spaces N^h(1, n-1)."""

__version__ = "0.1.0"
