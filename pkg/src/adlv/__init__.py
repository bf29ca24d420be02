"""Affine Deligne-Lusztig varieties: classification invariants and a GL_n lattice oracle."""

__version__ = "0.1.0"
