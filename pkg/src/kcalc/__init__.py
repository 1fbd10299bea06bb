"""Exact K-theory toolkit: abelian groups, characters, Tate cohomology, AHSS pages."""

__version__ = "0.1.0"
