"""Minkowski-Voronoi complexes, canonical diagrams and words of rank-1 lattices."""

__version__ = "0.1.0"
