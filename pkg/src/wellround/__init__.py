"""Well-rounded retracts, Voronoi complexes and integral homology of GL_2 over
quadratic integers."""

__version__ = "0.1.0"
