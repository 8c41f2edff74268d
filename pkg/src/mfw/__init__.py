"""Exact computer algebra for matrix factorizations of isolated hypersurface singularities."""

__version__ = "0.1.0"
