"""Iterated period integrals of eta powers and generalized Dedekind symbols."""

__version__ = "0.1.0"
