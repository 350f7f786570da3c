"""Logarithmic forms and derivations along Coxeter arrangements, and the extended Hodge decomposition."""

__version__ = "0.1.0"
