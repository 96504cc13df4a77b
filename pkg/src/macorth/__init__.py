"""Macdonald polynomials with unitary parameters (build in progress)."""
__version__ = "0.1.0"
