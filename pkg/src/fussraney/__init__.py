"""Fuss-Catalan and Raney densities with independent numerical checks."""
__version__ = "0.1.0"
