"""Isomorphism-preserving reductions between classification problems, with
lattice-property checkers and a small matrix-pair similarity oracle."""

__version__ = "0.1.0"
