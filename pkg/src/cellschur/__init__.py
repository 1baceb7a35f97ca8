"""Exact cell algebra structures on transformation monoid algebras and generalized Schur algebras."""

__version__ = "0.1.0"
