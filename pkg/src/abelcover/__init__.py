"""Abelian Galois covers of P^1 and the Shimura question for their families."""

__version__ = "0.1.0"
