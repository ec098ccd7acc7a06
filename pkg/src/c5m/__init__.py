"""Computations with GL2 over the ring of integers of Q(zeta_5) and elliptic curves over it."""

__version__ = "0.1.0"
