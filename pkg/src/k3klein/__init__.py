"""Exact lattice computations for the symplectic (Z/2)^2 action on K3 surfaces."""

__version__ = "0.1.0"
