"""Integral symplectic representations built from quaternion orders, bending
deformations, and density certificates by reduction mod p."""

__version__ = "0.1.0"
