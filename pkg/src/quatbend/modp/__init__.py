"""Finite symplectic groups: reduction mod p, stabilizer chains, certificates."""
