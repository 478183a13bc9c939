"""Skew forms, the right-regular model, commutants and bend elements."""
