"""Explicit GRH bounds for the Chebyshev function of a number field."""
