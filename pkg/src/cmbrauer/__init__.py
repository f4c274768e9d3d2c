"""Exact arithmetic for imaginary quadratic orders, CM elliptic curve censuses,
Neron-Severi discriminant identities, and certified Brauer group bounds."""

__version__ = "0.1.0"
