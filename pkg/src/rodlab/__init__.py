"""rodlab: spectral laboratory for generalized elastic rods."""

__version__ = "0.1.0"
