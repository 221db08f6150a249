"""Curvature of Hermitian metrics on cohomogeneity-one complex surfaces."""

__version__ = "0.1.0"
