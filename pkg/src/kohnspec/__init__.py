"""Exact spectral computations for the Kohn Laplacian on unit spheres."""

from .polyring import GaussianRational, Monomial, Polynomial

__all__ = ["GaussianRational", "Monomial", "Polynomial"]
