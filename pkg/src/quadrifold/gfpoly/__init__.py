"""Exact arithmetic in F_{p^k} and in the graded ring of binary forms."""

from .field import (GF, Scalar, enumerate_all, gf, is_prime, least_irreducible,
                    sample_uniform)
from .forms import BinaryForm, ProjPoint1, points_of_p1

__all__ = ["GF", "Scalar", "gf", "enumerate_all", "sample_uniform", "is_prime", "least_irreducible",
           "BinaryForm", "ProjPoint1", "points_of_p1"]
