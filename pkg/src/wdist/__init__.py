"""Frobenius distance from a real matrix to the matrices with a multiple eigenvalue."""
from .errors import WdistError
from .gallery import GallerySpec, generate, reference_values
from .nearest import DistanceReport, verify_report, wilkinson_distance
from .specpoly import distance_equation

__version__ = "0.1.0"

__all__ = ["WdistError", "GallerySpec", "generate", "reference_values", "DistanceReport",
           "verify_report", "wilkinson_distance", "distance_equation", "complex_distance"]


def complex_distance(A, digits: int = 40, jobs: int = 1):
    # imported lazily: the complex branch pulls in sympy
    from .complexdist import complex_distance as _cd
    return _cd(A, digits, jobs)
