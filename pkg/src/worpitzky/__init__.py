"""Exact computations with truncated affine Weyl arrangements.

Root system data, alcove Ehrhart quasi-polynomials, generalized Eulerian
polynomials through the Worpitzky partition, and characteristic
quasi-polynomials checked against a brute-force counting oracle.
"""
from .charquasi import ArrangementSpec, CharQuasi, char_quasi, linial_quasi, oracle_count, shi_quasi
from .ehrhart import ehrhart_quasi
from .alcoves import generalized_eulerian, worpitzky_partition
from .polycalc import QuasiPolynomial, RationalPolynomial
from .rootsys import RootSystem, RootSystemId, build

__version__ = "0.1.0"

__all__ = [
    "ArrangementSpec",
    "CharQuasi",
    "QuasiPolynomial",
    "RationalPolynomial",
    "RootSystem",
    "RootSystemId",
    "build",
    "char_quasi",
    "ehrhart_quasi",
    "generalized_eulerian",
    "linial_quasi",
    "oracle_count",
    "shi_quasi",
    "worpitzky_partition",
]
