"""Verified kernel for cusped hyperbolic 3-manifolds.

Certifies ideal-tetrahedron shapes, develops a fundamental polyhedron in
the hyperboloid model, tiles the universal cover around points, geodesics
and cusp horoballs, and computes rigorous enclosures of maximal cusp area
matrices, embedding radii and short Dehn-filling slopes.
"""

from .interval import (
    Interval, ComplexInterval, NEG_INF, DomainError, DEFAULT_PRECISION,
)

__version__ = '0.1.0'
