"""
Certifying tetrahedron shapes
=============================

Reads a triangulated cusped manifold, runs the Krawczyk-verified Newton
refinement on its approximate shapes, and prints certified enclosures
together with the gluing residuals that prove them.
"""

import os

from cusptile.certify import krawczyk_certify, log_gluing_residual
from cusptile.triangulation import parse_manifold_file

FIXTURES = os.path.join(os.path.dirname(__file__), '..', 'tests', 'fixtures')

with open(os.path.join(FIXTURES, 'fig8.tri')) as fh:
    data = parse_manifold_file(fh.read())
tri = data.triangulation
print('figure-eight knot complement: %d tetrahedra, %d cusp(s)'
      % (tri.n, tri.num_cusps))

# The input shapes are floating-point approximations; certification
# returns interval enclosures proven to contain a geometric solution.
shapes = list(krawczyk_certify(tri, data.shapes, 212))
for t, z in enumerate(shapes):
    print('shape %d: re width %.3g, im width %.3g, midpoint %.15f + %.15fi'
          % (t, z.re.width_float(), z.im.width_float(),
             z.re.midpoint_float(), z.im.midpoint_float()))

# Every logarithmic gluing and completeness residual must contain zero.
for k, residual in enumerate(log_gluing_residual(tri, shapes)):
    assert residual.re.contains_zero() and residual.im.contains_zero()
    print('residual %d encloses 0 (re width %.3g)'
          % (k, residual.re.width_float()))
