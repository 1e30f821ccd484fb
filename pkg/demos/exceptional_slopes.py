"""
Slope lengths and hyperbolic Dehn fillings
==========================================

Dehn fillings along slopes longer than 6 on embedded disjoint cusp
neighborhoods are hyperbolic.  This script certifies the cusp shape of
the figure-eight knot complement, lists every slope that is not provably
longer than 6 at the maximal cusp area, and measures a few of their
lengths.
"""

import os

from cusptile.areas import (
    cusp_shapes, short_slopes, slope_length, unbiased_areas,
)
from cusptile.certify import krawczyk_certify
from cusptile.develop import (
    develop_cusp_cross_section, develop_polyhedron, standard_form_scale,
)
from cusptile.distances import cusp_area_matrix
from cusptile.triangulation import parse_manifold_file

FIXTURES = os.path.join(os.path.dirname(__file__), '..', 'tests', 'fixtures')

with open(os.path.join(FIXTURES, 'fig8.tri')) as fh:
    data = parse_manifold_file(fh.read())
tri = data.triangulation
shapes = list(krawczyk_certify(tri, data.shapes, 212))
sections = [develop_cusp_cross_section(tri, shapes, c)
            for c in range(tri.num_cusps)]
scales = standard_form_scale(tri, shapes, sections)
P = develop_polyhedron(tri, shapes,
                       [x.scaled(s) for x, s in zip(sections, scales)])

s = cusp_shapes(P)[0]
print('cusp shape: %.8f + %.8fi' % (s.re.midpoint_float(),
                                    s.im.midpoint_float()))

# The matrix bounds area *products*; the unbiased selection turns it
# into one embedded neighborhood area per cusp.
A = cusp_area_matrix(P)
area = unbiased_areas(A)[0]
print('maximal embedded cusp area: %.8f' % area.midpoint_float())

slopes = short_slopes(area, s)
print('%d slopes not certified longer than 6:' % len(slopes))
for slope in slopes:
    length = slope_length(area, s, slope)
    print('  (%2d,%2d)  length >= %.6f' % (slope[0], slope[1],
                                           length.lo_float()))
