"""
Maximal cusp area matrices and area selection
=============================================

Computes the certified maximal cusp area matrix of the magic manifold
(three cusps) by tiling about each pair of cusp horoballs, then picks
cusp neighborhood areas from the matrix two ways: the symmetric
unbiased rule and a greedy expansion order.
"""

import os
import time

from cusptile.areas import greedy_areas, unbiased_areas
from cusptile.certify import krawczyk_certify
from cusptile.develop import (
    develop_cusp_cross_section, develop_polyhedron, standard_form_scale,
)
from cusptile.distances import cusp_area_matrix
from cusptile.triangulation import parse_manifold_file

FIXTURES = os.path.join(os.path.dirname(__file__), '..', 'tests', 'fixtures')

with open(os.path.join(FIXTURES, 'magic.tri')) as fh:
    data = parse_manifold_file(fh.read())
tri = data.triangulation
shapes = list(krawczyk_certify(tri, data.shapes, 212))
sections = [develop_cusp_cross_section(tri, shapes, c)
            for c in range(tri.num_cusps)]
scales = standard_form_scale(tri, shapes, sections)
P = develop_polyhedron(tri, shapes,
                       [x.scaled(s) for x, s in zip(sections, scales)])

start = time.time()
A = cusp_area_matrix(P)
print('cusp area matrix (%.2f s):' % (time.time() - start))
for row in A:
    print('  ' + '  '.join('%-10.6f(w %.1e)'
                           % (x.midpoint_float(), x.width_float())
                           for x in row))

# Area products a_i a_j <= A_ij guarantee embedded, pairwise disjoint
# neighborhoods.  The unbiased selection treats all cusps symmetrically.
print('unbiased areas:',
      ['%.6f' % a.midpoint_float() for a in unbiased_areas(A)])

# Greedy selection maximizes each cusp in the given order.
print('greedy (0,1,2):',
      ['%.6f' % a.midpoint_float() for a in greedy_areas(A, order=(0, 1, 2))])
