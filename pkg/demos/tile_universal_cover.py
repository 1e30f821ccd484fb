"""
Streaming tiles of the universal cover
======================================

Develops a fundamental polyhedron for the figure-eight knot complement
and tiles the universal cover around three kinds of geometric objects:
a point, a cusp horoball, and a closed geodesic.  Each emitted tile
carries a certified radius: all earlier tiles cover that neighborhood
of the object.
"""

import itertools
import os

from cusptile.certify import krawczyk_certify
from cusptile.develop import (
    develop_cusp_cross_section, develop_polyhedron, standard_form_scale,
)
from cusptile.tiling import GeometricObject, tile_stream
from cusptile.trace import trace_heuristic, trace_verify
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

gens = [P.pairings[t][f] for t in range(P.tri.n) for f in range(4)
        if (t, f) not in P.tree]

objects = [
    ('point (tet-0 incenter)', GeometricObject.point(P.incenters[0])),
    ('cusp horoball', GeometricObject.horoball_at_vertex(P, 0, 0)),
    # a single face pairing is parabolic here; a product of two is not
    ('closed geodesic', GeometricObject.line_from_holonomy(gens[0] @ gens[1])),
]

for label, K in objects:
    events = list(itertools.islice(tile_stream(P, K), 100))
    radii = [e.r_lower_float() for e in events]
    print('%-25s 100 tiles, certified radius grew to %.4f'
          % (label, radii[-1]))

# Locating a point of the cover in the fundamental polyhedron: the float
# heuristic proposes a tile, verification certifies containment.
x = P.incenters[1]
tiles = trace_verify(P, x, trace_heuristic(P, x))
print('tet-1 incenter lies in tile(s):', [t for _, t in tiles])
