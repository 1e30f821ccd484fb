import os
import random

import pytest

from cusptile.certify import krawczyk_certify
from cusptile.develop import (
    develop_cusp_cross_section, develop_polyhedron, standard_form_scale,
)
from cusptile.hyperboloid import HPoint, boost_x, minkowski_identity
from cusptile.interval import PrecisionError
from cusptile.trace import (
    TraceError, trace_heuristic, trace_tetrahedra_view, trace_verify,
)
from cusptile.triangulation import parse_manifold_file

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def build_polyhedron(name):
    with open(os.path.join(FIXTURES, name)) as fh:
        data = parse_manifold_file(fh.read())
    tri = data.triangulation
    shapes = list(krawczyk_certify(tri, data.shapes, 212))
    sections = [develop_cusp_cross_section(tri, shapes, c)
                for c in range(tri.num_cusps)]
    scales = standard_form_scale(tri, shapes, sections)
    return develop_polyhedron(
        tri, shapes, [x.scaled(s) for x, s in zip(sections, scales)])


@pytest.fixture(scope='module')
def fig8_P():
    return build_polyhedron('fig8.tri')


def nontrivial_pairings(P):
    return [P.pairings[t][f] for t in range(P.tri.n) for f in range(4)
            if (t, f) not in P.tree]


def random_word(P, rng, length):
    m = minkowski_identity()
    for g in rng.choices(nontrivial_pairings(P), k=length):
        m = m @ g
    return m


class TestHeuristic:
    def test_incenter_stays_home(self, fig8_P):
        m, t = trace_heuristic(fig8_P, fig8_P.incenters[0])
        assert t == 0
        assert m.contains_matrix(minkowski_identity())

    def test_translated_incenters_are_located(self, fig8_P):
        P = fig8_P
        rng = random.Random(7)
        for _ in range(40):
            length = rng.randint(1, 8)
            g = random_word(P, rng, length)
            t_home = rng.randrange(P.tri.n)
            x = HPoint(g.apply(P.incenters[t_home].v))
            tiles = trace_verify(P, x, trace_heuristic(P, x))
            assert 1 <= len(tiles) <= 2

    def test_face_midpoint_straddles(self, fig8_P):
        P = fig8_P
        face = P.triangles[0][2]
        x = HPoint(face.v[0] + face.v[1] + face.v[2], normalize=True)
        m, t = trace_heuristic(P, x)
        tiles = trace_verify(P, x, (m, t))
        assert len(tiles) == 2
        pair = {tiles[0][1], tiles[1][1]}
        assert pair == {0, P.tri.neighbors[0][2]}

    def test_budget_exhaustion(self, fig8_P):
        P = fig8_P
        far = HPoint(boost_x(Interval_exact_20()).apply(P.incenters[0].v))
        with pytest.raises(TraceError):
            trace_heuristic(P, far, budget=3)

    def test_start_candidate_is_used(self, fig8_P):
        P = fig8_P
        g = P.pairings[0][2] if (0, 2) not in P.tree else P.pairings[0][3]
        start = (g, 0)
        x = HPoint(g.apply(P.incenters[0].v))
        m, t = trace_heuristic(P, x, start=start)
        assert t == 0
        assert m.overlaps(g)


def Interval_exact_20():
    from cusptile.interval import Interval
    return Interval.exact(20)


class TestVerify:
    def test_incenter_single_tile(self, fig8_P):
        P = fig8_P
        tiles = trace_verify(P, P.incenters[1],
                             (minkowski_identity(), 1))
        assert len(tiles) == 1
        assert tiles[0][1] == 1

    def test_wrong_candidate_never_certifies(self, fig8_P):
        P = fig8_P
        rng = random.Random(3)
        far = random_word(P, rng, 6)
        with pytest.raises(PrecisionError):
            trace_verify(P, P.incenters[0], (far, 0))

    def test_returned_tiles_contain_point(self, fig8_P):
        P = fig8_P
        rng = random.Random(11)
        for _ in range(20):
            g = random_word(P, rng, rng.randint(1, 6))
            x = HPoint(g.apply(P.incenters[0].v))
            tiles = trace_verify(P, x, trace_heuristic(P, x))
            if len(tiles) == 1:
                m, t = tiles[0]
                for f in range(4):
                    assert x.v.dot(m.apply(P.normals[t][f])).is_negative()


class TestTetrahedraView:
    def test_identity_case(self, fig8_P):
        P = fig8_P
        x = P.incenters[0]
        obj, base, t = trace_tetrahedra_view(P, x, x)
        assert t == 0
        assert base.v.overlaps(x.v)

    def test_round_trip_against_object_view(self, fig8_P):
        P = fig8_P
        rng = random.Random(23)
        for _ in range(10):
            g = random_word(P, rng, rng.randint(1, 5))
            x = HPoint(g.apply(P.incenters[0].v))
            m, t = trace_heuristic(P, x)
            obj, base, t2 = trace_tetrahedra_view(P, x, x)
            assert t2 == t
            assert base.v.overlaps(m.so13_inverse().apply(x.v))
