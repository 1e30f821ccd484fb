import itertools
import os
import random

import pytest

from cusptile.certify import krawczyk_certify
from cusptile.develop import (
    _so13_from_mobius, develop_cusp_cross_section, develop_polyhedron,
    standard_form_scale,
)
from cusptile.hyperboloid import (
    HPoint, MVector, dist_point_point, minkowski_identity, rotation_matrix,
)
from cusptile.interval import ComplexInterval, Interval, NEG_INF
from cusptile.tiling import (
    GeometricObject, UnsupportedObjectError, certified_line_from_holonomy,
    make_seeds, tetrahedra_view, tile_stream,
)
from cusptile.trace import trace_heuristic, trace_verify
from cusptile.vcollections import LiftedTetSet, eq_b
from cusptile.triangulation import parse_manifold_file

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


@pytest.fixture(scope='module')
def fig8_P():
    with open(os.path.join(FIXTURES, 'fig8.tri')) as fh:
        data = parse_manifold_file(fh.read())
    tri = data.triangulation
    shapes = list(krawczyk_certify(tri, data.shapes, 212))
    sections = [develop_cusp_cross_section(tri, shapes, c)
                for c in range(tri.num_cusps)]
    scales = standard_form_scale(tri, shapes, sections)
    return develop_polyhedron(
        tri, shapes, [x.scaled(s) for x, s in zip(sections, scales)])


def loxodromic(P):
    gens = [P.pairings[t][f] for t in range(P.tri.n) for f in range(4)
            if (t, f) not in P.tree]
    return gens[0] @ gens[1]


def random_nearby_point(P, rng, spread=0.8):
    p = P.incenters[0].v
    coords = [p[i].midpoint_float() + rng.uniform(-spread, spread)
              for i in range(4)]
    coords[0] = abs(coords[0]) + 2.0
    return HPoint(MVector([Interval(c) for c in coords]), normalize=True)


class TestSeeds:
    def test_horoball_seed_is_carrying_tet(self, fig8_P):
        K = GeometricObject.horoball_at_vertex(fig8_P, 1, 2)
        seeds = make_seeds(fig8_P, K)
        assert len(seeds) == 1
        m, t = seeds[0]
        assert t == 1
        assert m.contains_matrix(minkowski_identity())

    def test_point_seed_at_incenter(self, fig8_P):
        K = GeometricObject.point(fig8_P.incenters[1])
        seeds = make_seeds(fig8_P, K)
        assert [t for _, t in seeds] == [1]

    def test_line_seed_verifies(self, fig8_P):
        K = GeometricObject.line_from_holonomy(loxodromic(fig8_P))
        seeds = make_seeds(fig8_P, K)
        assert 1 <= len(seeds) <= 2


class TestLineFromHolonomy:
    def test_certified_eigenpair(self, fig8_P):
        h = loxodromic(fig8_P)
        x0, x1, lam = certified_line_from_holonomy(h)
        assert lam.is_positive() and (Interval.exact(1) < lam)
        assert lam.width_float() < 1e-40
        assert h.apply(x1).overlaps(x1.scale(lam))
        assert h.apply(x0).overlaps(x0.scale(1 / lam))
        # eigenvectors are future light-like directions
        for x in (x0, x1):
            assert x.dot(x).contains_zero()
            assert x[0].is_positive()

    def test_elliptic_is_unsupported(self, fig8_P):
        rot = rotation_matrix(1, Interval(-0.5),
                              Interval(0.75).sqrt())
        with pytest.raises(UnsupportedObjectError):
            certified_line_from_holonomy(rot)

    def test_parabolic_is_unsupported(self, fig8_P):
        one = ComplexInterval(Interval.exact(1), Interval.exact(0))
        zero = ComplexInterval(Interval.exact(0), Interval.exact(0))
        par = _so13_from_mobius(((one, one), (zero, one)), 212)
        with pytest.raises(UnsupportedObjectError):
            certified_line_from_holonomy(par)


class TestPointStream:
    def test_first_event_is_seed(self, fig8_P):
        K = GeometricObject.point(fig8_P.incenters[0])
        first = next(tile_stream(fig8_P, K))
        assert first.r is NEG_INF
        assert first.t == 0

    def test_radii_nondecreasing_in_practice(self, fig8_P):
        K = GeometricObject.point(fig8_P.incenters[0])
        events = list(itertools.islice(tile_stream(fig8_P, K), 300))
        rs = [e.r_lower_float() for e in events]
        assert all(a <= b + 1e-9 for a, b in zip(rs, rs[1:]))
        assert rs[-1] > 1.5

    def test_no_duplicate_tiles(self, fig8_P):
        P = fig8_P
        K = GeometricObject.point(P.incenters[0])
        events = list(itertools.islice(tile_stream(P, K), 60))
        p = P.incenters[0].v
        b = P.inradii[0].cosh()
        keys = [(e.m.apply(p), e.t) for e in events]
        for i in range(len(keys)):
            for j in range(i + 1, len(keys)):
                if keys[i][1] == keys[j][1]:
                    assert eq_b(keys[i][0], keys[j][0], b) is False

    def test_coverage_by_sampling(self, fig8_P):
        P = fig8_P
        center = P.incenters[0]
        K = GeometricObject.point(center)
        events = []
        stream = tile_stream(P, K)
        for e in stream:
            events.append(e)
            if e.r_lower_float() > 1.2:
                break
        emitted = LiftedTetSet.for_point(P)
        for e in events[:-1]:
            emitted.add(e.m, e.t)
        covered_radius = events[-1].r_lower_float()
        rng = random.Random(99)
        checked = 0
        while checked < 150:
            x = random_nearby_point(P, rng)
            d = dist_point_point(center, x)
            if not d.hi_float() < covered_radius:
                continue
            checked += 1
            tiles = trace_verify(P, x, trace_heuristic(P, x))
            assert any(emitted.contains(m, t) for m, t in tiles)


class TestHoroballStream:
    def test_cusp_incident_tets_come_first(self, fig8_P):
        P = fig8_P
        K = GeometricObject.horoball_at_vertex(P, 0, 0)
        negative_tets = set()
        for e in tile_stream(P, K):
            if e.r_lower_float() >= 0:
                break
            negative_tets.add(e.t)
        assert negative_tets == {0, 1}

    def test_lifted_horoballs_pairwise_distinct(self, fig8_P):
        P = fig8_P
        K = GeometricObject.horoball_at_vertex(P, 0, 0)
        lifts = [obj.l for _, obj, _ in itertools.islice(
            tetrahedra_view(tile_stream(P, K), K), 40)]
        one = Interval.exact(1)
        for i in range(len(lifts)):
            for j in range(i + 1, len(lifts)):
                sep = -(lifts[i].dot(lifts[j]))
                if sep < one:
                    # Same horoball lift: must be (numerically) zero, and
                    # never between the dedupe bound and the true gap 2.
                    assert sep.contains_zero()

    def test_radii_grow(self, fig8_P):
        K = GeometricObject.horoball_at_vertex(fig8_P, 0, 0)
        events = list(itertools.islice(tile_stream(fig8_P, K), 250))
        assert events[-1].r_lower_float() > 1.0


class TestLineStream:
    def test_stream_runs_and_grows(self, fig8_P):
        K = GeometricObject.line_from_holonomy(loxodromic(fig8_P))
        events = list(itertools.islice(tile_stream(fig8_P, K), 250))
        assert events[0].r is NEG_INF
        assert events[-1].r_lower_float() > 1.0
        rs = [e.r_lower_float() for e in events]
        assert all(a <= b + 1e-9 for a, b in zip(rs, rs[1:]))


class TestTetrahedraView:
    def test_seed_event_is_object_itself(self, fig8_P):
        P = fig8_P
        K = GeometricObject.point(P.incenters[0])
        r, obj, t = next(tetrahedra_view(tile_stream(P, K), K))
        assert r is NEG_INF and t == 0
        assert obj.v.overlaps(K.geom.v)

    def test_distances_agree_between_views(self, fig8_P):
        P = fig8_P
        K = GeometricObject.point(P.incenters[0])
        pairs = itertools.islice(
            zip(tile_stream(P, K), tetrahedra_view(tile_stream(P, K), K)),
            5, 25)
        for event, (r, obj, t) in pairs:
            d_obj = dist_point_point(
                K.geom, HPoint(event.m.apply(P.incenters[t].v)))
            d_tet = dist_point_point(obj, P.incenters[t])
            assert d_obj.overlaps(d_tet)
