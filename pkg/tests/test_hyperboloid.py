import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from cusptile.interval import Interval, NEG_INF
from cusptile.hyperboloid import (
    MVector, MMatrix, HPoint, HLine, HPlane, Horoball, IdealTriangle,
    dist_point_point, dist_point_line, dist_line_line, dist_point_plane,
    dist_line_plane, dist_plane_plane, dist_to_horoball,
    line_projection_offset, horospherical_length, dist_to_ideal_triangle,
    boost_x, minkowski_identity, dist,
)


def V(*c):
    return MVector([Interval(x, prec=212) for x in c])


def P(*c):
    return HPoint(V(*c))


ORIGIN = P(1, 0, 0, 0)


def r_d(d):
    di = Interval(d, prec=212)
    return HPoint(MVector([di.cosh(), di.sinh(),
                           Interval(0, prec=212), Interval(0, prec=212)]))


class TestPointPoint:
    def test_identical(self):
        assert dist_point_point(ORIGIN, ORIGIN).contains(0)
        assert dist_point_point(ORIGIN, ORIGIN).hi_float() < 1e-60

    def test_known_length(self):
        assert dist_point_point(ORIGIN, r_d(1)).contains(1)

    def test_second_closed_form(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            x, _ = oracles.random_exact_point(rng)
            y, _ = oracles.random_exact_point(rng)
            d1 = dist_point_point(x, y)
            diff = y.v - x.v
            d2 = (diff.norm_sqr() / Interval.exact(2, 212)
                  + Interval.exact(1, 212)).clamp_lower(1).acosh()
            assert d1.overlaps(d2)


class TestPointLine:
    L = HLine(V(1, 0, 1, 0), V(1, 0, -1, 0))

    def test_on_line(self):
        assert dist_point_line(ORIGIN, self.L).contains(0)

    def test_perpendicular_push(self):
        assert dist_point_line(r_d(0.7), self.L).contains(0.7)

    def test_degenerate_overlapping_endpoints(self):
        eps = Interval(-1e-30, 1e-30, prec=212)
        fuzzy = MVector([Interval(1) + eps, Interval(0) + eps,
                         Interval(1) + eps, Interval(0) + eps])
        L = HLine(fuzzy, fuzzy)
        d = dist_point_line(r_d(0.3), L)
        assert d.lo_float() >= 0


class TestLineLine:
    def test_identical(self):
        L = HLine(V(1, 0, 1, 0), V(1, 0, -1, 0))
        assert dist_line_line(L, L).contains(0)

    def test_perpendicular_at_distance(self):
        Lx = HLine(V(1, 1, 0, 0), V(1, -1, 0, 0))
        Lz = HLine(V(1, 0, 0, 1), V(1, 0, 0, -1))
        g = boost_x(Interval(1, prec=212))
        assert dist_line_line(Lx.transformed(g) if False else Lz,
                              HLine(V(1, 0, 1, 0), V(1, 0, -1, 0))
                              .transformed(g)).contains(1)

    def test_intersecting(self):
        Lx = HLine(V(1, 1, 0, 0), V(1, -1, 0, 0))
        Ly = HLine(V(1, 0, 1, 0), V(1, 0, -1, 0))
        assert dist_line_line(Lx, Ly).contains(0)


class TestPlanes:
    N = HPlane(V(0, 1, 0, 0))

    def test_origin_on_plane(self):
        assert dist_point_plane(ORIGIN, self.N).contains(0)

    def test_push(self):
        assert dist_point_plane(r_d(1), self.N).contains(1)

    def test_reflection_symmetry(self):
        d1 = Interval(1, prec=212)
        x = HPoint(MVector([d1.cosh(), -d1.sinh(),
                            Interval(0, prec=212), Interval(0, prec=212)]))
        a = dist_point_plane(r_d(1), self.N)
        b = dist_point_plane(x, self.N)
        assert a.overlaps(b)

    def test_line_plane_distance(self):
        d = 0.5
        L = HLine(V(math.cosh(d), math.sinh(d), 1, 0),
                  V(math.cosh(d), math.sinh(d), -1, 0))
        r = dist_line_plane(L, self.N)
        assert abs(r.midpoint_float() - d) < 1e-12

    def test_line_crossing_plane(self):
        L = HLine(V(1, 1, 0, 0), V(1, -1, 0, 0))
        assert dist_line_plane(L, self.N) == Interval.exact(0) \
            or dist_line_plane(L, self.N).contains(0)

    def test_line_endpoint_on_plane(self):
        L = HLine(V(1, 0, 1, 0), V(1, 1, 0, 0))
        r = dist_line_plane(L, self.N)
        assert r.lo_float() == 0

    def test_plane_plane(self):
        n2 = HPlane(MVector([Interval(1).sinh(), Interval(1).cosh(),
                             Interval(0), Interval(0)]))
        assert dist_plane_plane(self.N, n2).contains(1)
        assert dist_plane_plane(self.N, self.N).contains(0)
        assert dist_plane_plane(self.N, HPlane(V(0, 0, 1, 0))).contains(0)


class TestHoroball:
    B = Horoball(V(1, 1, 0, 0))

    def test_point_on_boundary(self):
        assert dist_to_horoball(ORIGIN, self.B).contains(0)

    def test_tangent_balls(self):
        B2 = Horoball(V(1, -1, 0, 0))
        assert dist_to_horoball(B2, self.B).contains(0)

    def test_same_ball(self):
        assert dist_to_horoball(self.B, self.B) is NEG_INF

    def test_point_inside_negative(self):
        # r_d(0.4) moves toward the ideal point (1,1,0,0), so it sits 0.4
        # inside the ball; the reflected point is 0.4 outside.
        d04 = Interval(0.4, prec=212)
        outside = HPoint(MVector([d04.cosh(), -d04.sinh(),
                                  Interval(0, prec=212),
                                  Interval(0, prec=212)]))
        d_in = dist_to_horoball(r_d(0.4), self.B)
        d_out = dist_to_horoball(outside, self.B)
        assert d_in.contains(-0.4) and d_out.contains(0.4)


class TestProjectionsAndLengths:
    L = HLine(V(1, 1, 0, 0), V(1, -1, 0, 0))

    def test_offset_zero_and_antisymmetry(self):
        x, y = r_d(0.3), P(math.cosh(0.9), math.sinh(0.9), 0, 0)
        assert line_projection_offset(self.L, x, x).contains(0)
        a = line_projection_offset(self.L, x, y)
        b = line_projection_offset(self.L, y, x)
        assert a.overlaps(-b)

    def test_translation_along_line(self):
        lam = 0.8
        mid = self.L.midpoint()
        h = boost_x(Interval(-lam, -lam, prec=212))
        moved = mid.transformed(h)
        off = line_projection_offset(self.L, mid, moved)
        assert off.contains(lam) or off.contains(-lam)
        assert abs(abs(off.midpoint_float()) - lam) < 1e-12

    def test_horospherical_length(self):
        B = Horoball(V(1, 1, 0, 0))
        r = horospherical_length(B, V(1, 0, 1, 0), V(1, 0, -1, 0))
        assert r.contains(2)

    def test_horospherical_degenerate(self):
        B = Horoball(V(1, 1, 0, 0))
        x = V(1, 0, 1, 0)
        assert horospherical_length(B, x, x).contains(0)

    def test_horospherical_scaling(self):
        B = Horoball(V(1, 1, 0, 0))
        B2 = Horoball(V(2, 2, 0, 0))
        a = horospherical_length(B, V(1, 0, 1, 0), V(1, 0, -1, 0))
        b = horospherical_length(B2, V(1, 0, 1, 0), V(1, 0, -1, 0))
        assert (b * Interval.exact(2)).overlaps(a)


def uhs_point(zr, zi, h):
    a = zr * zr + zi * zi + h * h
    return P((a + 1) / (2 * h), (a - 1) / (2 * h), zr / h, zi / h)


def std_triangle():
    def lv(zr, zi):
        a = zr * zr + zi * zi
        return V((a + 1) / 2, (a - 1) / 2, zr, zi)
    return IdealTriangle(lv(0, 0), lv(1, 0), V(1, 1, 0, 0))


class TestIdealTriangle:
    def test_invariants(self):
        T = std_triangle()
        assert T.plane.n.norm_sqr().contains(1)
        for v in T.v:
            assert T.plane.n.dot(v).contains(0)
        for n_i in T.side_normals:
            assert n_i.dot(T.plane.n).contains(0)
            assert n_i.norm_sqr().contains(1)
        for m in T.touch_points:
            assert m.norm_sqr().contains(-1)

    def test_point_inside(self):
        T = std_triangle()
        x = uhs_point(0.5, 0.0, 1.1)
        assert dist_to_ideal_triangle(x, T).contains(0)

    def test_point_beyond_edge(self):
        T = std_triangle()
        # Beyond the edge from 0 to 1 (the half-sphere |zeta - 0.5| = 0.5):
        # small height above a point outside the triangle's shadow.
        x = uhs_point(0.5, 0.0, 0.2)
        d = dist_to_ideal_triangle(x, T)
        k = [i for i in range(3)
             if x.v.dot(T.side_normals[i]).is_negative()]
        assert len(k) == 1
        edge = T.edge_line(k[0])
        assert d.overlaps(dist_point_line(x, edge))

    def test_lower_bound_mode_vs_exact(self):
        rng = np.random.default_rng(3)
        T = std_triangle()
        for _ in range(100):
            x, xf = oracles.random_point(rng)
            lo = dist_to_ideal_triangle(x, T, lower_bound=True)
            ex = dist_to_ideal_triangle(x, T)
            assert lo.lo_float() <= ex.hi_float() + 1e-12

    def test_against_sampling_oracle(self):
        rng = np.random.default_rng(11)
        T = std_triangle()
        vf = [np.array([v[i].midpoint_float() for i in range(4)])
              for v in T.v]
        for _ in range(25):
            x, xf = oracles.random_point(rng)
            ex = dist_to_ideal_triangle(x, T)
            lb = dist_to_ideal_triangle(x, T, lower_bound=True)
            sampled = oracles.oracle_triangle_point(xf, *vf, grid=80)
            # Sampling only sees interior points, so it overestimates.
            assert ex.lo_float() <= sampled + 1e-9
            assert lb.lo_float() <= sampled + 1e-9


class TestIsometryInvariance:
    def test_all_kinds(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            g, gf = oracles.random_isometry(rng)
            x, _ = oracles.random_point(rng)
            y, _ = oracles.random_point(rng)
            L, _ = oracles.random_line(rng)
            N, _ = oracles.random_plane(rng)
            B, _ = oracles.random_horoball(rng)
            pairs = [
                (dist_point_point(x, y),
                 dist_point_point(x.transformed(g), y.transformed(g))),
                (dist_point_line(x, L),
                 dist_point_line(x.transformed(g), L.transformed(g))),
                (dist_point_plane(x, N),
                 dist_point_plane(x.transformed(g), N.transformed(g))),
                (dist_line_plane(L, N),
                 dist_line_plane(L.transformed(g), N.transformed(g))),
            ]
            for a, b in pairs:
                assert a.overlaps(b)
            a = dist_to_horoball(x, B)
            b = dist_to_horoball(x.transformed(g), B.transformed(g))
            assert a is NEG_INF or a.overlaps(b)

    def test_matrix_properties(self):
        rng = np.random.default_rng(9)
        g, _ = oracles.random_isometry(rng)
        assert g.preserves_form()
        assert g.det().contains(1)
        gi = g.so13_inverse()
        assert (g @ gi).contains_matrix(minkowski_identity()) or \
            (g @ gi).overlaps(minkowski_identity())


class TestOracleAgreement:
    """Closed forms vs numeric minimization on random configurations
    (small counts here; the full suite runs in the acceptance tests)."""

    N_SMALL = 40

    def test_point_line(self):
        rng = np.random.default_rng(21)
        for _ in range(self.N_SMALL):
            x, xf = oracles.random_point(rng)
            L, (f0, f1) = oracles.random_line(rng)
            val = oracles.oracle_point_line(xf, f0, f1)
            assert dist_point_line(x, L).overlaps(oracles.oracle_interval(val))

    def test_line_line(self):
        rng = np.random.default_rng(22)
        for _ in range(self.N_SMALL):
            L1, (a0, a1) = oracles.random_line(rng)
            L2, (b0, b1) = oracles.random_line(rng)
            val = oracles.oracle_line_line(a0, a1, b0, b1)
            r = dist_line_line(L1, L2)
            assert r.overlaps(oracles.oracle_interval(val, 1e-5))

    def test_point_ball(self):
        rng = np.random.default_rng(23)
        for _ in range(self.N_SMALL):
            x, xf = oracles.random_point(rng)
            B, lf = oracles.random_horoball(rng)
            val = oracles.oracle_point_ball(xf, lf)
            r = dist_to_horoball(x, B)
            assert r is NEG_INF or r.overlaps(oracles.oracle_interval(val))

    def test_symmetry(self):
        rng = np.random.default_rng(24)
        for _ in range(20):
            x, _ = oracles.random_point(rng)
            y, _ = oracles.random_point(rng)
            assert dist_point_point(x, y).overlaps(dist_point_point(y, x))
            L1, _ = oracles.random_line(rng)
            L2, _ = oracles.random_line(rng)
            assert dist_line_line(L1, L2).overlaps(dist_line_line(L2, L1))


class TestDispatch:
    def test_dist_function(self):
        B = Horoball(V(1, 1, 0, 0))
        assert dist(ORIGIN, B).contains(0)
        assert dist(B, ORIGIN).contains(0)
        L = HLine(V(1, 0, 1, 0), V(1, 0, -1, 0))
        assert dist(ORIGIN, L).contains(0)
        assert dist(L, ORIGIN).contains(0)
