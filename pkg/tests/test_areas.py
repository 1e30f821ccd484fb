import math
import os
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cusptile.areas import (
    all_fillings_hyperbolic_check, cusp_shapes, cusp_translations,
    greedy_areas, product_bounded, short_slopes, six_theorem_area,
    slope_length, unbiased_areas, unbiased_areas_exact,
)
from cusptile.certify import krawczyk_certify
from cusptile.develop import (
    develop_cusp_cross_section, develop_polyhedron, standard_form_scale,
)
from cusptile.interval import ComplexInterval, Interval
from cusptile.triangulation import parse_manifold_file

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def build(name):
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
    return build('fig8.tri')


def ivm(rows):
    return [[Interval.exact(x) for x in row] for row in rows]


MAGIC = [[28, 7, 7], [7, 28, 7], [7, 7, 28]]


class TestCuspShapes:
    def test_fig8_shape_value(self, fig8_P):
        # The cusp lattice of the figure-eight manifold has modulus
        # 2*sqrt(3)*i; in this fixture's peripheral basis the shape is the
        # SL(2,Z)-translate (1 + 2*sqrt(3)*i)/13.
        s = cusp_shapes(fig8_P)[0]
        assert s.im.is_positive()
        assert s.re.contains(Fraction(1, 13))
        root = Interval.exact(12).sqrt() / Interval.exact(13)
        assert s.im.overlaps(root)
        # and the standard modulus is recovered by 1 - 1/s
        std = ComplexInterval(Interval.exact(1), Interval.exact(0)) \
            - ComplexInterval(Interval.exact(1), Interval.exact(0)) / s
        assert std.re.contains_zero()
        assert std.im.overlaps(Interval.exact(12).sqrt())

    def test_lattice_area_identity(self, fig8_P):
        P = fig8_P
        mu, lam = cusp_translations(P.tri, P.cross_sections[0], 0)
        s = lam / mu
        assert (mu.abs_sqr() * s.im).overlaps(P.cross_sections[0].area)

    def test_scale_invariance(self, fig8_P):
        P = fig8_P
        xs = P.cross_sections[0]
        mu, lam = cusp_translations(P.tri, xs, 0)
        mu9, lam9 = cusp_translations(P.tri, xs.scaled(Interval.exact(9)), 0)
        assert mu9.re.overlaps(mu.re * Interval.exact(3))
        assert lam9.im.overlaps(lam.im * Interval.exact(3))
        assert (lam9 / mu9).overlaps(lam / mu)


class TestUnbiasedAreas:
    def test_magic_matrix(self):
        a = unbiased_areas(ivm(MAGIC))
        for x in a:
            assert x.contains(Interval.exact(7).sqrt())
            assert x.width_float() < 1e-8
        assert product_bounded(a, ivm(MAGIC))

    def test_single_cusp(self):
        a = unbiased_areas(ivm([[4]]))
        assert len(a) == 1 and a[0].contains(2)

    def test_mutual_bump(self):
        a = unbiased_areas(ivm([[4, 1], [1, 9]]))
        assert a[0].contains(1) and a[1].contains(1)

    def test_uncertified_positive_fails(self):
        from cusptile.interval import PrecisionError
        A = [[Interval(-0.5, 1.0)]]
        with pytest.raises(PrecisionError):
            unbiased_areas(A)

    def test_matches_exact_on_magic(self):
        exact = unbiased_areas_exact(
            [[Fraction(x) for x in row] for row in MAGIC])
        interval = unbiased_areas(ivm(MAGIC))
        for e, iv in zip(exact, interval):
            assert iv.is_positive()
            assert iv.sqr().contains(e.c * e.c * e.s)


def random_spd_matrix(rng, n, ties=False):
    """Random symmetric matrix of positive rationals; with ties=True many
    entries coincide so interval blurring can flip the fill order."""
    pool = [Fraction(k, 4) for k in range(2, 12)] if ties else None
    A = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if ties:
                val = rng.choice(pool)
            else:
                val = Fraction(rng.randint(1, 400), rng.randint(1, 40))
            A[i][j] = A[j][i] = val
    return A


class TestInclusionPrinciple:
    @pytest.mark.parametrize('ties', [False, True])
    def test_exact_inside_interval(self, ties):
        rng = random.Random(314 if ties else 217)
        for _ in range(120):
            n = rng.randint(1, 5)
            A = random_spd_matrix(rng, n, ties=ties)
            exact = unbiased_areas_exact(A)
            blur = Interval(-1e-12, 1e-12)
            A_iv = [[Interval.exact(x) + blur for x in row] for row in A]
            got = unbiased_areas(A_iv)
            for e, iv in zip(exact, got):
                key = e.c * e.c * e.s
                assert Interval._raw(iv.lo, iv.lo, iv.prec).sqr() \
                    .lo_float() <= float(key)
                assert Interval._raw(iv.hi, iv.hi, iv.prec).sqr() \
                    .hi_float() >= float(key)

    def test_nesting(self):
        rng = random.Random(99)
        for _ in range(40):
            n = rng.randint(1, 4)
            A = random_spd_matrix(rng, n)
            wide = [[Interval.exact(x) + Interval(-1e-6, 1e-6) for x in row]
                    for row in A]
            tight = [[Interval.exact(x) + Interval(-1e-9, 1e-9) for x in row]
                     for row in A]
            a_wide = unbiased_areas(wide)
            a_tight = unbiased_areas(tight)
            for w, t in zip(a_wide, a_tight):
                assert w.lo_float() <= t.lo_float() + 1e-15
                assert t.hi_float() <= w.hi_float() + 1e-15

    @given(st.lists(st.integers(min_value=1, max_value=50),
                    min_size=3, max_size=3))
    @settings(max_examples=60, deadline=None)
    def test_product_bound_always_holds(self, diag):
        rng = random.Random(sum(diag))
        A = random_spd_matrix(rng, 3)
        for i in range(3):
            A[i][i] += diag[i]
        A_iv = [[Interval.exact(x) for x in row] for row in A]
        a = unbiased_areas(A_iv)
        assert product_bounded(a, A_iv)
        g = greedy_areas(A_iv)
        assert product_bounded(g, A_iv)


class TestGreedyAreas:
    def test_magic_order_012(self):
        a = greedy_areas(ivm(MAGIC), (0, 1, 2))
        root7 = Interval.exact(7).sqrt()
        assert a[0].contains(root7 * Interval.exact(2))
        assert a[1].contains(root7 / Interval.exact(2))
        assert a[2].contains(root7 / Interval.exact(2))

    def test_single_cusp_matches_unbiased(self):
        A = ivm([[5]])
        assert greedy_areas(A)[0].overlaps(unbiased_areas(A)[0])

    def test_incomplete_order_rejected(self):
        with pytest.raises(ValueError):
            greedy_areas(ivm(MAGIC), (0, 1))


def shape_i():
    return ComplexInterval(Interval.exact(0), Interval.exact(1))


class TestSlopes:
    def test_slope_length_basics(self):
        s = shape_i()
        one = Interval.exact(1)
        assert slope_length(one, s, (1, 0)).contains(1)
        assert slope_length(one, s, (0, 1)).contains(1)
        assert slope_length(s.im, s, (3, 4)).contains(5)

    def test_six_theorem_area(self):
        s = shape_i()
        assert six_theorem_area(s, (1, 0)).contains(36)
        assert six_theorem_area(s, (0, 0)).contains(0)
        a = six_theorem_area(s, (2, 3))
        assert slope_length(a, s, (2, 3)).contains(6)

    def test_short_slopes_brute_force(self, fig8_P):
        s = cusp_shapes(fig8_P)[0]
        area = Interval.exact(2) * Interval.exact(3).sqrt()
        got = short_slopes(area, s)
        assert (0, 0) not in got
        # brute force over a generous window
        brute = []
        for p in range(-60, 61):
            for q in range(0, 61):
                if math.gcd(p, q) != 1 or (q == 0 and p < 0):
                    continue
                if slope_length(area, s, (p, q)).lo_float() <= 6.0:
                    brute.append((p, q))
        assert got == sorted(brute)

    def test_square_torus_extremes(self):
        s = shape_i()
        # area 144: threshold |p + q i| <= 0.5, no primitive vector fits
        assert short_slopes(Interval.exact(144), s) == []
        # area 1: threshold 6, compare against a brute-force disc scan
        got = short_slopes(Interval.exact(1), s)
        brute = sorted((p, q) for p in range(-7, 8) for q in range(0, 8)
                       if math.gcd(p, q) == 1 and not (q == 0 and p < 0)
                       and p * p + q * q <= 36)
        assert got == brute

    def test_all_fillings_check(self, fig8_P):
        s = cusp_shapes(fig8_P)[0]
        assert all_fillings_hyperbolic_check(ivm([[10 ** 9]]), [s])
        # the figure-eight manifold has exceptional fillings
        assert not all_fillings_hyperbolic_check(ivm([[12]]), [s])
