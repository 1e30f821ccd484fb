import os

import mpmath
import pytest

from cusptile.certify import (
    CertificationError, ShapeAssignment,
    krawczyk_certify, log_gluing_residual,
    _row_residual, _shape_logs,
)
from cusptile.interval import ComplexInterval, DomainError, Interval
from cusptile.triangulation import parse_manifold_file

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def fixture(name):
    with open(os.path.join(FIXTURES, name)) as fh:
        return parse_manifold_file(fh.read())


@pytest.fixture(scope='module')
def fig8():
    return fixture('fig8.tri')


def fig8_exact_shape(prec=300):
    """The figure-eight solution in closed form: (1 + i*sqrt(3)) / 2."""
    with mpmath.workprec(prec):
        return mpmath.mpc(1, mpmath.sqrt(3)) / 2


def boxed(value, radius, prec=212):
    return ComplexInterval(
        Interval(value.real - radius, value.real + radius, prec=prec),
        Interval(value.imag - radius, value.imag + radius, prec=prec))


class TestResidual:
    def test_fig8_residuals_contain_zero(self, fig8):
        shapes = [boxed(z, 1e-10) for z in fig8.shapes]
        residuals = log_gluing_residual(fig8.triangulation, shapes)
        assert len(residuals) == 2 + 2  # 2 edge rows + meridian + longitude
        assert all(r.contains_zero() for r in residuals)

    def test_perturbed_residual_excludes_zero(self, fig8):
        shapes = [boxed(z + 0.1, 1e-10) for z in fig8.shapes]
        residuals = log_gluing_residual(fig8.triangulation, shapes)
        assert any(not r.contains_zero() for r in residuals)

    def test_empty_row_is_exact_zero(self, fig8):
        logs = [_shape_logs(boxed(z, 1e-10)) for z in fig8.shapes]
        zero = ComplexInterval(Interval.exact(0), Interval.exact(0))
        r = _row_residual([(0, 0, 0)] * 2, logs, zero)
        assert r.contains_zero() and r.max_width_float() == 0.0

    def test_shape_touching_zero_is_domain_error(self, fig8):
        shapes = [boxed(complex(0, 1e-12), 1e-10) for _ in fig8.shapes]
        with pytest.raises(DomainError):
            log_gluing_residual(fig8.triangulation, shapes)

    def test_shape_touching_one_is_domain_error(self, fig8):
        shapes = [boxed(complex(1, 1e-12), 1e-10) for _ in fig8.shapes]
        with pytest.raises(DomainError):
            log_gluing_residual(fig8.triangulation, shapes)

    def test_branch_cut_positions(self):
        # A shape in the second quadrant sends 1 - 1/z below the axis and
        # 1 - z into the right half plane: exercises all three log cases.
        z = boxed(complex(-0.4, 0.9), 1e-12)
        lz, lw, lu = _shape_logs(z)
        import cmath
        w = complex(-0.4, 0.9)
        assert lz.contains(cmath.log(w))
        assert lw.contains(-cmath.log(1 - w))
        assert lu.contains(cmath.log(1 - 1 / w))


class TestShapeAssignment:
    def test_rejects_nonpositive_imaginary(self):
        good = boxed(complex(0.5, 0.8), 1e-6)
        bad = ComplexInterval(Interval(0.5), Interval(-1e-6, 1e-6))
        with pytest.raises(CertificationError):
            ShapeAssignment([good, bad])

    def test_accessors(self):
        a = ShapeAssignment([boxed(complex(0.5, 0.8), 1e-6)])
        assert len(a) == 1
        assert a[0] is list(a)[0]
        assert a.max_width_float() >= 2e-6


class TestKrawczyk:
    def test_fig8_certification(self, fig8):
        certified = krawczyk_certify(fig8.triangulation, fig8.shapes, 212)
        exact = fig8_exact_shape()
        for z in certified:
            assert z.max_width_float() < 1e-40
            assert z.re.contains(exact.real._mpf_)
            assert z.im.contains(exact.imag._mpf_)
            assert z.im.is_positive()

    def test_certified_residuals_contain_zero(self, fig8):
        certified = krawczyk_certify(fig8.triangulation, fig8.shapes, 212)
        residuals = log_gluing_residual(fig8.triangulation, certified)
        assert all(r.contains_zero() for r in residuals)

    def test_perturbed_input_fails(self, fig8):
        bad = fixture('fig8_perturbed.tri')
        with pytest.raises(CertificationError):
            krawczyk_certify(bad.triangulation, bad.shapes, 212)

    def test_random_point_fails_rather_than_lies(self, fig8):
        with pytest.raises(CertificationError):
            krawczyk_certify(fig8.triangulation,
                             [complex(2.3, 1.7), complex(0.1, 3.0)], 212)

    def test_precision_doubling_shrinks_widths(self, fig8):
        widths = []
        for prec in (106, 212, 424):
            certified = krawczyk_certify(fig8.triangulation, fig8.shapes,
                                         prec)
            widths.append(certified.max_width_float())
        assert widths[0] > widths[1] > widths[2]

    def test_magic_manifold_certifies(self):
        data = fixture('magic.tri')
        certified = krawczyk_certify(data.triangulation, data.shapes, 212)
        assert all(z.im.is_positive() for z in certified)
        assert certified.max_width_float() < 1e-40
        # The shapes are 3/4 + i*sqrt(7)/4 and 5/4 + i*sqrt(7)/4.
        with mpmath.workprec(300):
            root = (mpmath.sqrt(7) / 4)._mpf_
        for z in certified:
            assert z.im.contains(root)
            assert z.re.contains(0.75) or z.re.contains(1.25)

    def test_wrong_shape_count(self, fig8):
        with pytest.raises(CertificationError):
            krawczyk_certify(fig8.triangulation, fig8.shapes[:1], 212)
