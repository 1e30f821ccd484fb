"""Certified shape solutions of the logarithmic gluing equations.

Given a triangulation and floating-point approximations of the tetrahedron
shapes, this module produces interval enclosures that provably contain an
exact solution of the edge-consistency and cusp-completeness equations, with
every shape certified to lie in the upper half plane.  The proof engine is
the Krawczyk containment test applied to a square subsystem of the equations;
the approximations are first polished by a high-precision Newton iteration so
the test box can be taken very small.
"""

import mpmath
import numpy as np
from mpmath.libmp import mpf_lt

from .interval import (
    ComplexInterval, DomainError, Interval, DEFAULT_PRECISION,
    PrecisionError, pi_interval,
)

__all__ = [
    'CertificationError', 'ShapeAssignment',
    'log_gluing_residual', 'krawczyk_certify',
]

# The polishing Newton iteration must start close to a solution; a first
# correction step larger than this rejects the input instead of silently
# converging to some unrelated solution far from the given approximations.
_NEWTON_TRUST_RADIUS = 1e-3


class CertificationError(ValueError):
    """Shapes could not be certified at the requested precision."""


class ShapeAssignment:
    """Interval shapes, one per tetrahedron, each certified to have im > 0."""

    __slots__ = ('shapes',)

    def __init__(self, shapes):
        shapes = tuple(shapes)
        for z in shapes:
            if not z.im.is_positive():
                raise CertificationError(
                    'shape enclosure not certified to have im > 0')
        self.shapes = shapes

    @property
    def prec(self):
        return max(z.prec for z in self.shapes)

    def __len__(self):
        return len(self.shapes)

    def __iter__(self):
        return iter(self.shapes)

    def __getitem__(self, t):
        return self.shapes[t]

    def max_width(self):
        return max(z.max_width() for z in self.shapes)

    def max_width_float(self):
        return max(z.max_width_float() for z in self.shapes)

    def __repr__(self):
        return f'ShapeAssignment({list(self.shapes)!r})'


def _log_off_branch_cut(w):
    """log of a rectangle that provably avoids (-inf, 0].

    Handles the three verifiable positions relative to the branch cut:
    strictly above the real axis, strictly below it, or strictly in the
    right half plane.
    """
    if w.im.is_positive():
        return w.log_upper_half()
    if (-w.im).is_positive():
        return w.conj().log_upper_half().conj()
    if w.re.is_positive():
        return ComplexInterval(abs(w).log(), (w.im / w.re).atan())
    raise DomainError('log argument enclosure touches the branch cut')


def _shape_logs(z):
    """(log z, log 1/(1-z), log(1-1/z)) for one shape enclosure."""
    one_minus = 1 - z
    if z.contains_zero() or one_minus.contains_zero():
        raise DomainError('shape enclosure touches 0 or 1')
    return (_log_off_branch_cut(z),
            -_log_off_branch_cut(one_minus),
            _log_off_branch_cut(1 - 1 / z))


def _row_residual(row, logs, target):
    """Sum a*log z + b*log(1/(1-z)) + c*log(1-1/z) over tets, minus target."""
    prec = max(lz.prec for lz, _, _ in logs)
    total = ComplexInterval(Interval.exact(0, prec), Interval.exact(0, prec))
    for (a, b, c), (lz, lw, lu) in zip(row, logs):
        if a:
            total = total + a * lz
        if b:
            total = total + b * lw
        if c:
            total = total + c * lu
    return total - target


def _two_pi_i(prec):
    return ComplexInterval(Interval.exact(0, prec), 2 * pi_interval(prec))


def _rows_and_targets(tri, prec):
    """All equation rows: edge rows (target 2*pi*i), then per cusp the
    meridian and longitude completeness rows (target 0)."""
    edge_rows, completeness = tri.gluing_equation_exponents()
    zero = ComplexInterval(Interval.exact(0, prec), Interval.exact(0, prec))
    rows = [(row, _two_pi_i(prec)) for row in edge_rows]
    for mer, lon in completeness:
        rows.append((mer, zero))
        rows.append((lon, zero))
    return rows


def log_gluing_residual(tri, z):
    """Residual enclosures of every gluing and completeness equation.

    ``z`` is a ShapeAssignment or a sequence of ComplexIntervals.  Returns
    one ComplexInterval per row, ordered as all edge rows followed by
    (meridian, longitude) per cusp; each must contain 0 at a geometric
    solution.
    """
    shapes = list(z)
    prec = max(s.prec for s in shapes)
    logs = [_shape_logs(s) for s in shapes]
    return [_row_residual(row, logs, target)
            for row, target in _rows_and_targets(tri, prec)]


# -- square subsystem ---------------------------------------------------

def _candidate_rows(tri, prec):
    """Edge rows minus one redundant row per cusp, plus both completeness
    rows per cusp.

    The product of all edge equations incident to a cusp is a consequence of
    the remaining equations together with z * (1/(1-z)) * (1-1/z) = -1, so
    for each cusp one incident edge row (the largest-index one not already
    dropped) is discarded in favour of the two completeness rows.
    """
    edge_rows, completeness = tri.gluing_equation_exponents()
    classes = tri.edge_classes()
    incident_cusps = []
    for cls in classes:
        cusps = set()
        for t, (v, u) in cls:
            cusps.add(tri.cusp_of_vertex[t][v])
            cusps.add(tri.cusp_of_vertex[t][u])
        incident_cusps.append(cusps)

    dropped = set()
    for cusp in range(tri.num_cusps):
        candidates = [i for i in range(len(edge_rows))
                      if cusp in incident_cusps[i] and i not in dropped]
        if not candidates:
            raise CertificationError(
                f'no edge class incident to cusp {cusp}')
        dropped.add(max(candidates))

    zero = ComplexInterval(Interval.exact(0, prec), Interval.exact(0, prec))
    rows = [(row, _two_pi_i(prec)) for i, row in enumerate(edge_rows)
            if i not in dropped]
    for mer, lon in completeness:
        rows.append((mer, zero))
        rows.append((lon, zero))
    return rows


def _select_square(rows, z_mid):
    """Pick n rows from the candidates by largest-pivot Gaussian elimination
    on the complex midpoint Jacobian; deterministic (ties -> earliest row)."""
    n = len(z_mid)
    work = [[_jac_entry(abc, z) for abc, z in zip(row, z_mid)]
            for row, _ in rows]
    available = list(range(len(rows)))
    selected = []
    for col in range(n):
        pivot = max(available, key=lambda r: (abs(work[r][col]), -r))
        if abs(work[pivot][col]) == 0:
            raise CertificationError('gluing equations are rank deficient '
                                     'at the approximate shapes')
        available.remove(pivot)
        selected.append(pivot)
        for r in available:
            factor = work[r][col] / work[pivot][col]
            work[r] = [w - factor * p
                       for w, p in zip(work[r], work[pivot])]
    return [rows[i] for i in sorted(selected)]


def _jac_entry(row_t, z):
    """d/dz of one row's log sum at z: a/z + b/(1-z) + c/(z(z-1))."""
    a, b, c = row_t
    total = z * 0
    if a:
        total += a / z
    if b:
        total += b / (1 - z)
    if c:
        total += c / (z * (z - 1))
    return total


def _jacobian_row_mp(row, z):
    return [_jac_entry(abc, zt) for abc, zt in zip(row, z)]


# -- Newton polish ------------------------------------------------------

def _newton_polish(rows, z_approx, precision):
    """Refine shapes to ~``precision`` correct bits with mpmath Newton.

    Returns (midpoints, last step size) as mpmath numbers.  Raises if the
    input is not close to a solution or the iteration leaves the upper half
    plane.
    """
    with mpmath.workprec(precision + 40):
        z = [mpmath.mpc(w) for w in z_approx]
        two_pi_i = 2j * mpmath.pi
        tol = mpmath.mpf(2) ** (-(precision + 10))
        step = mpmath.mpf(1)
        for iteration in range(60):
            fvec = []
            for row, target in rows:
                s = mpmath.mpc(0)
                for (a, b, c), zt in zip(row, z):
                    if a:
                        s += a * mpmath.log(zt)
                    if b:
                        s -= b * mpmath.log(1 - zt)
                    if c:
                        s += c * mpmath.log(1 - 1 / zt)
                fvec.append(s - (two_pi_i if target.im.is_positive() else 0))
            jac = mpmath.matrix([_jacobian_row_mp(row, z)
                                 for row, _ in rows])
            try:
                delta = mpmath.lu_solve(jac, mpmath.matrix(
                    [-f for f in fvec]))
            except ZeroDivisionError:
                raise CertificationError(
                    'singular Jacobian during Newton polish') from None
            step = max(abs(d) for d in delta)
            if iteration == 0 and step > _NEWTON_TRUST_RADIUS:
                raise CertificationError(
                    'input shapes are not near a geometric solution '
                    f'(first Newton correction {float(step):.3g})')
            z = [zt + d for zt, d in zip(z, delta)]
            if any(zt.imag <= 0 for zt in z):
                raise CertificationError(
                    'Newton polish left the upper half plane')
            if step < tol:
                return z, step
        raise CertificationError('Newton polish did not converge; '
                                 'input may not be near a solution')


# -- Krawczyk containment test ------------------------------------------

def _mpc_to_point(w, prec):
    """Exact point ComplexInterval from an mpmath complex number."""
    return ComplexInterval(Interval(w.real._mpf_, prec=prec),
                           Interval(w.imag._mpf_, prec=prec))


def _box_around(mid, radius, prec):
    r = Interval(-radius, radius, prec=prec)
    return ComplexInterval(mid.re + r, mid.im + r)


def _interval_jacobian(rows, boxes):
    return [[_jac_entry(abc, z) for abc, z in zip(row, boxes)]
            for row, _ in rows]


def _strictly_inside(inner, outer):
    return (mpf_lt(outer.re.lo, inner.re.lo)
            and mpf_lt(inner.re.hi, outer.re.hi)
            and mpf_lt(outer.im.lo, inner.im.lo)
            and mpf_lt(inner.im.hi, outer.im.hi))


def _krawczyk_once(rows, mids, radius, prec):
    """One Krawczyk pass; returns certified boxes or None."""
    n = len(mids)
    boxes = [_box_around(m, radius, prec) for m in mids]
    try:
        mid_logs = [_shape_logs(m) for m in mids]
        f_mid = [_row_residual(row, mid_logs, target)
                 for row, target in rows]
        jac = _interval_jacobian(rows, boxes)
    except DomainError:
        return None

    # Approximate inverse of the midpoint Jacobian in double precision; its
    # quality only affects the contraction factor, not correctness.
    jac_mid = np.array([[entry.midpoint_complex() for entry in r]
                        for r in jac], dtype=complex)
    try:
        c_inv = np.linalg.inv(jac_mid)
    except np.linalg.LinAlgError:
        return None

    c_rows = [[ComplexInterval(complex(c_inv[i, j]), prec=prec)
               for j in range(n)] for i in range(n)]
    deltas = [b - m for b, m in zip(boxes, mids)]

    certified = []
    for i in range(n):
        k = mids[i]
        for j in range(n):
            k = k - c_rows[i][j] * f_mid[j]
        for j in range(n):
            coeff = -sum((c_rows[i][l] * jac[l][j] for l in range(n)),
                         start=ComplexInterval(0, prec=prec))
            if i == j:
                coeff = coeff + 1
            k = k + coeff * deltas[j]
        if not _strictly_inside(k, boxes[i]):
            return None
        certified.append(ComplexInterval(k.re.intersect(boxes[i].re),
                                         k.im.intersect(boxes[i].im)))
    return certified


def krawczyk_certify(tri, z_approx, precision=DEFAULT_PRECISION):
    """Certify interval shapes containing an exact geometric solution.

    ``z_approx`` are complex approximations (one per tetrahedron) near the
    solution.  Returns a ShapeAssignment of width roughly 2^-precision whose
    boxes are proven, via the Krawczyk test on a square subsystem of the
    equations, to contain an exact solution with im(z_t) > 0 for all t.

    Raises CertificationError when the test fails (insufficient precision
    or input not near a geometric solution).
    """
    z_approx = list(z_approx)
    if len(z_approx) != tri.n:
        raise CertificationError('need one approximate shape per '
                                 'tetrahedron')
    prec = precision
    candidates = _candidate_rows(tri, prec)
    with mpmath.workprec(53):
        mid_guess = [mpmath.mpc(w) for w in z_approx]
    rows = _select_square(candidates, mid_guess)
    if len(rows) != tri.n:
        raise CertificationError('could not select a square subsystem')

    mids_mp, last_step = _newton_polish(rows, z_approx, prec)
    with mpmath.workprec(prec + 40):
        mids = [_mpc_to_point(w, prec) for w in mids_mp]
        base_radius = max(float(last_step), 0.0) * 64 + 2.0 ** (-prec + 12)

    for radius in (base_radius, base_radius * 2.0 ** 16):
        certified = _krawczyk_once(rows, mids, radius, prec)
        if certified is not None:
            assignment = ShapeAssignment(certified)
            for residual in log_gluing_residual(tri, assignment):
                if not residual.contains_zero():
                    raise CertificationError(
                        'certified box violates a gluing equation')
            return assignment
    raise PrecisionError(
        'Krawczyk containment failed: insufficient precision')
