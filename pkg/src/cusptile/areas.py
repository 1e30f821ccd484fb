"""Cusp neighborhood selection and the 6-Theorem slope machinery.

The maximal cusp area matrix A bounds which products of cusp areas still
admit embedded and disjoint neighborhoods (a a^T <= A element-wise).  Two
selection policies turn it into concrete area vectors:

* unbiased_areas — grow all neighborhoods at the same rate; each stops
  when it bumps into itself or a stopped neighborhood.  The interval
  version fulfills the inclusion principle even when the input intervals
  leave the bump order ambiguous.
* greedy_areas — grow the neighborhoods one at a time in a given order.

On the boundary torus of a cusp neighborhood with area A and shape
s = lambda/mu, the peripheral curve (p, q) has length
l = sqrt(A / im(s)) * |p + q s|; fillings along slopes of length > 6 on
embedded disjoint neighborhoods are hyperbolic (the 6-Theorem), which the
slope helpers quantify.
"""

import math
from fractions import Fraction

from mpmath.libmp import mpf_eq, mpf_le, mpf_lt

from .interval import ComplexInterval, Interval, PrecisionError

__all__ = [
    'cusp_translations', 'cusp_shapes', 'unbiased_areas',
    'unbiased_areas_exact', 'greedy_areas', 'slope_length',
    'six_theorem_area', 'short_slopes', 'all_fillings_hyperbolic_check',
    'product_bounded',
]


# -- cusp shapes ---------------------------------------------------------------


def cusp_translations(tri, cross_section, cusp):
    """Translations (mu, lambda) of the meridian and longitude on the
    boundary torus of the given cross section, with the longitude sign
    chosen so that im(lambda/mu) > 0."""
    mu = cross_section.translation(tri.peripheral[cusp][0])
    lam = cross_section.translation(tri.peripheral[cusp][1])
    im = (mu.conj() * lam).im
    if im.is_positive():
        return mu, lam
    if (-im).is_positive():
        return mu, -lam
    raise PrecisionError('cusp torus orientation is undecided')


def cusp_shapes(P):
    """The shape s = lambda/mu of each cusp torus (im(s) > 0 certified);
    independent of the cross-section scale."""
    shapes = []
    for cusp, xs in enumerate(P.cross_sections):
        mu, lam = cusp_translations(P.tri, xs, cusp)
        shapes.append(lam / mu)
    return shapes


# -- area selection ------------------------------------------------------------


def _check_positive(A):
    n = len(A)
    for i in range(n):
        for j in range(n):
            if not A[i][j].is_positive():
                raise PrecisionError(
                    'matrix entry (%d, %d) is not certified positive'
                    % (i, j))


def unbiased_areas(A):
    """Areas of the unbiased maximal neighborhoods for a symmetric positive
    matrix A of intervals: all neighborhoods grow at the same rate and each
    stops on first contact.  Satisfies a a^T <= A (upper endpoints) and the
    inclusion principle."""
    _check_positive(A)
    n = len(A)
    a = [None] * n
    while any(x is None for x in a):
        best_lo, best_ij = None, None
        for ip in range(n):
            if a[ip] is not None:
                continue
            for jp in range(n):
                t = A[ip][jp].sqrt() if a[jp] is None else A[ip][jp] / a[jp]
                if best_lo is None or mpf_lt(t.lo, best_lo) or (
                        mpf_eq(t.lo, best_lo) and (ip, jp) < best_ij):
                    best_lo, best_ij = t.lo, (ip, jp)
        i = best_ij[0]
        prec = A[i][i].prec
        t_lower = Interval._raw(best_lo, best_lo, prec)
        hi = None
        for jp in range(n):
            if jp == i:
                cand = A[i][i].sqrt()
            elif a[jp] is None:
                cand = A[i][jp] / t_lower
            else:
                cand = A[i][jp] / a[jp]
            if hi is None or mpf_lt(cand.hi, hi):
                hi = cand.hi
        a[i] = Interval._raw(best_lo, hi, prec)
    return a


class _Radical:
    """Exact positive number c * sqrt(s) with rational c, s; closed under
    the operations of the unbiased-areas algorithm (reference mode for the
    inclusion-principle tests)."""

    __slots__ = ('c', 's')

    def __init__(self, c, s=1):
        self.c = Fraction(c)
        self.s = Fraction(s)
        if self.c <= 0 or self.s <= 0:
            raise ValueError('radicals here are positive')

    def _key(self):
        return self.c * self.c * self.s

    def __lt__(self, other):
        return self._key() < other._key()

    def __eq__(self, other):
        return self._key() == other._key()

    def __le__(self, other):
        return self._key() <= other._key()

    def divide_into(self, q):
        """q / self for rational q."""
        return _Radical(Fraction(q) / (self.c * self.s), self.s)

    def as_float(self):
        return float(self.c) * math.sqrt(float(self.s))


def unbiased_areas_exact(A):
    """Exact-rational trace of the unbiased selection (A: Fractions);
    returns _Radical values."""
    n = len(A)
    for row in A:
        for entry in row:
            if not entry > 0:
                raise ValueError('matrix entries must be positive')
    a = [None] * n
    while any(x is None for x in a):
        best, best_ij = None, None
        for ip in range(n):
            if a[ip] is not None:
                continue
            for jp in range(n):
                t = (_Radical(1, A[ip][jp]) if a[jp] is None
                     else a[jp].divide_into(A[ip][jp]))
                if best is None or t < best or (t == best
                                                and (ip, jp) < best_ij):
                    best, best_ij = t, (ip, jp)
        a[best_ij[0]] = best
    return a


def greedy_areas(A, order=None):
    """Areas of the greedy neighborhoods: grow one cusp at a time in the
    given order, each until it hits itself or an earlier neighborhood."""
    _check_positive(A)
    n = len(A)
    if order is None:
        order = range(n)
    a = [None] * n
    for i in order:
        candidates = [A[i][i].sqrt()]
        for j in range(n):
            if a[j] is not None:
                candidates.append(A[i][j] / a[j])
        a[i] = Interval.min_of(*candidates)
    if any(x is None for x in a):
        raise ValueError('order must visit every cusp once')
    return a


def product_bounded(a, A):
    """Certified usability of the selected areas: the lower endpoints a_lo
    satisfy a_lo a_lo^T <= A element-wise (so neighborhoods with those
    areas are embedded and disjoint)."""
    n = len(a)
    for i in range(n):
        for j in range(n):
            prod = Interval._raw(a[i].lo, a[i].lo, a[i].prec) * \
                Interval._raw(a[j].lo, a[j].lo, a[j].prec)
            if not mpf_le(prod.hi, A[i][j].hi):
                return False
    return True


# -- slopes and the 6-Theorem ----------------------------------------------------


def _slope_vector(s, slope):
    p, q = slope
    return ComplexInterval(Interval.exact(p, s.prec),
                           Interval.exact(0, s.prec)) \
        + s * Interval.exact(q, s.prec)


def slope_length(area, s, slope):
    """Length of the peripheral curve (p, q) on the boundary torus of a
    neighborhood with the given area and shape s."""
    return (area / s.im).sqrt() * abs(_slope_vector(s, slope))


def six_theorem_area(s, slope):
    """The area at which the slope has length exactly 6 (0 for the
    unfilled sentinel (0, 0))."""
    p, q = slope
    if (p, q) == (0, 0):
        return Interval.exact(0, s.prec)
    return s.im * Interval.exact(36, s.prec) / _slope_vector(s, slope) \
        .abs_sqr()


def _canonical(p, q):
    if q < 0 or (q == 0 and p < 0):
        return -p, -q
    return p, q


def _lattice_candidates(s, radius):
    """All primitive slopes (p, q), canonicalized up to sign, with
    |p + q s| possibly <= radius (float over-approximation with margin)."""
    re = s.re.midpoint_float()
    im = s.im.midpoint_float()
    r = radius * (1 + 1e-9) + 1e-9
    out = []
    q_max = int(math.floor(r / im)) + 1
    for q in range(0, q_max + 1):
        center = -q * re
        p_lo = int(math.floor(center - r)) - 1
        p_hi = int(math.ceil(center + r)) + 1
        for p in range(p_lo, p_hi + 1):
            if (p, q) == (0, 0) or math.gcd(p, q) != 1:
                continue
            out.append(_canonical(p, q))
    return sorted(set(out))


def short_slopes(area, s, length_bound=6):
    """Primitive slopes whose length on the area-`area` torus of shape s
    is not certified to exceed the bound (sorted)."""
    bound = Interval.exact(length_bound, s.prec)
    radius = (length_bound /
              math.sqrt(area.lo_float() / s.im.hi_float())) * 1.001
    out = []
    for slope in _lattice_candidates(s, radius):
        if not (bound < slope_length(area, s, slope)):
            out.append(slope)
    return out


def _max_six_theorem_area(s):
    """Enclosure of the maximum of six_theorem_area over all primitive
    slopes (attained at the shortest primitive lattice vector)."""
    # (1, 0) has |p + qs| = 1, so the shortest primitive vector has length
    # <= 1 and candidates are confined to |q| <= 1/im(s).
    candidates = _lattice_candidates(s, 1.0)
    return Interval.max_of(*(six_theorem_area(s, sl) for sl in candidates))


def all_fillings_hyperbolic_check(A, shapes):
    """True iff alpha alpha^T < A is certified element-wise, where alpha_i
    is the largest six-Theorem area of any slope on cusp i — in which case
    every Dehn filling of the manifold is hyperbolic."""
    alpha = [_max_six_theorem_area(s) for s in shapes]
    n = len(alpha)
    for i in range(n):
        for j in range(n):
            if not (alpha[i] * alpha[j] < A[i][j]):
                return False
    return True
