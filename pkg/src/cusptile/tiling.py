"""Streaming tiler: enumerate lifted tetrahedra by distance from an object.

Given a developed fundamental polyhedron and a standard geometric object K
(a point, a closed-geodesic line with its holonomy, or a horoball at a
polyhedron vertex), the stream emits pairs (r_i, m_i T_{t_i}) of distinct
lifted tetrahedra in the quotient by the stabilizer of K, such that the
previously emitted tiles cover the closed r_i-neighborhood of K.  Radii
are certified lower bounds; seeds carry r = -infinity.

The frontier is a binary heap keyed on the lower endpoint of r, ties
broken by insertion order, and each popped tile expands across every face
except the one it was entered through — pushing the neighbor with a
certified lower bound of the distance from K to the crossed face.
"""

import heapq
import itertools

import numpy as np
from mpmath.libmp import mpf_lt

from .interval import Interval, NEG_INF, PrecisionError, bound_lo
from .hyperboloid import (
    HLine, HPoint, Horoball, MVector, dist_to_ideal_triangle,
    minkowski_identity,
)
from .trace import trace_heuristic, trace_verify
from .vcollections import LiftedTetSet

__all__ = [
    'GeometricObject', 'TileEvent', 'UnsupportedObjectError',
    'certified_line_from_holonomy', 'make_seeds', 'tile_stream',
    'tetrahedra_view',
]


class UnsupportedObjectError(ValueError):
    """The object cannot be tiled about (e.g. the supplied holonomy is not
    certifiably loxodromic)."""


class GeometricObject:
    """Tagged union of the objects the tiler accepts.

    kind 'point':    geom HPoint
    kind 'line':     geom HLine, holonomy h (generator of the stabilizer
                     with attractive fixed point geom.x1), length (real
                     translation length enclosure)
    kind 'horoball': geom Horoball at a polyhedron vertex, cusp index,
                     seed tetrahedron index
    """

    __slots__ = ('kind', 'geom', 'holonomy', 'length', 'cusp', 'seed_tet')

    def __init__(self, kind, geom, holonomy=None, length=None, cusp=None,
                 seed_tet=None):
        self.kind = kind
        self.geom = geom
        self.holonomy = holonomy
        self.length = length
        self.cusp = cusp
        self.seed_tet = seed_tet

    @classmethod
    def point(cls, x):
        return cls('point', x)

    @classmethod
    def line(cls, hline, holonomy, length):
        return cls('line', hline, holonomy=holonomy, length=length)

    @classmethod
    def line_from_holonomy(cls, h, precision=None):
        """Build the invariant-line object of a loxodromic matrix from
        certified eigenvector enclosures."""
        x0, x1, lam = certified_line_from_holonomy(h, precision)
        return cls.line(HLine(x0, x1), h, lam.log())

    @classmethod
    def horoball_at_vertex(cls, P, t, v):
        """Horoball about vertex v of tetrahedron t of the polyhedron,
        sized by the (already scaled) cusp cross sections."""
        return cls('horoball', Horoball(P.vertices[t][v]),
                   cusp=P.tri.cusp_of_vertex[t][v], seed_tet=t)


class TileEvent:
    """One emitted tile: r is NEG_INF (seed) or an Interval whose lower
    endpoint is the certified covering radius."""

    __slots__ = ('r', 'm', 't')

    def __init__(self, r, m, t):
        self.r = r
        self.m = m
        self.t = t

    def r_lower_float(self):
        if self.r is NEG_INF:
            return float('-inf')
        return self.r.lo_float()


# -- certified eigenvectors ----------------------------------------------------


def _newton_eigen(a_mid, lam, vec, pivot, prec):
    """High-precision Newton refinement of an eigenpair of the midpoint
    matrix, with coordinate `pivot` of the eigenvector frozen at 1."""
    import mpmath
    free = [j for j in range(4) if j != pivot]
    with mpmath.workprec(prec + 40):
        lam = mpmath.mpf(lam)
        v = [mpmath.mpf(x) for x in vec]
        v = [x / v[pivot] for x in v]
        step = mpmath.mpf(1)
        for _ in range(60):
            residual = [sum(a_mid[i][j] * v[j] for j in range(4))
                        - lam * v[i] for i in range(4)]
            jac = mpmath.matrix(4, 4)
            for i in range(4):
                jac[i, 0] = -v[i]
                for c, j in enumerate(free):
                    jac[i, c + 1] = a_mid[i][j] - (lam if i == j else 0)
            try:
                delta = mpmath.lu_solve(jac, mpmath.matrix(residual))
            except ZeroDivisionError:
                raise UnsupportedObjectError(
                    'eigenpair refinement hit a singular Jacobian '
                    '(holonomy not certifiably loxodromic)')
            lam -= delta[0]
            for c, j in enumerate(free):
                v[j] -= delta[c + 1]
            step = max(abs(x) for x in delta)
            if step < mpmath.mpf(2) ** (-(prec + 10)):
                break
        return lam, v, step


def _certify_eigenpair(h, lam_f, vec_f, prec):
    """Krawczyk verification of an isolated real eigenpair of the interval
    matrix h; returns (eigenvalue Interval, eigenvector MVector)."""
    import mpmath
    pivot = max(range(4), key=lambda i: abs(vec_f[i]))
    from mpmath import make_mpf
    a_mid = [[make_mpf(h[i, j].midpoint().lo) for j in range(4)]
             for i in range(4)]
    lam, v, step = _newton_eigen(a_mid, lam_f, vec_f, pivot, prec)

    free = [j for j in range(4) if j != pivot]
    mids = [Interval(lam._mpf_, prec=prec)] + \
           [Interval(v[j]._mpf_, prec=prec) for j in free]
    slack = max(h[i, j].width_float() for i in range(4) for j in range(4))
    base = float(step) * 64 + slack * 64 + 2.0 ** (-prec + 12)

    one = Interval.exact(1, prec)

    def vec_of(u):
        out = [None] * 4
        out[pivot] = one
        for c, j in enumerate(free):
            out[j] = u[c + 1]
        return out

    def f_at(u):
        vv = vec_of(u)
        return [sum((h[i, j] * vv[j] for j in range(4)),
                    start=Interval.exact(0, prec)) - u[0] * vv[i]
                for i in range(4)]

    def jac_at(u):
        vv = vec_of(u)
        rows = []
        for i in range(4):
            row = [-vv[i]]
            for j in free:
                entry = h[i, j]
                if i == j:
                    entry = entry - u[0]
                row.append(entry)
            rows.append(row)
        return rows

    for radius in (base, base * 65536.0):
        box = [m + Interval(-radius, radius, prec=prec) for m in mids]
        fm = f_at(mids)
        jx = jac_at(box)
        j_mid = np.array([[e.midpoint_float() for e in row] for row in jx])
        try:
            c_inv = np.linalg.inv(j_mid)
        except np.linalg.LinAlgError:
            continue
        k = []
        ok = True
        for i in range(4):
            acc = mids[i]
            for j in range(4):
                acc = acc - Interval(c_inv[i][j], prec=prec) * fm[j]
            for j in range(4):
                coeff = Interval.exact(1 if i == j else 0, prec)
                for l in range(4):
                    coeff = coeff - Interval(c_inv[i][l], prec=prec) * jx[l][j]
                acc = acc + coeff * (box[j] - mids[j])
            k.append(acc)
        for ki, bi in zip(k, box):
            if not (mpf_lt(bi.lo, ki.lo) and mpf_lt(ki.hi, bi.hi)):
                ok = False
                break
        if ok:
            lam_iv = k[0].intersect(box[0])
            u = [lam_iv] + [k[c + 1].intersect(box[c + 1]) for c in range(3)]
            return lam_iv, MVector(vec_of(u))
    raise UnsupportedObjectError(
        'could not certify an isolated real eigenpair of the holonomy')


def certified_line_from_holonomy(h, precision=None):
    """Certified attracting / repelling fixed vectors of a loxodromic
    SO(1,3) matrix: returns (x0 repelling, x1 attracting, eigenvalue
    enclosure of the attracting eigenvalue, certified > 1)."""
    prec = precision or h[0, 0].prec
    a_mid = np.array([[h[i, j].midpoint_float() for j in range(4)]
                      for i in range(4)])
    eigvals, eigvecs = np.linalg.eig(a_mid)
    real = [(val.real, i) for i, val in enumerate(eigvals)
            if abs(val.imag) < 0.01 * (abs(val.real) + 1)]
    if not real:
        raise UnsupportedObjectError('holonomy has no real eigenvalues '
                                     'away from the unit circle')
    hi_val, hi_idx = max(real)
    lo_val, lo_idx = min(real, key=lambda p: abs(p[0]))
    if hi_val < 1.000001:
        raise UnsupportedObjectError(
            'holonomy is not certifiably loxodromic (largest real '
            'eigenvalue not separated from 1)')

    def light_direction(idx):
        vec = eigvecs[:, idx].real
        if vec[0] < 0:
            vec = -vec
        return list(vec)

    lam_hi, x1 = _certify_eigenpair(h, hi_val, light_direction(hi_idx), prec)
    lam_lo, x0 = _certify_eigenpair(h, lo_val, light_direction(lo_idx), prec)
    if not (Interval.exact(1, prec) < lam_hi):
        raise UnsupportedObjectError(
            'attracting eigenvalue enclosure does not exceed 1')
    if not (lam_lo < Interval.exact(1, prec)):
        raise UnsupportedObjectError(
            'repelling eigenvalue enclosure not below 1')
    return x0, x1, lam_hi


# -- seeds ---------------------------------------------------------------------

# Ratio of the base-point weights on the two ideal endpoints when sampling
# a point on a line; an arbitrary constant chosen far from algebraic
# numbers with small defining polynomials, so the sample avoids the
# 2-skeleton of the developed triangulation.
_LINE_BASE_RATIO = 0.5372849659783621


def _line_base_point(line):
    mu = Interval(_LINE_BASE_RATIO)
    return HPoint(line.x0 + line.x1.scale(mu), normalize=True)


def make_seeds(P, K):
    """Seed tiles for the object: trace to the base point (point / line)
    or use the vertex-carrying tetrahedron (horoball)."""
    if K.kind == 'horoball':
        return [(minkowski_identity(), K.seed_tet)]
    if K.kind == 'point':
        base = K.geom
    elif K.kind == 'line':
        base = _line_base_point(K.geom)
    else:
        raise UnsupportedObjectError('unknown object kind %r' % (K.kind,))
    return trace_verify(P, base, trace_heuristic(P, base))


def _make_lifted_set(P, K):
    if K.kind == 'point':
        return LiftedTetSet.for_point(P)
    if K.kind == 'horoball':
        return LiftedTetSet.for_horoball(P, K.geom.l)
    if K.kind == 'line':
        return LiftedTetSet.for_line(P, K.geom, K.holonomy, K.length)
    raise UnsupportedObjectError('unknown object kind %r' % (K.kind,))


class _HeapKey:
    """Sortable wrapper around the raw lower endpoint of an ExtendedBound."""

    __slots__ = ('raw',)

    def __init__(self, r):
        self.raw = bound_lo(r)

    def __lt__(self, other):
        return mpf_lt(self.raw, other.raw)

    def __eq__(self, other):
        return self.raw == other.raw


def tile_stream(P, K, seeds=None):
    """Generator of TileEvents per the streaming tiling algorithm."""
    if seeds is None:
        seeds = make_seeds(P, K)
    lifted = _make_lifted_set(P, K)
    counter = itertools.count()
    queue = []
    for m, t in seeds:
        heapq.heappush(queue, (_HeapKey(NEG_INF), next(counter),
                               NEG_INF, m, t, -1))
    while queue:
        _, _, r, m, t, f_entry = heapq.heappop(queue)
        if not lifted.add(m, t):
            continue
        yield TileEvent(r, m, t)
        for f in range(4):
            if f == f_entry:
                continue
            face = P.triangles[t][f].transformed(m)
            r_next = dist_to_ideal_triangle(K.geom, face, lower_bound=True)
            t2 = P.tri.neighbors[t][f]
            f2 = P.tri.gluings[t][f][f]
            m2 = m @ P.pairings[t2][f2]
            heapq.heappush(queue, (_HeapKey(r_next), next(counter),
                                   r_next, m2, t2, f2))


def tetrahedra_view(stream, K):
    """Map an object-view stream to (r, m^-1 K primitive, t) events."""
    for event in stream:
        m_inv = event.m.so13_inverse()
        yield event.r, K.geom.transformed(m_inv), event.t
