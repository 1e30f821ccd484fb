"""Hyperboloid-model geometry with interval coordinates.

Points, lines, planes, horoballs and ideal triangles live in Minkowski
space R^{1,3} with the inner product of signature (-,+,+,+).  All distance
formulas are written scale-invariantly; ideal endpoints of lines are never
normalized.  Each formula clamps its argument into the mathematical domain
before applying acosh/sqrt/log, which keeps the results valid (and the
lower bounds non-trivial) even when operand enclosures overlap degenerate
configurations.
"""

from __future__ import annotations

from .interval import Interval, NEG_INF, DomainError, lt_certified

__all__ = [
    'MVector', 'MMatrix', 'HPoint', 'HLine', 'HPlane', 'Horoball',
    'IdealTriangle', 'dist', 'dist_point_point', 'dist_point_line',
    'dist_line_line', 'dist_point_plane', 'dist_line_plane',
    'dist_plane_plane', 'dist_to_horoball', 'line_projection_offset',
    'horospherical_length', 'dist_to_ideal_triangle',
    'minkowski_identity', 'boost_x', 'rotation_matrix', 'J_SIGNS',
]

J_SIGNS = (-1, 1, 1, 1)


class MVector:
    """4-vector with interval components; x·y has signature (-,+,+,+)."""

    __slots__ = ('c',)

    def __init__(self, components, prec=None):
        self.c = tuple(x if isinstance(x, Interval) else Interval(x, prec=prec)
                       for x in components)
        if len(self.c) != 4:
            raise ValueError('MVector needs 4 components')

    def __getitem__(self, i):
        return self.c[i]

    def dot(self, other):
        s = -(self.c[0] * other.c[0])
        for i in range(1, 4):
            s = s + self.c[i] * other.c[i]
        return s

    def norm_sqr(self):
        """Self inner product using dependency-aware squares."""
        s = -self.c[0].sqr()
        for i in range(1, 4):
            s = s + self.c[i].sqr()
        return s

    def __add__(self, other):
        return MVector([a + b for a, b in zip(self.c, other.c)])

    def __sub__(self, other):
        return MVector([a - b for a, b in zip(self.c, other.c)])

    def __neg__(self):
        return MVector([-a for a in self.c])

    def scale(self, s):
        return MVector([a * s for a in self.c])

    def normalize_point(self):
        """Project a time-like future vector onto H^3."""
        n = (-self.norm_sqr()).clamp_lower(0)
        return self.scale(1 / n.sqrt())

    def normalize_space(self):
        """Scale a space-like vector to n·n = 1."""
        return self.scale(1 / self.norm_sqr().clamp_lower(0).sqrt())

    # -- classification -------------------------------------------------

    def is_time_like_future(self):
        return self.norm_sqr().is_negative() and self.c[0].is_positive()

    def is_light_like_future(self):
        return self.norm_sqr().contains_zero() and self.c[0].is_positive()

    def is_space_like_unit(self):
        return self.norm_sqr().contains(1)

    def contains_vec(self, other):
        return all(a.contains(b) for a, b in zip(self.c, other.c))

    def overlaps(self, other):
        return all(a.overlaps(b) for a, b in zip(self.c, other.c))

    def midpoint_floats(self):
        return [a.midpoint_float() for a in self.c]

    def serialize(self):
        return [a.serialize() for a in self.c]

    @classmethod
    def deserialize(cls, data, prec=None):
        return cls([Interval.deserialize(d, prec) for d in data])

    def __repr__(self):
        return 'MVector(%s)' % (', '.join('%.6g' % a.midpoint_float()
                                          for a in self.c))


class MMatrix:
    """4x4 interval matrix; used for SO(1,3) isometries."""

    __slots__ = ('rows',)

    def __init__(self, rows, prec=None):
        self.rows = tuple(MVector(r, prec=prec) if not isinstance(r, MVector)
                          else r for r in rows)
        if len(self.rows) != 4:
            raise ValueError('MMatrix needs 4 rows')

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def apply(self, v):
        """Matrix-vector product (plain Euclidean contraction)."""
        return MVector([sum((self.rows[i][j] * v[j] for j in range(1, 4)),
                            self.rows[i][0] * v[0]) for i in range(4)])

    def __matmul__(self, other):
        return MMatrix([[sum((self.rows[i][k] * other.rows[k][j]
                              for k in range(1, 4)),
                             self.rows[i][0] * other.rows[0][j])
                         for j in range(4)] for i in range(4)])

    def transpose(self):
        return MMatrix([[self.rows[j][i] for j in range(4)]
                        for i in range(4)])

    def so13_inverse(self):
        """Inverse of a form-preserving matrix: J G^T J (exact formula)."""
        return MMatrix([[self.rows[j][i] * (J_SIGNS[i] * J_SIGNS[j])
                         for j in range(4)] for i in range(4)])

    def preserves_form(self):
        """G^T J G encloses J component-wise."""
        gt = self.transpose()
        for i in range(4):
            ji_row = MVector([gt.rows[i][k] * J_SIGNS[k] for k in range(4)])
            for j in range(4):
                entry = sum((ji_row[k] * self.rows[k][j] for k in range(1, 4)),
                            ji_row[0] * self.rows[0][j])
                target = J_SIGNS[i] if i == j else 0
                if not entry.contains(target):
                    return False
        return True

    def det(self):
        rows = self.rows

        def det3(r, cols):
            (a, b, c), (d, e, f), (g, h, i) = [
                [rows[k][m] for m in cols] for k in r]
            return (a * (e * i - f * h) - b * (d * i - f * g)
                    + c * (d * h - e * g))

        cols = [0, 1, 2, 3]
        s = None
        sign = 1
        for j in range(4):
            sub = [c for c in cols if c != j]
            term = rows[0][j] * det3([1, 2, 3], sub)
            term = term if sign > 0 else -term
            s = term if s is None else s + term
            sign = -sign
        return s

    def max_width_float(self):
        return max(self.rows[i][j].width_float()
                   for i in range(4) for j in range(4))

    def contains_matrix(self, other):
        return all(self.rows[i][j].contains(other.rows[i][j])
                   for i in range(4) for j in range(4))

    def overlaps(self, other):
        return all(self.rows[i][j].overlaps(other.rows[i][j])
                   for i in range(4) for j in range(4))

    def serialize(self):
        return [r.serialize() for r in self.rows]

    @classmethod
    def deserialize(cls, data, prec=None):
        return cls([MVector.deserialize(r, prec) for r in data])

    def __repr__(self):
        return 'MMatrix(%s)' % ([['%.4g' % self.rows[i][j].midpoint_float()
                                  for j in range(4)] for i in range(4)],)


def minkowski_identity(prec=None):
    return MMatrix([[Interval.exact(1 if i == j else 0, prec)
                     for j in range(4)] for i in range(4)])


def boost_x(d, prec=None):
    """Translation by hyperbolic length d along the x1-axis geodesic."""
    d = d if isinstance(d, Interval) else Interval(d, prec=prec)
    ch, sh, zero, one = d.cosh(), d.sinh(), Interval.exact(0), Interval.exact(1)
    return MMatrix([[ch, sh, zero, zero],
                    [sh, ch, zero, zero],
                    [zero, zero, one, zero],
                    [zero, zero, zero, one]])


def rotation_matrix(axis, cos_t, sin_t, prec=None):
    """Rotation in the spatial plane orthogonal to spatial ``axis``
    (1, 2 or 3), given enclosures of cos/sin of the angle."""
    c = cos_t if isinstance(cos_t, Interval) else Interval(cos_t, prec=prec)
    s = sin_t if isinstance(sin_t, Interval) else Interval(sin_t, prec=prec)
    i, j = [k for k in (1, 2, 3) if k != axis]
    m = [[Interval.exact(1 if a == b else 0) for b in range(4)]
         for a in range(4)]
    m[i][i], m[j][j] = c, c
    m[i][j], m[j][i] = -s, s
    return MMatrix(m)


class HPoint:
    """Point on H^3 (time-like future, normalized)."""

    __slots__ = ('v',)

    def __init__(self, v, normalize=False):
        self.v = v.normalize_point() if normalize else v

    def transformed(self, g):
        return HPoint(g.apply(self.v))

    def __repr__(self):
        return f'HPoint({self.v!r})'


class HLine:
    """Geodesic with two light-like ideal endpoints (unnormalized)."""

    __slots__ = ('x0', 'x1')

    def __init__(self, x0, x1):
        self.x0 = x0
        self.x1 = x1

    def midpoint(self):
        return HPoint((self.x0 + self.x1), normalize=True)

    def transformed(self, g):
        return HLine(g.apply(self.x0), g.apply(self.x1))

    def __repr__(self):
        return f'HLine({self.x0!r}, {self.x1!r})'


class HPlane:
    """Totally geodesic plane n^perp with space-like unit normal."""

    __slots__ = ('n',)

    def __init__(self, n, normalize=False):
        self.n = n.normalize_space() if normalize else n

    def transformed(self, g):
        return HPlane(g.apply(self.n))


class Horoball:
    """B(l) = {x : x·l > -1} for light-like future l."""

    __slots__ = ('l',)

    def __init__(self, l):
        self.l = l

    def transformed(self, g):
        return Horoball(g.apply(self.l))

    def __repr__(self):
        return f'Horoball({self.l!r})'


# ---------------------------------------------------------------------------
# distances


def dist_point_point(x, xp):
    return (-x.v.dot(xp.v)).clamp_lower(1).acosh()


def _line_quotient(a_prod, denom):
    """[1,inf) ∩ (2·a_prod / ([0,inf) ∩ denom)) with the division guarded."""
    den = denom.clamp_lower(0)
    if den.is_empty or den.contains_zero():
        # Denominator indistinguishable from 0: only the trivial bound.
        return None
    q = (a_prod * Interval.exact(2) / den).clamp_lower(1)
    if q.is_empty:
        q = Interval.exact(1)
    return q


def dist_point_line(x, line):
    q = _line_quotient((line.x0.dot(x.v)) * (x.v.dot(line.x1)),
                       -(line.x0.dot(line.x1)))
    if q is None:
        return _nonneg_unbounded(x.v[0].prec)
    return q.sqrt().acosh()


def dist_line_line(l1, l2):
    d11 = l1.x0.dot(l1.x1)
    d22 = l2.x0.dot(l2.x1)
    den = d11 * d22
    den = den.clamp_lower(0)
    if den.is_empty or den.contains_zero():
        return _nonneg_unbounded(l1.x0[0].prec)
    a = ((l1.x0.dot(l2.x0)) * (l1.x1.dot(l2.x1)) / den).clamp_lower(0)
    b = ((l1.x0.dot(l2.x1)) * (l1.x1.dot(l2.x0)) / den).clamp_lower(0)
    lam = a.sqrt() + b.sqrt()
    half = (lam - Interval.exact(1)).clamp_lower(0) / Interval.exact(2)
    if half.is_empty:
        half = Interval.exact(0)
    return half.sqrt().asinh() * Interval.exact(2)


def dist_point_plane(x, plane):
    return abs(x.v.dot(plane.n).asinh())


def dist_line_plane(line, plane):
    prod = (line.x0.dot(plane.n)) * (plane.n.dot(line.x1))
    if prod.is_negative():
        return Interval.exact(0)
    num = (-(prod * Interval.exact(2) / line.x0.dot(line.x1))).clamp_lower(0)
    if num.is_empty:
        num = Interval.exact(0)
    formula = num.sqrt().asinh()
    if prod.is_positive():
        return formula
    # Undecided side test: hull with 0 (lower bound 0, upper bound kept).
    return formula.hull(Interval.exact(0))


def dist_plane_plane(p1, p2):
    return abs(p1.n.dot(p2.n)).max_with(1).acosh()


def _nonneg_unbounded(prec):
    from mpmath.libmp import finf, fzero
    return Interval._raw(fzero, finf, prec)


def dist_to_horoball(obj, ball):
    """Signed distance to B(l); negative inside, -inf for horoball-horoball
    pairs sharing arbitrarily deep tails only when the value underflows the
    log domain (tangency and overlap give finite negative values)."""
    l = ball.l
    if isinstance(obj, HPoint):
        return (-obj.v.dot(l)).clamp_lower(0).log_or_neg_inf()
    if isinstance(obj, HLine):
        den = (-(obj.x0.dot(obj.x1))).clamp_lower(0)
        if den.is_empty or den.contains_zero():
            return NEG_INF
        val = ((obj.x0.dot(l)) * (l.dot(obj.x1)) * Interval.exact(2) / den) \
            .clamp_lower(0)
        return _half_log_or_neg_inf(val)
    if isinstance(obj, HPlane):
        return abs(obj.n.dot(l)).log_or_neg_inf()
    if isinstance(obj, Horoball):
        if obj.l is l:
            return NEG_INF
        val = (-(obj.l.dot(l)) / Interval.exact(2)).clamp_lower(0)
        return val.log_or_neg_inf()
    raise TypeError(f'no horoball distance for {type(obj)!r}')


def _half_log_or_neg_inf(val):
    r = val.sqrt().log_or_neg_inf()
    return r


def line_projection_offset(line, x, xp):
    """Signed distance along the line between the projections of x, x'."""
    num = (x.v.dot(line.x1)) * (xp.v.dot(line.x0))
    den = (x.v.dot(line.x0)) * (xp.v.dot(line.x1))
    q = (num / den).clamp_lower(0)
    if q.is_empty:
        raise DomainError('projection offset ratio collapsed to <= 0')
    return q.sqrt().log()


def horospherical_length(ball, x0, x1):
    num = (-(x0.dot(x1)) * Interval.exact(2)).clamp_lower(0)
    if num.is_empty:
        num = Interval.exact(0)
    den = (x0.dot(ball.l)) * (ball.l.dot(x1))
    return (num / den.clamp_lower(0)).sqrt()


class IdealTriangle:
    """Ideal triangle spanned by three light-like vertices, with the
    bounding data needed for the distance case split: the carrying plane
    normal, incircle touch points, and inward side normals."""

    __slots__ = ('v', 'plane', 'touch_points', 'side_normals')

    def __init__(self, v0, v1, v2):
        self.v = (v0, v1, v2)
        n = MVector([_cross4_j(v0, v1, v2, i) * J_SIGNS[i] for i in range(4)])
        self.plane = HPlane(n, normalize=True)
        touch, normals = [], []
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            vi, vj, vk = self.v[i], self.v[j], self.v[k]
            m = (vj.scale(-(vi.dot(vk))) + vk.scale(-(vi.dot(vj)))) \
                .normalize_point()
            w = vi - m
            w = w + m.scale(m.dot(w))
            touch.append(m)
            normals.append(w.normalize_space())
        self.touch_points = tuple(touch)
        self.side_normals = tuple(normals)

    def edge_line(self, k):
        """The line v_i v_j opposite to vertex k (matching side_normals[k])."""
        j, i = (k + 1) % 3, (k + 2) % 3
        return HLine(self.v[i], self.v[j])

    def transformed(self, g):
        t = object.__new__(IdealTriangle)
        t.v = tuple(g.apply(v) for v in self.v)
        t.plane = self.plane.transformed(g)
        t.touch_points = tuple(g.apply(m) for m in self.touch_points)
        t.side_normals = tuple(g.apply(n) for n in self.side_normals)
        return t


def _cross4_j(a, b, c, i):
    """Component i of the Euclidean 4D cross product of a, b, c."""
    cols = [k for k in range(4) if k != i]
    (p, q, r) = cols
    d = (a[p] * (b[q] * c[r] - b[r] * c[q])
         - a[q] * (b[p] * c[r] - b[r] * c[p])
         + a[r] * (b[p] * c[q] - b[q] * c[p]))
    # Cofactor signs of the Laplace expansion along the last row.
    return d if i % 2 else -d


def _triangle_side_value(obj, tri):
    """The vector whose products with side normals drive the case split."""
    if isinstance(obj, HPoint):
        return obj.v
    if isinstance(obj, Horoball):
        return obj.l
    if isinstance(obj, HLine):
        n = tri.plane.n
        a = abs(obj.x1.dot(n))
        b = abs(obj.x0.dot(n))
        return (obj.x0.scale(a) + obj.x1.scale(b)).normalize_point()
    raise TypeError(f'no triangle distance for {type(obj)!r}')


def _dist_obj_line(obj, line):
    if isinstance(obj, HPoint):
        return dist_point_line(obj, line)
    if isinstance(obj, Horoball):
        return dist_to_horoball(line, obj)
    if isinstance(obj, HLine):
        return dist_line_line(obj, line)
    raise TypeError


def _dist_obj_plane(obj, plane):
    if isinstance(obj, HPoint):
        return dist_point_plane(obj, plane)
    if isinstance(obj, Horoball):
        return dist_to_horoball(plane, obj)
    if isinstance(obj, HLine):
        return dist_line_plane(obj, plane)
    raise TypeError


def dist_to_ideal_triangle(obj, tri, lower_bound=False):
    """Distance from a point / horoball / line to an ideal triangle.

    ``lower_bound=True`` implements the tiler's cheap policy: return the
    edge distance as soon as some side test certifies obj·n_k <= 0, else
    the plane distance — always a valid lower bound.  Exact mode hulls the
    plane distance with every edge distance that cannot be excluded.
    """
    p = _triangle_side_value(obj, tri)
    signs = [p.dot(nk) for nk in tri.side_normals]

    if lower_bound:
        for k, s in enumerate(signs):
            if s <= Interval.exact(0):
                return _dist_obj_line(obj, tri.edge_line(k))
        return _dist_obj_plane(obj, tri.plane)

    for k, s in enumerate(signs):
        if s.is_negative():
            return _dist_obj_line(obj, tri.edge_line(k))
    undecided = [k for k, s in enumerate(signs) if not s.is_nonnegative()]
    base = _dist_obj_plane(obj, tri.plane)
    if not undecided:
        return base
    vals = [base] + [_dist_obj_line(obj, tri.edge_line(k)) for k in undecided]
    if any(v is NEG_INF for v in vals):
        return NEG_INF
    return Interval.hull_of(*vals)


def dist(a, b):
    """Kind-dispatching distance (signed where horoballs are involved)."""
    if isinstance(b, Horoball):
        return dist_to_horoball(a, b)
    if isinstance(a, Horoball):
        return dist_to_horoball(b, a)
    if isinstance(a, HPoint):
        if isinstance(b, HPoint):
            return dist_point_point(a, b)
        if isinstance(b, HLine):
            return dist_point_line(a, b)
        if isinstance(b, HPlane):
            return dist_point_plane(a, b)
    if isinstance(a, HLine):
        if isinstance(b, HPoint):
            return dist_point_line(b, a)
        if isinstance(b, HLine):
            return dist_line_line(a, b)
        if isinstance(b, HPlane):
            return dist_line_plane(a, b)
    if isinstance(a, HPlane):
        if isinstance(b, HPoint):
            return dist_point_plane(b, a)
        if isinstance(b, HLine):
            return dist_line_plane(b, a)
        if isinstance(b, HPlane):
            return dist_plane_plane(a, b)
    if isinstance(a, IdealTriangle) or isinstance(b, IdealTriangle):
        tri, obj = (a, b) if isinstance(a, IdealTriangle) else (b, a)
        return dist_to_ideal_triangle(obj, tri)
    raise TypeError(f'no distance between {type(a)!r} and {type(b)!r}')
