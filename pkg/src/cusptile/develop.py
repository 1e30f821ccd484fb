"""Cusp cross sections and the developed fundamental polyhedron.

Builds, from a triangulation with certified shapes:

* cusp cross sections (Euclidean horotriangle edge lengths, areas, and
  peripheral holonomy translations), via a breadth-first development of
  each vertex link in the plane;
* the maximal per-cusp scaling keeping the cusp neighborhood in standard
  form and embedded;
* a developed fundamental polyhedron in the hyperboloid model: vertex
  light vectors scaled to match the cusp cross sections, face normals,
  face triangles, face-pairing matrices (identity on a spanning tree),
  and certified incenters/inradii.

Ideal points are developed in CP^1 as projective pairs of complex
intervals, which avoids any special-casing of infinity, and converted to
light-like Minkowski vectors at the end.
"""

from fractions import Fraction

from .interval import (
    ComplexInterval, DomainError, Interval, PrecisionError,
)
from .hyperboloid import (
    HPoint, Horoball, IdealTriangle, MMatrix, MVector,
    horospherical_length, minkowski_identity, J_SIGNS,
)
from .triangulation import (
    EDGE_PARAMETER, VERTEX_CYCLES, _cycle_pred, _cycle_succ,
)

__all__ = [
    'CuspCrossSection', 'DevelopedPolyhedron',
    'develop_cusp_cross_section', 'max_standard_area',
    'standard_form_scale', 'develop_polyhedron', 'incenter_inradius',
]


def shape_parameters(z):
    """The three edge parameters (z, 1/(1-z), 1-1/z) of one tetrahedron."""
    return (z, 1 / (1 - z), 1 - 1 / z)


def edge_parameter(shapes, t, v, u):
    """Shape parameter of edge {v, u} of tetrahedron t."""
    return shape_parameters(shapes[t])[EDGE_PARAMETER[frozenset((v, u))]]


def _half(prec):
    return Interval(Fraction(1, 2), prec=prec)


# -- cusp cross sections --------------------------------------------------


class CuspCrossSection:
    """One cusp's cross section developed in the plane.

    For each cusp triangle (t, v) the development stores the planar
    positions of the link triangle's vertices (the vertex on tet edge
    {v, u} at key u).  Edge lengths, horotriangle areas and peripheral
    translations all derive from these positions; the whole section can
    be rescaled by an area factor without re-developing.
    """

    def __init__(self, tri, shapes, cusp):
        self.tri = tri
        self.shapes = list(shapes)
        self.cusp = cusp
        self.triangles = tri.cusp_triangles(cusp)
        self.scale = Interval.exact(1)
        self.positions = {}
        self.parent = {}
        self._tree_sides = set()
        self._develop()
        self.sides = self._collect_sides()
        self.nontree = [s for s in self.sides if s not in self._tree_sides]
        self._strips = {}
        self._check_gluing_consistency()
        self._raw_areas = {tv: self._triangle_area(tv)
                           for tv in self.triangles}
        self._raw_total = None

    # -- development ------------------------------------------------------

    def _develop(self):
        tri = self.tri
        t0, v0 = self.triangles[0]
        a, b, c = VERTEX_CYCLES[v0]
        z = edge_parameter(self.shapes, t0, v0, a)
        zero = ComplexInterval(Interval.exact(0), Interval.exact(0))
        one = ComplexInterval(Interval.exact(1), Interval.exact(0))
        self.positions[(t0, v0)] = {a: zero, b: one, c: zero + one / z}
        self.parent[(t0, v0)] = None
        queue = [(t0, v0)]
        while queue:
            t, v = queue.pop(0)
            for f in range(4):
                if f == v:
                    continue
                t2 = tri.neighbors[t][f]
                p = tri.gluings[t][f]
                v2 = p[v]
                if (t2, v2) in self.positions:
                    continue
                self.positions[(t2, v2)] = self._across(t, v, f)
                self.parent[(t2, v2)] = ((t, v), f)
                self._tree_sides.add(self._canonical_side(t, v, f))
                queue.append((t2, v2))
        if len(self.positions) != len(self.triangles):
            raise PrecisionError('cusp link development did not reach '
                                 'every triangle')

    def _across(self, t, v, f):
        """Positions of the neighbor triangle developed across the side of
        (t, v) lying in face f."""
        tri = self.tri
        t2 = tri.neighbors[t][f]
        p = tri.gluings[t][f]
        v2 = p[v]
        src = self.positions[(t, v)]
        pos = {p[u]: src[u] for u in range(4) if u not in (v, f)}
        missing = p[f]
        corner = next(iter(pos))
        s = _cycle_succ(v2, corner)
        q = _cycle_pred(v2, corner)
        z = edge_parameter(self.shapes, t2, v2, corner)
        if s == missing:
            pos[s] = pos[corner] + z * (pos[q] - pos[corner])
        else:
            pos[q] = pos[corner] + (pos[s] - pos[corner]) / z
        return pos

    def _canonical_side(self, t, v, f):
        tri = self.tri
        t2 = tri.neighbors[t][f]
        p = tri.gluings[t][f]
        return min((t, v, f), (t2, p[v], p[f]))

    def _collect_sides(self):
        reps = set()
        for t, v in self.triangles:
            for f in range(4):
                if f != v:
                    reps.add(self._canonical_side(t, v, f))
        return sorted(reps)

    def _check_gluing_consistency(self):
        for t, v, f in self.nontree:
            own = self._side_length_raw(t, v, f)
            p = self.tri.gluings[t][f]
            t2, v2, f2 = self.tri.neighbors[t][f], p[v], p[f]
            other = self._side_length_raw(t2, v2, f2)
            if not own.overlaps(other):
                raise PrecisionError(
                    'cusp cross-section lengths disagree across a gluing')

    # -- lengths and areas --------------------------------------------------

    def _side_length_raw(self, t, v, f):
        u1, u2 = (u for u in range(4) if u not in (v, f))
        pos = self.positions[(t, v)]
        return abs(pos[u1] - pos[u2])

    def edge_length(self, t, v, f):
        """Length of the horotriangle side of (t, v) lying in face f."""
        return self._side_length_raw(t, v, f) * self.scale.sqrt()

    def _triangle_area(self, tv):
        t, v = tv
        a, b, c = VERTEX_CYCLES[v]
        pos = self.positions[(t, v)]
        va = pos[b] - pos[a]
        vb = pos[c] - pos[a]
        return abs((va.conj() * vb).im) * _half(va.prec)

    def triangle_area(self, t, v):
        return self._raw_areas[(t, v)] * self.scale

    @property
    def area(self):
        if self._raw_total is None:
            total = Interval.exact(0)
            for raw in self._raw_areas.values():
                total = total + raw
            self._raw_total = total
        return self._raw_total * self.scale

    def scaled(self, factor):
        """Copy of this cross section with areas multiplied by ``factor``
        (lengths by its square root)."""
        import copy
        other = copy.copy(self)
        other.scale = self.scale * factor
        return other

    def scaled_to_area(self, target):
        return self.scaled(target / self.area)

    # -- peripheral holonomy -------------------------------------------------

    def _strip_cycle(self, side):
        """Corner weights and holonomy translation of the closed cycle
        through the given non-tree side."""
        t, v, f = side
        tri = self.tri
        p = tri.gluings[t][f]
        t2, v2, f2 = tri.neighbors[t][f], p[v], p[f]

        cand = self._across(t, v, f)
        stored = self.positions[(t2, v2)]
        translation = None
        for u in cand:
            diff = stored[u] - cand[u]
            if translation is None:
                translation = diff
            else:
                re = translation.re.intersect(diff.re)
                im = translation.im.intersect(diff.im)
                if re.is_empty or im.is_empty:
                    raise PrecisionError('cusp holonomy is not enclosed '
                                         'as a translation')
                translation = ComplexInterval(re, im)

        seq = []
        for node, f_up in reversed(self._path_to_root(t, v)):
            (pt, pv), pf = self.parent[node]
            seq.append(((pt, pv), pf, node, f_up))
        seq.append(((t, v), f, (t2, v2), f2))
        for node, f_up in self._path_to_root(t2, v2):
            (pt, pv), pf = self.parent[node]
            seq.append((node, f_up, (pt, pv), pf))

        weights = {}
        k = len(seq)
        for i in range(k):
            node, entry = seq[i][2], seq[i][3]
            exit_ = seq[(i + 1) % k][1]
            assert seq[(i + 1) % k][0] == node
            self._add_corner(weights, node, entry, exit_)
        return weights, translation

    def _path_to_root(self, t, v):
        path = []
        node = (t, v)
        while self.parent[node] is not None:
            (pt, pv), pf = self.parent[node]
            p = self.tri.gluings[pt][pf]
            path.append((node, p[pf]))
            node = (pt, pv)
        return path

    def _add_corner(self, weights, node, entry, exit_):
        t, v = node
        if entry == exit_:
            return
        u = next(w for w in range(4) if w not in (v, entry, exit_))
        if entry == _cycle_succ(v, u) and exit_ == _cycle_pred(v, u):
            sign = 1
        else:
            sign = -1
        weights[(t, v, u)] = weights.get((t, v, u), 0) + sign

    def _strip(self, side):
        if side not in self._strips:
            self._strips[side] = self._strip_cycle(side)
        return self._strips[side]

    def _side_flow(self, weights, side):
        t, v, f = side
        return (weights.get((t, v, _cycle_succ(v, f)), 0)
                - weights.get((t, v, _cycle_pred(v, f)), 0))

    def translation(self, curve):
        """Holonomy translation of a closed peripheral curve given by a
        corner-weight table (curve[t][v][u]), in the development's chart
        units (multiply by sqrt of an area scale to convert)."""
        weights = {(t, v, u): curve[t][v][u]
                   for t, v in self.triangles
                   for u in range(4) if u != v and curve[t][v][u]}
        total = ComplexInterval(Interval.exact(0), Interval.exact(0))
        for side in self.nontree:
            flow = self._side_flow(weights, side)
            if not flow:
                continue
            strip_w, strip_t = self._strip(side)
            own = self._side_flow(strip_w, side)
            total = total + (flow * own) * strip_t
        return total * self.scale.sqrt()


def develop_cusp_cross_section(tri, shapes, cusp):
    return CuspCrossSection(tri, shapes, cusp)


# -- standard form ---------------------------------------------------------


def max_standard_area(z):
    """Largest area a horoball cross section can have inside a tetrahedron
    of shape z while meeting three of the four faces."""
    im = z.im
    if not im.is_positive():
        raise DomainError('max_standard_area needs certified im(z) > 0')
    one_minus = 1 - z
    abs_z, abs_om = abs(z), abs(one_minus)
    half = _half(z.prec)
    # Dot products at the corners of the Euclidean triangle (0, 1, z);
    # all positive iff the triangle is acute.
    dots = (z.re, one_minus.re, z.abs_sqr() - z.re)
    h_acute = abs_z * abs_om * half / im
    h_blunt = Interval.max_of(Interval.exact(1), abs_z, abs_om) * half
    if all(d.is_positive() for d in dots):
        h = h_acute
    elif any((-d).is_nonnegative() for d in dots):
        h = h_blunt
    else:
        h = h_acute.hull(h_blunt)
    return im * half / h.sqr()


def _edge_collision_bound(cross_sections, cusp_of_vertex, shapes, t, v, u):
    """Upper bound on the area scale from the horoball-disjointness
    condition a*b <= 1 along tet edge {v, u} (both ends at one cusp)."""
    c = cusp_of_vertex[t][v]
    xs = cross_sections[c]
    z = edge_parameter(shapes, t, v, u)
    ab = (xs.edge_length(t, v, u) * xs.edge_length(t, u, v)
          * abs(z) / abs(1 - z).sqr())
    return 1 / ab


def standard_form_scale(tri, shapes, cross_sections):
    """Per cusp, the largest area-scaling factor keeping the neighborhood
    in standard form and embedded (self-collision along edges)."""
    shapes = list(shapes)
    bounds = [[] for _ in range(tri.num_cusps)]
    for t in range(tri.n):
        for v in range(4):
            c = tri.cusp_of_vertex[t][v]
            xs = cross_sections[c]
            bounds[c].append(max_standard_area(shapes[t])
                             / xs.triangle_area(t, v))
            for u in range(v + 1, 4):
                if tri.cusp_of_vertex[t][u] == c:
                    bounds[c].append(_edge_collision_bound(
                        cross_sections, tri.cusp_of_vertex, shapes, t, v, u))
    return [Interval.min_of(*bs) for bs in bounds]


# -- projective CP^1 points -------------------------------------------------


def _pdet(p, q):
    return p[0] * q[1] - q[0] * p[1]


def _pnormalize(p):
    nu, de = p
    if abs(de.midpoint_complex()) >= abs(nu.midpoint_complex()):
        big = de
    else:
        big = nu
    if big.contains_zero():
        raise PrecisionError('projective point lost its normalization')
    return (nu / big, de / big)


def _solve_fourth(pos, missing, z):
    """Projective position of the missing vertex of a tetrahedron with
    shape z (cross ratio of the even vertex order 0,1,2,3)."""

    def factor(i, j):
        # det(pos[i], pos[j]) as (alpha, beta, const): alpha*Xn + beta*Xd
        # when one slot is the unknown, else a constant.
        if i == missing:
            q = pos[j]
            return (q[1], -q[0], None)
        if j == missing:
            q = pos[i]
            return (-q[1], q[0], None)
        return (None, None, _pdet(pos[i], pos[j]))

    def mul(f, g):
        # product of one linear and one constant factor -> linear
        if f[2] is None:
            lin, const = f, g[2]
        else:
            lin, const = g, f[2]
        return (lin[0] * const, lin[1] * const)

    num = mul(factor(2, 1), factor(3, 0))
    den = mul(factor(2, 0), factor(3, 1))
    a = num[0] - z * den[0]
    b = num[1] - z * den[1]
    return _pnormalize((b, -a))


def _light_vector(p):
    nu, de = p
    nn, dd = nu.abs_sqr(), de.abs_sqr()
    cross = nu * de.conj()
    half = _half(nn.prec)
    return MVector([(nn + dd) * half, (nn - dd) * half, cross.re, cross.im])


# -- Moebius -> SO(1,3) ------------------------------------------------------


def _mobius_three_points(src, dst):
    """2x2 complex-interval matrix sending the three projective points
    src[i] to dst[i]."""

    def to_standard(p1, p2, p3):
        # x -> (det(p3,p2) det(x,p1) : det(p3,p1) det(x,p2))
        c1, c2 = _pdet(p3, p2), _pdet(p3, p1)
        return ((c1 * p1[1], -(c1 * p1[0])),
                (c2 * p2[1], -(c2 * p2[0])))

    a = to_standard(*src)
    b = to_standard(*dst)
    badj = ((b[1][1], -b[0][1]), (-b[1][0], b[0][0]))
    return tuple(tuple(sum((badj[i][k] * a[k][j] for k in (0, 1)),
                           start=badj[i][0] * 0)
                       for j in (0, 1)) for i in (0, 1))


_HERMITIAN_BASIS = (
    ((1, 0), (0, 1)),
    ((1, 0), (0, -1)),
    ((0, 1), (1, 0)),
    ((0, 1j), (-1j, 0)),
)


def _so13_from_mobius(m, prec):
    """SO(1,3) interval matrix of the Moebius map X -> M X M* / |det M|^2
    in the Hermitian-matrix model of Minkowski space."""
    conj_t = tuple(tuple(m[j][i].conj() for j in (0, 1)) for i in (0, 1))
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    det_sqr = det.abs_sqr()
    if not det_sqr.is_positive():
        raise PrecisionError('Moebius determinant enclosure touches 0')
    denom = det_sqr.sqrt()
    cols = []
    for h in _HERMITIAN_BASIS:
        hk = tuple(tuple(ComplexInterval(x, prec=prec) for x in row)
                   for row in h)
        p = tuple(tuple(m[i][0] * hk[0][j] + m[i][1] * hk[1][j]
                        for j in (0, 1)) for i in (0, 1))
        y = tuple(tuple(p[i][0] * conj_t[0][j] + p[i][1] * conj_t[1][j]
                        for j in (0, 1)) for i in (0, 1))
        cols.append([(y[0][0].re + y[1][1].re) * _half(prec) / denom,
                     (y[0][0].re - y[1][1].re) * _half(prec) / denom,
                     y[0][1].re / denom,
                     y[0][1].im / denom])
    return MMatrix([[cols[j][i] for j in range(4)] for i in range(4)])


# -- linear solve -----------------------------------------------------------


def solve_linear(rows, rhs):
    """Interval Gaussian elimination with midpoint partial pivoting."""
    n = len(rhs)
    m = [list(rows[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        piv = max(range(col, n),
                  key=lambda r: abs(m[r][col].midpoint_float()))
        m[col], m[piv] = m[piv], m[col]
        pivot = m[col][col]
        if pivot.contains_zero():
            raise PrecisionError('pivot enclosure touches 0 in linear solve')
        for r in range(col + 1, n):
            factor = m[r][col] / pivot
            m[r] = [m[r][k] - factor * m[col][k] for k in range(n + 1)]
    x = [None] * n
    for i in reversed(range(n)):
        acc = m[i][n]
        for k in range(i + 1, n):
            acc = acc - m[i][k] * x[k]
        x[i] = acc / m[i][i]
    return x


# -- developed polyhedron ----------------------------------------------------


class DevelopedPolyhedron:
    """Fundamental polyhedron data for one triangulation with charts."""

    __slots__ = ('tri', 'shapes', 'cross_sections', 'vertices', 'normals',
                 'triangles', 'pairings', 'tree', 'incenters', 'inradii')

    def __init__(self, tri, shapes, cross_sections, vertices, normals,
                 triangles, pairings, tree, incenters, inradii):
        self.tri = tri
        self.shapes = shapes
        self.cross_sections = cross_sections
        self.vertices = vertices
        self.normals = normals
        self.triangles = triangles
        self.pairings = pairings
        self.tree = tree
        self.incenters = incenters
        self.inradii = inradii

    def is_tree_face(self, t, f):
        return (t, f) in self.tree

    def serialize(self):
        return {
            'num_tetrahedra': self.tri.n,
            'spanning_tree': sorted(self.tree),
            'vertices': [[v.serialize() for v in row]
                         for row in self.vertices],
            'normals': [[n.serialize() for n in row]
                        for row in self.normals],
            'pairings': [[g.serialize() for g in row]
                         for row in self.pairings],
            'incenters': [p.v.serialize() for p in self.incenters],
            'inradii': [r.serialize() for r in self.inradii],
        }


def _develop_positions(tri, shapes):
    """Projective CP^1 positions of every tetrahedron vertex, developed
    breadth-first from tet 0 at (0, inf, 1, z_0); returns (positions,
    tree faces)."""
    prec = max(z.prec for z in shapes)

    def cpoint(value):
        return ComplexInterval(value, prec=prec)

    one, zero = cpoint(1), cpoint(0)
    positions = [None] * tri.n
    positions[0] = ((zero, one), (one, zero), (one, one),
                    (shapes[0], one))
    tree = set()
    queue = [0]
    while queue:
        t = queue.pop(0)
        for f in range(4):
            t2 = tri.neighbors[t][f]
            if positions[t2] is not None:
                continue
            p = tri.gluings[t][f]
            pos = [None] * 4
            for u in range(4):
                if u != f:
                    pos[p[u]] = positions[t][u]
            pos[p[f]] = _solve_fourth(pos, p[f], shapes[t2])
            positions[t2] = tuple(pos)
            tree.add((t, f))
            tree.add((t2, p[f]))
            queue.append(t2)
    return positions, tree


def develop_polyhedron(tri, shapes, cross_sections):
    """Develop a fundamental polyhedron with scaled vertices, outward
    normals, face triangles, face pairings and incenter data."""
    shapes = list(shapes)
    prec = max(z.prec for z in shapes)
    positions, tree = _develop_positions(tri, shapes)

    # Scale vertex light vectors to reproduce the cusp cross sections.
    vertices = []
    for t in range(tri.n):
        row = []
        for v in range(4):
            raw = [_light_vector(positions[t][u]) for u in range(4)]
            f_star = min(u for u in range(4) if u != v)
            u1, u2 = (u for u in range(4) if u not in (v, f_star))
            e_raw = horospherical_length(Horoball(raw[v]), raw[u1], raw[u2])
            target = cross_sections[tri.cusp_of_vertex[t][v]] \
                .edge_length(t, v, f_star)
            row.append(raw[v].scale(e_raw / target))
        vertices.append(row)

    # Outward normals and face triangles.
    normals, triangles = [], []
    for t in range(tri.n):
        nrow, trow = [], []
        for f in range(4):
            tri_verts = [vertices[t][u] for u in range(4) if u != f]
            face = IdealTriangle(*tri_verts)
            n = face.plane.n
            s = n.dot(vertices[t][f])
            if s.is_positive():
                n = -n
            elif not s.is_negative():
                raise PrecisionError('face normal side test is undecided')
            nrow.append(n)
            trow.append(face)
        normals.append(nrow)
        triangles.append(trow)

    # Face pairings: identity on the tree, Moebius-derived elsewhere.
    pairings = [[None] * 4 for _ in range(tri.n)]
    identity = minkowski_identity(prec)
    for t in range(tri.n):
        for f in range(4):
            if pairings[t][f] is not None:
                continue
            p = tri.gluings[t][f]
            t2, f2 = tri.neighbors[t][f], p[f]
            if (t, f) in tree:
                g = identity
                g_back = identity
            else:
                src = [positions[t][u] for u in range(4) if u != f]
                dst = [positions[t2][p[u]] for u in range(4) if u != f]
                m = _mobius_three_points(src, dst)
                g = _so13_from_mobius(m, prec)
                g_back = g.so13_inverse()
            pairings[t][f] = g
            pairings[t2][f2] = g_back
            for v in range(4):
                if v != f and not g.apply(vertices[t][v]).overlaps(
                        vertices[t2][p[v]]):
                    raise PrecisionError(
                        'face pairing does not reproduce the scaled '
                        'vertex (lambda = 1 check)')

    # Incenters and inradii.
    incenters, inradii = [], []
    minus_one = Interval.exact(-1, prec)
    for t in range(tri.n):
        rows = [[normals[t][f][j] * J_SIGNS[j] for j in range(4)]
                for f in range(4)]
        x = solve_linear(rows, [minus_one] * 4)
        center = HPoint(MVector(x), normalize=True)
        r = None
        for f in range(4):
            rf = (-center.v.dot(normals[t][f])).asinh()
            r = rf if r is None else r.intersect(rf)
        if r is None or r.is_empty or not r.is_positive():
            raise PrecisionError('inradius enclosures are inconsistent')
        incenters.append(center)
        inradii.append(r)

    return DevelopedPolyhedron(tri, shapes, list(cross_sections), vertices,
                               normals, triangles, pairings, frozenset(tree),
                               incenters, inradii)


def incenter_inradius(polyhedron, t):
    return polyhedron.incenters[t], polyhedron.inradii[t]
