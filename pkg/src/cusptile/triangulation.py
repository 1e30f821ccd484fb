"""Combinatorial ideal triangulations of cusped 3-manifolds.

A triangulation is a collection of n tetrahedra with faces glued in pairs
by odd permutations of {0, 1, 2, 3} (the orientability convention), a cusp
index for each ideal vertex, and two peripheral curves (meridian and
longitude) per cusp.

Peripheral curves are stored as signed corner weights on cusp triangles.
The cusp triangle at vertex v of tetrahedron t has one corner for each
tetrahedron edge {v, u} with u != v and one side for each face f != v.
A weight of +1 at corner (t, v, u) is a passage of the curve cutting that
corner counterclockwise (with respect to the orientation the tetrahedron
induces on the cusp triangle).

The text file format housing all of this is parsed and serialized by
``parse_manifold_file`` / ``serialize_manifold_file``; see the grammar in
the docstring of ``parse_manifold_file``.
"""

import itertools


class TriangulationError(ValueError):
    """Raised when triangulation data is malformed or inconsistent."""


# Shape-parameter index for each tetrahedron edge.  Opposite edges carry
# the same parameter.  Index 0 is z, index 1 is 1/(1-z), index 2 is 1-1/z,
# matching the cross ratio cr(a,b,c,d) = (c-b)(d-a) / ((c-a)(d-b)) applied
# to even relabelings of a tetrahedron with cr(v0,v1,v2,v3) = z.
EDGE_PARAMETER = {
    frozenset((0, 1)): 0, frozenset((2, 3)): 0,
    frozenset((0, 3)): 1, frozenset((1, 2)): 1,
    frozenset((0, 2)): 2, frozenset((1, 3)): 2,
}

# Counterclockwise cyclic order of the other three vertices as seen from
# vertex v of a positively oriented tetrahedron: (v, *order) is even.
VERTEX_CYCLES = {
    0: (1, 2, 3),
    1: (0, 3, 2),
    2: (0, 1, 3),
    3: (0, 2, 1),
}


def _cycle_succ(v, u):
    cyc = VERTEX_CYCLES[v]
    return cyc[(cyc.index(u) + 1) % 3]


def _cycle_pred(v, u):
    cyc = VERTEX_CYCLES[v]
    return cyc[(cyc.index(u) - 1) % 3]


def _perm_sign(p):
    sign = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def _invert_perm(p):
    inv = [0] * 4
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[rx] = ry

    def classes(self):
        groups = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return [sorted(g) for g in groups.values()]


class Triangulation:
    """Immutable glued collection of ideal tetrahedra.

    Fields:
      n               -- number of tetrahedra
      neighbors       -- neighbors[t][f] is the tetrahedron across face f
      gluings         -- gluings[t][f] is the odd gluing permutation
      cusp_of_vertex  -- cusp_of_vertex[t][v] is the cusp index of vertex v
      num_cusps       -- number of cusps
      peripheral      -- peripheral[c] = (meridian, longitude); each curve
                         is a weight table curve[t][v][u] of signed corner
                         weights (diagonal entries u == v are unused zeros)
    """

    def __init__(self, neighbors, gluings, cusp_of_vertex, peripheral):
        self.n = len(neighbors)
        self.neighbors = tuple(tuple(row) for row in neighbors)
        self.gluings = tuple(tuple(tuple(p) for p in row) for row in gluings)
        self.cusp_of_vertex = tuple(tuple(row) for row in cusp_of_vertex)
        cusps = {c for row in self.cusp_of_vertex for c in row}
        self.num_cusps = max(cusps) + 1 if cusps else 0
        self.peripheral = tuple(
            tuple(tuple(tuple(tuple(r) for r in w) for w in curve)
                  for curve in pair)
            for pair in peripheral)
        self.validate()

    # -- validation ---------------------------------------------------------

    def validate(self):
        n = self.n
        if n == 0:
            raise TriangulationError('triangulation has no tetrahedra')
        if (len(self.gluings) != n or len(self.cusp_of_vertex) != n
                or any(len(r) != 4 for r in self.neighbors)
                or any(len(r) != 4 for r in self.gluings)
                or any(len(r) != 4 for r in self.cusp_of_vertex)):
            raise TriangulationError('tables must have n rows of 4 entries')
        for t in range(n):
            for f in range(4):
                t2 = self.neighbors[t][f]
                if t2 < 0:
                    raise TriangulationError(
                        'face %d of tetrahedron %d is unglued' % (f, t))
                if t2 >= n:
                    raise TriangulationError('neighbor index out of range')
                p = self.gluings[t][f]
                if sorted(p) != [0, 1, 2, 3]:
                    raise TriangulationError(
                        'gluing is not a permutation: %r' % (p,))
                if _perm_sign(p) != -1:
                    raise TriangulationError(
                        'gluing permutation %r is even '
                        '(orientation-reversing face pairing required)'
                        % (p,))
                f2 = p[f]
                if t2 == t and f2 == f:
                    raise TriangulationError(
                        'face %d of tetrahedron %d is glued to itself'
                        % (f, t))
                if (self.neighbors[t2][f2] != t
                        or self.gluings[t2][f2] != _invert_perm(p)):
                    raise TriangulationError(
                        'gluing involution violated at tetrahedron %d '
                        'face %d' % (t, f))
        self._validate_cusps()
        self._validate_links()
        self._validate_peripheral()

    def _validate_cusps(self):
        class_cusps = []
        for cls in self.vertex_classes():
            cusps = {self.cusp_of_vertex[t][v] for t, v in cls}
            if len(cusps) != 1:
                raise TriangulationError(
                    'cusp index not constant on vertex class %r' % (cls,))
            class_cusps.append(cusps.pop())
        if sorted(class_cusps) != list(range(self.num_cusps)):
            raise TriangulationError(
                'cusp indices must label the vertex classes bijectively')

    def _validate_links(self):
        for cls, chi in zip(self.vertex_classes(),
                            self.vertex_link_euler_characteristics()):
            if chi != 0:
                raise TriangulationError(
                    'vertex link of class %r is not a torus '
                    '(Euler characteristic %d)' % (cls[0], chi))

    def _validate_peripheral(self):
        if len(self.peripheral) != self.num_cusps:
            raise TriangulationError(
                'need two peripheral curves per cusp')
        for c, pair in enumerate(self.peripheral):
            if len(pair) != 2:
                raise TriangulationError(
                    'cusp %d needs exactly meridian and longitude' % c)
            for curve in pair:
                self._validate_curve(c, curve)

    def _validate_curve(self, cusp, curve):
        if len(curve) != self.n or any(
                len(w) != 4 or any(len(r) != 4 for r in w) for w in curve):
            raise TriangulationError('corner weight table must be n x 4 x 4')
        for t in range(self.n):
            for v in range(4):
                row = curve[t][v]
                if row[v] != 0:
                    raise TriangulationError('diagonal corner weight set')
                if (any(row) and
                        self.cusp_of_vertex[t][v] != cusp):
                    raise TriangulationError(
                        'peripheral weights of cusp %d placed on a '
                        'triangle of another cusp' % cusp)
        # Closedness: the net flow across each side of each cusp triangle
        # must cancel against the glued side.
        for t in range(self.n):
            for v in range(4):
                for f in range(4):
                    if f == v:
                        continue
                    t2 = self.neighbors[t][f]
                    p = self.gluings[t][f]
                    v2, f2 = p[v], p[f]
                    if (self._outflow(curve, t, v, f)
                            + self._outflow(curve, t2, v2, f2)) != 0:
                        raise TriangulationError(
                            'peripheral weights do not form a closed curve '
                            'at tetrahedron %d vertex %d face %d'
                            % (t, v, f))

    @staticmethod
    def _outflow(curve, t, v, f):
        """Net number of (counterclockwise-positive) passages leaving the
        cusp triangle at (t, v) through side f."""
        return (curve[t][v][_cycle_succ(v, f)]
                - curve[t][v][_cycle_pred(v, f)])

    # -- classes ------------------------------------------------------------

    def vertex_classes(self):
        """Partition of (t, v) pairs into ideal vertices of the manifold,
        ordered by smallest representative."""
        uf = _UnionFind([(t, v) for t in range(self.n) for v in range(4)])
        for t in range(self.n):
            for f in range(4):
                p = self.gluings[t][f]
                t2 = self.neighbors[t][f]
                for v in range(4):
                    if v != f:
                        uf.union((t, v), (t2, p[v]))
        return sorted(uf.classes())

    def edge_classes(self):
        """Partition of tetrahedron edges (t, (v, u)) with v < u into edges
        of the manifold, ordered by smallest representative."""
        edges = [(t, (v, u)) for t in range(self.n)
                 for v in range(4) for u in range(v + 1, 4)]
        uf = _UnionFind(edges)
        for t in range(self.n):
            for f in range(4):
                p = self.gluings[t][f]
                t2 = self.neighbors[t][f]
                for t_edge in itertools.combinations(
                        [v for v in range(4) if v != f], 2):
                    image = tuple(sorted(p[v] for v in t_edge))
                    uf.union((t, t_edge), (t2, image))
        return sorted(uf.classes())

    def corner_classes(self):
        """Partition of cusp-triangle corners (t, v, u) into vertices of
        the cusp triangulations."""
        corners = [(t, v, u) for t in range(self.n)
                   for v in range(4) for u in range(4) if u != v]
        uf = _UnionFind(corners)
        for t, v, u in corners:
            for f in range(4):
                if f in (v, u):
                    continue
                p = self.gluings[t][f]
                uf.union((t, v, u), (self.neighbors[t][f], p[v], p[u]))
        return sorted(uf.classes())

    def vertex_link_euler_characteristics(self):
        """Euler characteristic of each vertex link, ordered like
        vertex_classes()."""
        vertex_of = {}
        for i, cls in enumerate(self.vertex_classes()):
            for t, v in cls:
                vertex_of[(t, v)] = i
        chi = [0] * len(self.vertex_classes())
        for cls in self.corner_classes():
            t, v, u = cls[0]
            chi[vertex_of[(t, v)]] += 1          # link vertices
        for t in range(self.n):
            for v in range(4):
                chi[vertex_of[(t, v)]] += 1       # link faces (triangles)
        for i, cls in enumerate(self.vertex_classes()):
            # each triangle has 3 sides, glued in pairs
            chi[i] -= 3 * len(cls) // 2           # link edges
        return chi

    # -- gluing equations ----------------------------------------------------

    def gluing_equation_exponents(self):
        """Exponent rows of the gluing and completeness equations.

        Returns (edge_rows, completeness_rows).  Each row is a list of n
        triples (a_t, b_t, c_t) meaning the equation
        prod z_t^a_t (1/(1-z_t))^b_t (1-1/z_t)^c_t = 1, with angle sum
        2 pi for edge rows and 0 for completeness rows.  edge_rows are
        ordered like edge_classes(); completeness_rows[c] is the pair
        (meridian row, longitude row) for cusp c.
        """
        edge_rows = []
        for cls in self.edge_classes():
            row = [[0, 0, 0] for _ in range(self.n)]
            for t, (v, u) in cls:
                row[t][EDGE_PARAMETER[frozenset((v, u))]] += 1
            edge_rows.append([tuple(r) for r in row])
        completeness_rows = [
            (self.peripheral_row(c, 0), self.peripheral_row(c, 1))
            for c in range(self.num_cusps)]
        return edge_rows, completeness_rows

    def peripheral_row(self, cusp, curve_index):
        """Exponent row of the holonomy of a peripheral curve: each corner
        passage contributes its weight to the shape parameter of the
        tetrahedron edge the corner sits on."""
        curve = self.peripheral[cusp][curve_index]
        row = [[0, 0, 0] for _ in range(self.n)]
        for t in range(self.n):
            for v in range(4):
                for u in range(4):
                    if u == v:
                        continue
                    w = curve[t][v][u]
                    if w:
                        row[t][EDGE_PARAMETER[frozenset((v, u))]] += w
        return [tuple(r) for r in row]

    def corner_cycle_row(self, corner):
        """Exponent row of the boundary cycle around the cusp-triangulation
        vertex containing the given corner (all passages +1).  Equals the
        edge-equation row of the underlying edge class."""
        for cls in self.corner_classes():
            if corner in cls:
                row = [[0, 0, 0] for _ in range(self.n)]
                for t, v, u in cls:
                    row[t][EDGE_PARAMETER[frozenset((v, u))]] += 1
                return [tuple(r) for r in row]
        raise TriangulationError('no such corner: %r' % (corner,))

    # -- misc ----------------------------------------------------------------

    def cusp_triangles(self, cusp):
        """All (t, v) with vertex v of tetrahedron t on the given cusp."""
        return [(t, v) for t in range(self.n) for v in range(4)
                if self.cusp_of_vertex[t][v] == cusp]

    def __eq__(self, other):
        return (isinstance(other, Triangulation)
                and self.neighbors == other.neighbors
                and self.gluings == other.gluings
                and self.cusp_of_vertex == other.cusp_of_vertex
                and self.peripheral == other.peripheral)

    def __repr__(self):
        return ('Triangulation(n=%d, num_cusps=%d)'
                % (self.n, self.num_cusps))


class ManifoldData:
    """Parsed manifold file: triangulation plus approximate shapes.

    shape_strings holds the decimal strings exactly as given in the file
    (so serialization round-trips); shapes holds float approximations.
    """

    def __init__(self, triangulation, shape_strings, precision_bits):
        self.triangulation = triangulation
        self.shape_strings = tuple(
            (str(re), str(im)) for re, im in shape_strings)
        self.precision_bits = precision_bits
        if len(self.shape_strings) != triangulation.n:
            raise TriangulationError('need one shape per tetrahedron')
        if precision_bits < 2:
            raise TriangulationError('precision_bits must be at least 2')
        self.shapes = [complex(float(re), float(im))
                       for re, im in self.shape_strings]

    def __eq__(self, other):
        return (isinstance(other, ManifoldData)
                and self.triangulation == other.triangulation
                and self.shape_strings == other.shape_strings
                and self.precision_bits == other.precision_bits)


class _TokenReader:
    def __init__(self, text):
        lines = []
        for line in text.splitlines():
            lines.append(line.split('#', 1)[0])
        self.tokens = ' '.join(lines).split()
        self.pos = 0

    def next(self):
        if self.pos >= len(self.tokens):
            raise TriangulationError('unexpected end of manifold file')
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, keyword):
        tok = self.next()
        if tok != keyword:
            raise TriangulationError(
                "expected '%s' in manifold file, found '%s'"
                % (keyword, tok))

    def integer(self):
        tok = self.next()
        try:
            return int(tok)
        except ValueError:
            raise TriangulationError(
                "expected integer in manifold file, found '%s'" % tok)

    def decimal(self):
        tok = self.next()
        try:
            float(tok)
        except ValueError:
            raise TriangulationError(
                "expected decimal number in manifold file, found '%s'" % tok)
        return tok

    def done(self):
        if self.pos != len(self.tokens):
            raise TriangulationError(
                "trailing content in manifold file: '%s'"
                % self.tokens[self.pos])


_CORNER_ORDER = [(v, u) for v in range(4) for u in range(4) if u != v]


def parse_manifold_file(text):
    """Parse a manifold file into a ManifoldData.

    Grammar (whitespace-separated tokens; '#' starts a comment running to
    the end of the line):

        cusptile-manifold 1
        num_tetrahedra <n>
        neighbors
          <n rows of 4 integers>                  # n_t^f
        gluings
          <n rows of 4 four-digit permutations>   # sigma_t^f, e.g. 0132
        cusps
          <n rows of 4 integers>                  # cusp index per vertex
        peripheral
          cusp <c> meridian
            <n rows of 12 integers>   # corner weights (t, v, u) ordered
                                      # (0,1)(0,2)(0,3)(1,0)...(3,2)
          cusp <c> longitude
            <n rows of 12 integers>
          ...                         # for c = 0 .. num_cusps-1
        shapes
          <n rows of 2 decimal numbers>           # re, im of z_t
        precision_bits <p>

    Round-trip through serialize_manifold_file is byte-stable modulo
    whitespace and comments.
    """
    if isinstance(text, bytes):
        text = text.decode('utf-8')
    r = _TokenReader(text)
    r.expect('cusptile-manifold')
    version = r.integer()
    if version != 1:
        raise TriangulationError('unsupported file version %d' % version)
    r.expect('num_tetrahedra')
    n = r.integer()
    if n <= 0:
        raise TriangulationError('num_tetrahedra must be positive')

    r.expect('neighbors')
    neighbors = [[r.integer() for _ in range(4)] for _ in range(n)]

    r.expect('gluings')
    gluings = []
    for _ in range(n):
        row = []
        for _ in range(4):
            tok = r.next()
            if len(tok) != 4 or not tok.isdigit():
                raise TriangulationError(
                    "expected four-digit permutation, found '%s'" % tok)
            row.append(tuple(int(ch) for ch in tok))
        gluings.append(row)

    r.expect('cusps')
    cusp_of_vertex = [[r.integer() for _ in range(4)] for _ in range(n)]
    num_cusps = max(c for row in cusp_of_vertex for c in row) + 1

    r.expect('peripheral')
    peripheral = []
    for c in range(num_cusps):
        pair = []
        for name in ('meridian', 'longitude'):
            r.expect('cusp')
            if r.integer() != c:
                raise TriangulationError(
                    'peripheral curves must be listed for cusps in order')
            r.expect(name)
            curve = [[[0] * 4 for _ in range(4)] for _ in range(n)]
            for t in range(n):
                for v, u in _CORNER_ORDER:
                    curve[t][v][u] = r.integer()
            pair.append(curve)
        peripheral.append(tuple(pair))

    tri = Triangulation(neighbors, gluings, cusp_of_vertex, peripheral)

    r.expect('shapes')
    shape_strings = [(r.decimal(), r.decimal()) for _ in range(n)]
    r.expect('precision_bits')
    precision_bits = r.integer()
    r.done()
    return ManifoldData(tri, shape_strings, precision_bits)


def serialize_manifold_file(data):
    """Serialize a ManifoldData back to the manifold file format."""
    tri = data.triangulation
    out = ['cusptile-manifold 1', 'num_tetrahedra %d' % tri.n, 'neighbors']
    for row in tri.neighbors:
        out.append(' '.join(str(x) for x in row))
    out.append('gluings')
    for row in tri.gluings:
        out.append(' '.join(''.join(str(v) for v in p) for p in row))
    out.append('cusps')
    for row in tri.cusp_of_vertex:
        out.append(' '.join(str(x) for x in row))
    out.append('peripheral')
    for c in range(tri.num_cusps):
        for name, curve in zip(('meridian', 'longitude'), tri.peripheral[c]):
            out.append('cusp %d %s' % (c, name))
            for t in range(tri.n):
                out.append(' '.join(
                    str(curve[t][v][u]) for v, u in _CORNER_ORDER))
    out.append('shapes')
    for re, im in data.shape_strings:
        out.append('%s %s' % (re, im))
    out.append('precision_bits %d' % data.precision_bits)
    return '\n'.join(out) + '\n'
