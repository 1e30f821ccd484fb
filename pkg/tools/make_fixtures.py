#!/usr/bin/env python3
"""Author test-fixture manifold files.

This tool builds manifold files from raw gluing data: it computes peripheral
curves (meridian/longitude corner weights) combinatorially, polishes shapes
with a Newton iteration on the logarithmic gluing and completeness
equations, and serializes everything through the library's file format.

Run as a script to (re)generate the fixtures under tests/fixtures/.
"""

import cmath
import math
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from cusptile.triangulation import (   # noqa: E402
    Triangulation, ManifoldData, serialize_manifold_file,
    EDGE_PARAMETER, VERTEX_CYCLES, _cycle_succ, _cycle_pred,
)

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), '..',
                           'tests', 'fixtures')

INF = None  # projective infinity marker


# -- cross-ratio developing ---------------------------------------------------
#
# Points of CP^1 are complex numbers or INF.  The cross ratio convention is
# cr(a, b, c, d) = (c - b)(d - a) / ((c - a)(d - b)), so a tetrahedron with
# vertices (0, oo, 1, w) has cr = w; the shape parameter of edge {i, j} is
# cr applied to an even relabeling starting with i, j.

def _proj(p):
    return (1.0, 0.0) if p is INF else (complex(p), 1.0)


def _det(p, q):
    (pn, pd), (qn, qd) = _proj(p), _proj(q)
    return pn * qd - qn * pd


def cross_ratio(a, b, c, d):
    return (_det(c, b) * _det(d, a)) / (_det(c, a) * _det(d, b))


def fourth_vertex(points, missing, z):
    """Solve cr(p0, p1, p2, p3) = z for the missing point.

    points is a length-4 list with three entries set and points[missing]
    arbitrary.  Each determinant factor is linear in the missing point's
    affine coordinate X: det(x, q) = qd*X - qn, det(q, x) = qn - qd*X.
    """
    slots = list(points)

    def factor(i, j, X_coeffs):
        # Returns (alpha, beta) with det(slots[i], slots[j]) = alpha*X + beta
        if i == missing:
            qn, qd = _proj(slots[j])
            return (qd, -qn)
        if j == missing:
            qn, qd = _proj(slots[i])
            return (-qd, qn)
        return (0.0, _det(slots[i], slots[j]))

    num1 = factor(2, 1, None)
    num2 = factor(3, 0, None)
    den1 = factor(2, 0, None)
    den2 = factor(3, 1, None)

    # cr = (num1*num2)/(den1*den2) = z  ->  num1*num2 - z*den1*den2 = 0.
    # Exactly two of the four factors involve X (one in numerator, one in
    # denominator), so the equation is linear in X.
    def mul(f, g):
        a1, b1 = f
        a2, b2 = g
        assert a1 == 0 or a2 == 0
        return (a1 * b2 + a2 * b1, b1 * b2)

    lhs = mul(num1, num2)
    rhs = mul(den1, den2)
    a = lhs[0] - z * rhs[0]
    b = lhs[1] - z * rhs[1]
    if a == 0:
        raise ZeroDivisionError('degenerate cross-ratio solve')
    return -b / a


def place_tetrahedron(positions, z):
    """Fill in the single missing vertex position (marked by the string
    'missing') of a tetrahedron with shape z."""
    missing = positions.index('missing')
    pts = [p if p != 'missing' else 0.0 for p in positions]
    pts[missing] = fourth_vertex(pts, missing, z)
    return pts


# -- cusp development ---------------------------------------------------------


class CuspDevelopment:
    """Development of one cusp cross section.

    For each cusp triangle (t, v) we store positions of all four vertices
    of a developed copy of tetrahedron t with vertex v at infinity.  The
    BFS spanning tree of the side-gluing graph defines the development;
    non-tree sides give strip cycles with corner weights and (approximate)
    holonomy translations.
    """

    def __init__(self, tri, shapes, cusp):
        self.tri = tri
        self.shapes = shapes
        self.cusp = cusp
        self.triangles = tri.cusp_triangles(cusp)
        self.positions = {}
        self.parent = {}
        self.tree_sides = set()
        self._develop()
        self.sides = self._collect_sides()
        self.nontree = [s for s in self.sides if s not in self._tree_reps]

    def _develop(self):
        tri = self.tri
        t0, v0 = self.triangles[0]
        others = [u for u in range(4) if u != v0]
        pos = ['missing'] * 4
        pos[v0] = INF
        pos[others[0]] = 0.0
        pos[others[1]] = 1.0
        self.positions[(t0, v0)] = place_tetrahedron(pos, self.shapes[t0])
        self.parent[(t0, v0)] = None
        queue = [(t0, v0)]
        self._tree_reps = set()
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
                self._tree_reps.add(self._canonical_side(t, v, f))
                self.tree_sides.add((t, v, f))
                self.tree_sides.add((t2, v2, p[f]))
                queue.append((t2, v2))
        assert len(self.positions) == len(self.triangles)

    def _across(self, t, v, f):
        """Positions of the neighboring tetrahedron developed across face
        f of the copy of t stored for triangle (t, v)."""
        tri = self.tri
        t2 = tri.neighbors[t][f]
        p = tri.gluings[t][f]
        pos = ['missing'] * 4
        src = self.positions[(t, v)]
        for u in range(4):
            if u != f:
                pos[p[u]] = src[u]
        return place_tetrahedron(pos, self.shapes[t2])

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

    # -- strip cycles ------------------------------------------------------

    def strip_cycle(self, side):
        """Corner weights and holonomy translation for the cycle through
        the given non-tree side (root -> tree -> side -> tree -> root)."""
        t, v, f = side
        tri = self.tri
        t2 = tri.neighbors[t][f]
        p = tri.gluings[t][f]
        v2, f2 = p[v], p[f]

        # Holonomy: develop across the side and compare with the stored
        # copy of the target triangle.
        cand = self._across(t, v, f)
        stored = self.positions[(t2, v2)]
        diffs = [stored[u] - cand[u] for u in range(4)
                 if u != v2 and stored[u] is not INF and cand[u] is not INF]
        translation = diffs[0]

        # Triangle sequence of the closed curve.
        path_a = self._path_to_root(t, v)        # [(tri, side_to_parent)..]
        path_b = self._path_to_root(t2, v2)
        # Walk root -> (t,v): reverse of path_a; each step enters child.
        visits = []                               # (triangle, entry, exit)
        seq = []
        for (node, f_up) in reversed(path_a):
            (pt, pv), pf = self.parent[node]
            seq.append(((pt, pv), pf, node, f_up))
        seq.append(((t, v), f, (t2, v2), f2))
        for (node, f_up) in path_b:
            (pt, pv), pf = self.parent[node]
            seq.append((node, f_up, (pt, pv), pf))

        weights = {}
        k = len(seq)
        for i in range(k):
            node = seq[i][2]
            entry = seq[i][3]
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
        elif entry == _cycle_pred(v, u) and exit_ == _cycle_succ(v, u):
            sign = -1
        else:
            raise AssertionError('sides do not flank the corner')
        weights[(t, v, u)] = weights.get((t, v, u), 0) + sign

    # -- lattice coordinates -------------------------------------------------

    def side_flow(self, weights, side):
        """Net flow of a corner-weight system through a side, measured in
        the side's canonical orientation."""
        t, v, f = side
        return (weights.get((t, v, _cycle_succ(v, f)), 0)
                - weights.get((t, v, _cycle_pred(v, f)), 0))

    def flow_coordinates(self, weights):
        """Coefficients of the strip-cycle decomposition of a closed
        corner-weight system (one integer per non-tree side)."""
        coords = []
        for side in self.nontree:
            flow = self.side_flow(weights, side)
            strip_w, _ = self._strip_cache(side)
            own = self.side_flow(strip_w, side)
            assert own in (1, -1)
            coords.append(flow * own)
        return coords

    def _strip_cache(self, side):
        if not hasattr(self, '_strips'):
            self._strips = {}
        if side not in self._strips:
            self._strips[side] = self.strip_cycle(side)
        return self._strips[side]

    def boundary_flow_columns(self):
        """Flow coordinates of the corner-class boundary cycles of this
        cusp (loops around cusp-triangulation vertices)."""
        cols = []
        triangle_set = set(self.triangles)
        for cls in self.tri.corner_classes():
            if (cls[0][0], cls[0][1]) not in triangle_set:
                continue
            weights = {corner: 1 for corner in cls}
            cols.append(self.flow_coordinates(weights))
        return cols


# -- peripheral basis ---------------------------------------------------------


def _is_unimodular_with(dev, flow_mu, flow_lam):
    """True if the boundary flows together with the two candidate cycles
    generate the full strip-coefficient lattice (i.e. the candidates form
    a basis of the cusp homology)."""
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form
    cols = dev.boundary_flow_columns() + [flow_mu, flow_lam]
    m = Matrix(cols).T
    snf = smith_normal_form(m)
    diag = [snf[i, i] for i in range(min(snf.shape))]
    nonzero = [abs(d) for d in diag if d != 0]
    return len(nonzero) == len(dev.nontree) and all(d == 1 for d in nonzero)


def shape_parameters(z):
    return (z, 1 / (1 - z), 1 - 1 / z)


def row_residual(weights, shapes):
    """Sum of weight * log(parameter) over corners (principal logs)."""
    total = 0j
    for (t, v, u), w in weights.items():
        param = shape_parameters(shapes[t])[EDGE_PARAMETER[frozenset((v, u))]]
        total += w * cmath.log(param)
    return total


def fix_branch(tri, weights, shapes, cusp):
    """Adjust a peripheral cycle by null-homotopic loops so its
    log-holonomy row evaluates to ~0 (rather than a multiple of pi*i).

    A small loop inside one cusp triangle (all three corners +1) shifts
    the row by exactly pi*i when all shapes have positive imaginary part.
    """
    weights = dict(weights)
    r = row_residual(weights, shapes)
    j = int(round(r.imag / math.pi))
    assert abs(r - complex(0, j * math.pi)) < 1e-6, (r, j)
    triangles = tri.cusp_triangles(cusp)
    assert abs(j) <= len(triangles), 'branch fix needs more triangles'
    for i in range(abs(j)):
        t, v = triangles[i]
        for u in range(4):
            if u != v:
                key = (t, v, u)
                weights[key] = weights.get(key, 0) + (-1 if j > 0 else 1)
    r = row_residual(weights, shapes)
    assert abs(r) < 1e-6, r
    return weights


def peripheral_basis(tri, shapes, cusp):
    """Meridian/longitude corner weights for one cusp.

    Candidates are strip cycles (and sums of two); a pair is accepted if
    it generates the cusp homology (Smith normal form test) and its
    holonomy translations are R-linearly independent.  The basis is
    oriented so im(longitude/meridian) > 0, then branch-fixed so both
    completeness rows evaluate to 0 at the approximate shapes.
    """
    dev = CuspDevelopment(tri, shapes, cusp)
    strips = [dev._strip_cache(s) for s in dev.nontree]
    candidates = [w for (w, _) in strips]
    for i in range(len(strips)):
        for j in range(len(strips)):
            if i != j:
                merged = dict(strips[i][0])
                for key, val in strips[j][0].items():
                    merged[key] = merged.get(key, 0) + val
                candidates.append(merged)

    def translation(w):
        coords = dev.flow_coordinates(w)
        return sum(c * strips[k][1] for k, c in enumerate(coords))

    for a in range(len(candidates)):
        for b in range(a + 1, len(candidates)):
            mu, lam = candidates[a], candidates[b]
            t_mu, t_lam = translation(mu), translation(lam)
            if abs(t_mu) < 1e-9 or abs(t_lam) < 1e-9:
                continue
            cross = (t_mu.conjugate() * t_lam).imag
            if abs(cross) < 1e-9 * abs(t_mu) * abs(t_lam):
                continue
            if not _is_unimodular_with(dev, dev.flow_coordinates(mu),
                                       dev.flow_coordinates(lam)):
                continue
            if cross < 0:
                mu, lam = lam, mu
            mu = fix_branch(tri, mu, shapes, cusp)
            lam = fix_branch(tri, lam, shapes, cusp)
            return _weights_to_table(tri, mu), _weights_to_table(tri, lam)
    raise RuntimeError('no unimodular peripheral basis found for cusp %d'
                       % cusp)


def _weights_to_table(tri, weights):
    table = [[[0] * 4 for _ in range(4)] for _ in range(tri.n)]
    for (t, v, u), w in weights.items():
        table[t][v][u] = w
    return table


# -- Newton polish -------------------------------------------------------------


def newton_polish(tri, shapes, iterations=60):
    """Newton iteration (complex128 least squares) on the logarithmic edge
    equations (target 2 pi i) and completeness rows (target 0)."""
    z = np.array(shapes, dtype=complex)
    edge_rows, completeness = tri.gluing_equation_exponents()
    rows = [(row, 2j * math.pi) for row in edge_rows]
    for mer, lon in completeness:
        rows.append((mer, 0.0))
        rows.append((lon, 0.0))

    def value_and_jacobian(z):
        f = np.zeros(len(rows), dtype=complex)
        jac = np.zeros((len(rows), tri.n), dtype=complex)
        for i, (row, rhs) in enumerate(rows):
            acc = 0j
            for t, (a, b, c) in enumerate(row):
                zt = z[t]
                acc += (a * cmath.log(zt) - b * cmath.log(1 - zt)
                        + c * cmath.log(1 - 1 / zt))
                jac[i, t] = (a / zt + b / (1 - zt)
                             + c / (zt * (zt - 1)))
            f[i] = acc - rhs
        return f, jac

    for _ in range(iterations):
        f, jac = value_and_jacobian(z)
        if np.max(np.abs(f)) < 1e-14:
            break
        step, *_ = np.linalg.lstsq(jac, -f, rcond=None)
        z = z + step
    f, _ = value_and_jacobian(z)
    assert np.max(np.abs(f)) < 1e-11, 'Newton did not converge: %r' % f
    assert np.all(z.imag > 0), 'non-geometric solution'
    return list(z)


def bloch_wigner(z):
    import mpmath
    zz = mpmath.mpc(z)
    return float(mpmath.im(mpmath.polylog(2, zz))
                 + mpmath.arg(1 - zz) * mpmath.log(abs(zz)))


def volume(shapes):
    return sum(bloch_wigner(z) for z in shapes)


# -- fixture assembly ----------------------------------------------------------


def build_manifold(neighbors, gluings, cusp_of_vertex, initial_shapes,
                   precision_bits=212):
    """Full pipeline: peripheral curves, shape polish, ManifoldData."""
    # Bootstrap triangulation with zero peripheral curves to compute the
    # combinatorics (validation of curves is deferred to the real object).
    n = len(neighbors)
    num_cusps = max(c for row in cusp_of_vertex for c in row) + 1
    zero = [[[0] * 4 for _ in range(4)] for _ in range(n)]
    boot = Triangulation(neighbors, gluings, cusp_of_vertex,
                         [(zero, zero)] * num_cusps)

    # First polish with edge equations only (completeness rows are zero in
    # the bootstrap object, adding vacuous equations).
    shapes = newton_polish(boot, initial_shapes)

    peripheral = [peripheral_basis(boot, shapes, c) for c in range(num_cusps)]
    tri = Triangulation(neighbors, gluings, cusp_of_vertex, peripheral)

    shapes = newton_polish(tri, shapes)
    shape_strings = [('%.20g' % z.real, '%.20g' % z.imag) for z in shapes]
    return ManifoldData(tri, shape_strings, precision_bits)


def write_fixture(name, text):
    os.makedirs(FIXTURE_DIR, exist_ok=True)
    path = os.path.join(FIXTURE_DIR, name)
    with open(path, 'w') as fh:
        fh.write(text)
    print('wrote', path)


# -- figure-eight knot complement ----------------------------------------------

FIG8_NEIGHBORS = [(1, 1, 1, 1), (0, 0, 0, 0)]
FIG8_GLUINGS = [
    [(0, 1, 3, 2), (1, 2, 3, 0), (2, 3, 1, 0), (2, 1, 0, 3)],
    [(0, 1, 3, 2), (3, 2, 0, 1), (3, 0, 1, 2), (2, 1, 0, 3)],
]
FIG8_CUSPS = [(0, 0, 0, 0), (0, 0, 0, 0)]


def make_fig8():
    z0 = complex(0.5, math.sqrt(3) / 2)
    data = build_manifold(FIG8_NEIGHBORS, FIG8_GLUINGS, FIG8_CUSPS, [z0, z0])
    vol = volume(data.shapes)
    print('figure-eight volume:', vol)
    assert abs(vol - 2.029883212819307) < 1e-9
    write_fixture('fig8.tri', serialize_manifold_file(data))

    # Corrupted variant: break the involution (neighbor points back to the
    # wrong tetrahedron-face).
    text = serialize_manifold_file(data)
    lines = text.splitlines()
    i = lines.index('neighbors')
    lines[i + 2] = '0 0 1 0'
    write_fixture('fig8_bad_involution.tri', '\n'.join(lines) + '\n')

    # Perturbed shapes: valid combinatorics, non-geometric shapes.
    perturbed = ManifoldData(
        data.triangulation,
        [('%.20g' % (float(re) + 0.1), im)
         for re, im in data.shape_strings],
        data.precision_bits)
    write_fixture('fig8_perturbed.tri', serialize_manifold_file(perturbed))


# -- one-tetrahedron search ------------------------------------------------------


def odd_permutations():
    import itertools
    return [p for p in itertools.permutations(range(4))
            if sum(1 for i in range(4) for j in range(i + 1, 4)
                   if p[i] > p[j]) % 2 == 1]


def search_one_tet():
    """Search for a single self-glued tetrahedron with all-odd gluings and
    torus vertex links; returns the first found or None."""
    import itertools
    odd = odd_permutations()
    for assignment in itertools.product(range(len(odd)), repeat=4):
        gl = [odd[i] for i in assignment]
        ok = True
        for f in range(4):
            f2 = gl[f][f]
            inv = [0] * 4
            for i, v in enumerate(gl[f]):
                inv[v] = i
            if gl[f2] != tuple(inv):
                ok = False
                break
        if not ok:
            continue
        # Vertex classes by hand (cusp labels must be a bijection onto the
        # classes before the Triangulation constructor will accept them).
        label = list(range(4))

        def find(x):
            while label[x] != x:
                x = label[x]
            return x

        for f in range(4):
            for v in range(4):
                if v != f:
                    a, b = find(v), find(gl[f][v])
                    if a != b:
                        label[a] = b
        roots = sorted({find(v) for v in range(4)})
        cusps = [roots.index(find(v)) for v in range(4)]
        zero = [[[0] * 4 for _ in range(4)]]
        try:
            Triangulation([(0, 0, 0, 0)], [gl], [cusps],
                          [(zero, zero)] * len(roots))
        except Exception:
            continue
        return gl, cusps
    return None


def main():
    make_fig8()
    found = search_one_tet()
    if found is None:
        print('no one-tetrahedron fixture exists (search exhausted)')
    else:
        print('one-tet gluings:', found)


if __name__ == '__main__':
    main()
