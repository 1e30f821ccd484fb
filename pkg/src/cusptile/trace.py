"""Locating a point in the tiling of hyperbolic space by lifted tetrahedra.

Given a developed fundamental polyhedron, the heuristic walk follows, at
each step, the face whose half-space test is violated the most, moving to
the lifted neighbor across it.  It stops at a lifted tetrahedron that the
face tests cannot certify as excluding the point.  The verification step
then either certifies the single containing tile, or — when the point sits
on a shared face — certifies a straddling pair whose union provably
contains the point.

Both an object view (accumulate the motion as a matrix applied to the
tiles) and a tetrahedra view (apply the inverse motion to the geometric
object, keeping the tiles fixed) are provided.
"""

from .interval import PrecisionError

__all__ = ['TraceError', 'trace_heuristic', 'trace_verify',
           'trace_tetrahedra_view', 'DEFAULT_BUDGET']

DEFAULT_BUDGET = 10 ** 6


class TraceError(RuntimeError):
    """The heuristic walk exhausted its step budget."""


def _face_values(P, t, m, x):
    """d_f = x . (m n_f) for the four faces of the lifted tetrahedron."""
    if m is None:
        return [x.v.dot(P.normals[t][f]) for f in range(4)]
    return [x.v.dot(m.apply(P.normals[t][f])) for f in range(4)]


def _certified_outside(d, epsilon):
    if epsilon:
        return d.lo_float() > epsilon
    return d.is_positive()


def _step(P, t, f):
    """Cross face f of tetrahedron t: the neighbor tile is obtained by
    composing with the partner face pairing."""
    t2 = P.tri.neighbors[t][f]
    f2 = P.tri.gluings[t][f][f]
    return t2, f2, P.pairings[t2][f2]


def trace_heuristic(P, x, start=None, budget=DEFAULT_BUDGET, epsilon=0.0):
    """Walk the face-adjacency graph towards x; returns a lifted
    tetrahedron (m, t) that the face tests cannot exclude."""
    if start is not None:
        m, t = start
    else:
        m, t = None, 0
    f_entry = -1
    prec = P.shapes[0].prec
    from .hyperboloid import minkowski_identity
    if m is None:
        m = minkowski_identity(prec)
    for _ in range(budget):
        d = _face_values(P, t, m, x)
        if not any(_certified_outside(df, epsilon) for df in d):
            return m, t
        f = max((fp for fp in range(4) if fp != f_entry),
                key=lambda fp: (d[fp].midpoint_float(), -fp))
        t, f_entry, g = _step(P, t, f)
        m = m @ g
    raise TraceError('graph trace did not settle within %d steps' % budget)


def trace_verify(P, x, candidate):
    """Certify containment for a candidate lifted tetrahedron: the single
    tile if all four face tests pass, or the straddling pair across the
    one undecided face; otherwise raise PrecisionError."""
    m, t = candidate
    d = _face_values(P, t, m, x)
    inside = [df.is_negative() for df in d]
    if all(inside):
        return [(m, t)]
    if sum(inside) == 3:
        f = inside.index(False)
        t2, f2, g = _step(P, t, f)
        m2 = m @ g
        d2 = _face_values(P, t2, m2, x)
        if all(d2[f].is_negative() for f in range(4) if f != f2):
            return [(m, t), (m2, t2)]
    raise PrecisionError('cannot certify a containing lifted tetrahedron')


def trace_tetrahedra_view(P, obj, x, start_tet=0, budget=DEFAULT_BUDGET,
                          epsilon=0.0):
    """Heuristic walk acting on (obj, x) by inverse motions; returns the
    pair expressed in the located tetrahedron's chart plus its index."""
    t = start_tet
    f_entry = -1
    for _ in range(budget):
        d = _face_values(P, t, None, x)
        if not any(_certified_outside(df, epsilon) for df in d):
            return obj, x, t
        f = max((fp for fp in range(4) if fp != f_entry),
                key=lambda fp: (d[fp].midpoint_float(), -fp))
        # Crossing composes the tile motion with g on the right, so the
        # object picks up g^-1 on the left.
        t, f_entry, g = _step(P, t, f)
        g_inv = g.so13_inverse()
        obj = obj.transformed(g_inv)
        x = x.transformed(g_inv)
    raise TraceError('graph trace did not settle within %d steps' % budget)
