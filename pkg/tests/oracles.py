"""Independent numeric oracles for the geometry test-suites.

Everything here works in float64 numpy (plus scipy scalar minimization and
root finding) and is deliberately structured differently from the verified
closed forms: distances between extended objects are obtained by numeric
minimization over object parametrizations, horoball distances by root
finding along geodesics, horospherical lengths via the chord relation.
Oracle values carry an accuracy radius; tests assert interval overlap
against [value - tol, value + tol].
"""

import math
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar, minimize, brentq

from cusptile.interval import Interval
from cusptile.hyperboloid import (
    MVector, MMatrix, HPoint, HLine, HPlane, Horoball,
    boost_x, rotation_matrix, minkowski_identity,
)

J = np.diag([-1.0, 1.0, 1.0, 1.0])

ORACLE_TOL = 1e-7


def mdot(x, y):
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]


def normalize_point(x):
    return x / math.sqrt(-mdot(x, x))


def acosh_safe(v):
    return math.acosh(max(v, 1.0))


def d_pp(x, y):
    return acosh_safe(-mdot(x, y))


def line_point(x0, x1, t):
    return normalize_point((1 - t) * x0 + t * x1)


# -- configuration generators (interval objects + float mirrors) -----------


def pythagorean(rng):
    m = int(rng.integers(2, 40))
    n = int(rng.integers(1, m))
    h = Fraction(m * m + n * n)
    return Fraction(m * m - n * n) / h, Fraction(2 * m * n) / h


def random_isometry(rng, prec=212, length=4):
    """Interval matrix enclosing a true SO(1,3) element (exact rotations,
    interval-enclosed boosts), plus its float midpoint."""
    g = minkowski_identity(prec)
    for _ in range(length):
        c, s = pythagorean(rng)
        axis = int(rng.integers(1, 4))
        g = g @ rotation_matrix(axis, Interval(c, prec=prec),
                                Interval(s, prec=prec))
        d = Interval(float(rng.uniform(-1.2, 1.2)), prec=prec)
        g = g @ boost_x(d, prec=prec)
    gf = np.array([[g[i, j].midpoint_float() for j in range(4)]
                   for i in range(4)])
    return g, gf


def mv(floats, prec=212):
    return MVector([Interval(float(v), prec=prec) for v in floats])


def random_point(rng, prec=212):
    z = rng.normal(size=2)
    h = math.exp(rng.uniform(-1.0, 1.0))
    a = z[0] * z[0] + z[1] * z[1] + h * h
    x = np.array([(a + 1) / (2 * h), (a - 1) / (2 * h), z[0] / h, z[1] / h])
    return HPoint(mv(x, prec)), x


def random_exact_point(rng, prec=212, length=3):
    """Point whose interval enclosure provably contains a point of H^3:
    an enclosed isometry applied to the origin."""
    g, gf = random_isometry(rng, prec, length)
    origin = MVector([Interval(1, prec=prec), Interval(0, prec=prec),
                      Interval(0, prec=prec), Interval(0, prec=prec)])
    return HPoint(g.apply(origin)), gf @ np.array([1.0, 0, 0, 0])


def random_light(rng, prec=212):
    z = rng.normal(size=2)
    # Exact light-like future vector from the boundary point z (+ scale).
    s = math.exp(rng.uniform(-0.7, 0.7))
    a = z[0] * z[0] + z[1] * z[1]
    l = s * np.array([(a + 1) / 2, (a - 1) / 2, z[0], z[1]])
    return _exact_light(z[0], z[1], s, prec), l


def _exact_light(zr, zi, s, prec):
    """Light vector built so the interval version is light-like by
    construction: components are float quantities combined in interval
    arithmetic."""
    zr_i, zi_i = Interval(float(zr), prec=prec), Interval(float(zi), prec=prec)
    s_i = Interval(float(s), prec=prec)
    a = zr_i.sqr() + zi_i.sqr()
    half = Interval(Fraction(1, 2), prec=prec)
    return MVector([(a + 1) * half * s_i, (a - 1) * half * s_i,
                    zr_i * s_i, zi_i * s_i])


def random_line(rng, prec=212):
    l0, f0 = random_light(rng, prec)
    while True:
        l1, f1 = random_light(rng, prec)
        if abs(f0[2] - f1[2]) + abs(f0[3] - f1[3]) > 1e-3:
            return HLine(l0, l1), (f0, f1)


def random_plane(rng, prec=212):
    while True:
        v = rng.normal(size=4) * np.array([0.5, 1, 1, 1])
        nn = mdot(v, v)
        if nn > 0.05:
            n = v / math.sqrt(nn)
            niv = mv(v, prec).normalize_space()
            return HPlane(niv), n


def random_horoball(rng, prec=212):
    l, f = random_light(rng, prec)
    return Horoball(l), f


# -- plane parametrization ---------------------------------------------------


def plane_basis(n):
    """p0 on the plane plus two tangent directions (floats)."""
    # Find a time-like point on n^perp: project e0.
    e0 = np.array([1.0, 0, 0, 0])
    p0 = e0 - mdot(e0, n) * n  # Minkowski projection (n·n = 1)
    p0 = normalize_point(p0)
    basis = []
    for e in np.eye(4)[1:]:
        w = e - mdot(e, n) * n + mdot(e, p0) * p0
        for b in basis:
            w = w - mdot(w, b) * b
        nn = mdot(w, w)
        if nn > 1e-12:
            basis.append(w / math.sqrt(nn))
        if len(basis) == 2:
            break
    return p0, basis


def plane_point(p0, basis, u, v):
    x = p0 + u * basis[0] + v * basis[1]
    if mdot(x, x) >= -1e-12:
        return None  # simplex step left the hyperboloid sheet
    return normalize_point(x)


# -- minimization oracles ----------------------------------------------------

_T_EPS = 1e-9


def oracle_point_point(x, y):
    """Independent route: upper-half-space closed form."""
    def uhs(p):
        h = 1.0 / (p[0] - p[1])
        return np.array([p[2] * h, p[3] * h]), h
    (zx, hx), (zy, hy) = uhs(x), uhs(y)
    dz = np.dot(zx - zy, zx - zy)
    return acosh_safe(1 + (dz + (hx - hy) ** 2) / (2 * hx * hy))


def oracle_point_line(x, x0, x1):
    r = minimize_scalar(lambda t: d_pp(x, line_point(x0, x1, t)),
                        bounds=(_T_EPS, 1 - _T_EPS), method='bounded',
                        options={'xatol': 1e-10})
    return r.fun


def oracle_line_line(a0, a1, b0, b1):
    def inner(t):
        p = line_point(a0, a1, t)
        return oracle_point_line(p, b0, b1)
    r = minimize_scalar(inner, bounds=(_T_EPS, 1 - _T_EPS),
                        method='bounded', options={'xatol': 1e-8})
    return r.fun


def oracle_point_plane(x, n):
    p0, basis = plane_basis(n)
    def f(uv):
        p = plane_point(p0, basis, *uv)
        return 1e3 if p is None else d_pp(x, p)

    r = minimize(f, x0=np.zeros(2), method='Nelder-Mead',
                 options={'xatol': 1e-10, 'fatol': 1e-14, 'maxiter': 4000})
    return r.fun


def oracle_line_plane(x0, x1, n):
    p0, basis = plane_basis(n)

    def f(tuv):
        t = min(max(tuv[0], _T_EPS), 1 - _T_EPS)
        p = plane_point(p0, basis, tuv[1], tuv[2])
        return 1e3 if p is None else d_pp(line_point(x0, x1, t), p)

    best = math.inf
    for t0 in (0.25, 0.5, 0.75):
        r = minimize(f, x0=np.array([t0, 0.0, 0.0]), method='Nelder-Mead',
                     options={'xatol': 1e-9, 'fatol': 1e-13, 'maxiter': 6000})
        best = min(best, r.fun)
    return best


def oracle_plane_plane(n, np_):
    p0, b = plane_basis(n)
    q0, c = plane_basis(np_)

    def f(v):
        p = plane_point(p0, b, v[0], v[1])
        q = plane_point(q0, c, v[2], v[3])
        return 1e3 if p is None or q is None else d_pp(p, q)

    best = math.inf
    for start in (np.zeros(4), np.array([0.5, -0.5, -0.5, 0.5])):
        r = minimize(f, x0=start, method='Nelder-Mead',
                     options={'xatol': 1e-9, 'fatol': 1e-13,
                              'maxiter': 10000})
        best = min(best, r.fun)
    return best


def signed_point_ball(x, l):
    """Root-find along the geodesic from x toward the ideal point of l."""
    s = -mdot(x, l)
    w = l + mdot(x, l) * x
    u = w / s

    def g(t):
        y = x * math.cosh(t) + u * math.sinh(t)
        return mdot(y, l) + 1.0

    # g is increasing with a single root; expand the bracket outward from
    # [-1, 1] to dodge float noise at huge |t|.
    lo, hi = -1.0, 1.0
    while g(lo) > 0 and lo > -60:
        lo *= 2
    while g(hi) < 0 and hi < 60:
        hi *= 2
    return brentq(g, lo, hi, xtol=1e-13)


def oracle_point_ball(x, l):
    return signed_point_ball(x, l)


def oracle_line_ball(x0, x1, l):
    r = minimize_scalar(lambda t: signed_point_ball(line_point(x0, x1, t), l),
                        bounds=(_T_EPS, 1 - _T_EPS), method='bounded',
                        options={'xatol': 1e-10})
    return r.fun


def oracle_plane_ball(n, l):
    p0, basis = plane_basis(n)
    def f(uv):
        p = plane_point(p0, basis, *uv)
        return 1e3 if p is None else signed_point_ball(p, l)

    r = minimize(f, x0=np.zeros(2), method='Nelder-Mead',
                 options={'xatol': 1e-10, 'fatol': 1e-14, 'maxiter': 4000})
    return r.fun


def oracle_ball_ball(l, lp):
    """Signed distance measured along the connecting geodesic."""
    x = normalize_point(l / math.sqrt(-mdot(l, lp) / 2)
                        + lp / math.sqrt(-mdot(l, lp) / 2))
    t0 = signed_point_ball(x, l)
    t1 = signed_point_ball(x, lp)
    return t0 + t1


def oracle_projection_offset(x0, x1, x, xp):
    def proj_t(p):
        r = minimize_scalar(lambda t: d_pp(p, line_point(x0, x1, t)),
                            bounds=(1e-12, 1 - 1e-12), method='bounded',
                            options={'xatol': 1e-12})
        return r.x
    tx, txp = proj_t(x), proj_t(xp)
    d = d_pp(line_point(x0, x1, tx), line_point(x0, x1, txp))
    return d if txp >= tx else -d


def oracle_horospherical_length(l, x0, x1):
    """Project both endpoints to the horosphere, then use the chord
    relation: Euclidean length = 2 sinh(d_H / 2)."""
    pts = []
    for x in (x0, x1):
        xh = normalize_point(x) if mdot(x, x) < -1e-12 else None
        if xh is None:
            # Light-like input: slide along the geodesic from the boundary
            # point toward l: the projection is the point where the line
            # from x's ray meets the horosphere.  Parametrize the line
            # joining the two ideal points x and l.
            def g(t):
                y = line_point(x, l, t)
                return mdot(y, l) + 1.0
            t = brentq(g, 1e-12, 1 - 1e-12, xtol=1e-14)
            pts.append(line_point(x, l, t))
        else:
            t = signed_point_ball(xh, l)
            w = l + mdot(xh, l) * xh
            u = w / (-mdot(xh, l))
            pts.append(xh * math.cosh(t) + u * math.sinh(t))
    dH = d_pp(pts[0], pts[1])
    return 2 * math.sinh(dH / 2)


def oracle_triangle_point(x, v0, v1, v2, grid=60):
    """Dense barycentric sampling of the triangle."""
    best = math.inf
    for i in range(1, grid):
        for j in range(1, grid - i):
            k = grid - i - j
            p = normalize_point(i * v0 + j * v1 + k * v2)
            best = min(best, d_pp(x, p))
    return best


def oracle_interval(value, tol=ORACLE_TOL):
    return Interval(value - tol, value + tol, prec=212)
