"""Distances between objects in the manifold, from tile streams.

The tiling stream for an object K emits lifted tetrahedra m_i T_{t_i}
together with radii r_i such that the emitted tiles cover the closed
r_i-neighborhood of K.  Dually, the pulled-back lifts m_i^-1 K listed per
tetrahedron contain every lift whose r_i-neighborhood meets that
tetrahedron of the fundamental polyhedron.  The distance d_M(K, K') in the
manifold is then sandwiched:

    min(d, r + r')  <=  d_M(K, K')  <=  d

where d is the minimum distance between co-located distinct lifts seen so
far and r, r' are the current radii.  Pulling tiles until r + r' > d pins
d_M(K, K') to d.  With K = K' (one shared stream), d_M is twice the
embedding size of K.

Built on top of this:
* cusp_area_matrix — A_ij = e^(2 d_M) A(C_i) A(C_j) over cusp horoballs,
  invariant under rescaling the chosen cross sections.
* system_lower_bound — a radius r such that the B_r(K_j) of a system of
  distinct objects are certified embedded and pairwise disjoint.
"""

from .interval import Interval, NEG_INF, bound_lo
from .hyperboloid import dist
from .tiling import GeometricObject, tile_stream

__all__ = [
    'POS_INF', 'TilesBook', 'DistanceResult', 'pairwise_min_distance',
    'compute_distance', 'cusp_area_matrix', 'system_lower_bound',
]


class PositiveInfinity:
    """Sentinel for an empty minimum of distances (no co-located pair yet)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'inf'


POS_INF = PositiveInfinity()


def _min_bound(a, b):
    """Enclosure of min(a, b) over extended bounds (with +/-inf sentinels)."""
    if a is POS_INF:
        return b
    if b is POS_INF:
        return a
    if a is NEG_INF or b is NEG_INF:
        return NEG_INF
    return Interval.min_of(a, b)


class TilesBook:
    """Bookkeeping for one tile stream: the pulled-back lifts m^-1 K per
    tetrahedron (each with its stream index) and the current radius."""

    __slots__ = ('K', 'stream', 'tiles', 'r', 'count')

    def __init__(self, P, K, stream=None):
        self.K = K
        self.stream = tile_stream(P, K) if stream is None else stream
        self.tiles = [[] for _ in range(P.tri.n)]
        self.r = NEG_INF
        self.count = 0

    def pull(self):
        """Take the next tile; returns (t, (index, lifted object))."""
        event = next(self.stream)
        lift = self.K.geom.transformed(event.m.so13_inverse())
        entry = (self.count, lift)
        self.tiles[event.t].append(entry)
        self.r = event.r
        self.count += 1
        return event.t, entry

    def radius_above_ambient(self):
        """Whether r exceeds d(K, H^3): the neighborhoods B_r of the listed
        lifts are nonempty and the coverage contract is active."""
        if self.r is NEG_INF:
            return False
        if self.K.kind == 'horoball':
            return True  # d(K, H^3) = -inf for signed distances
        return self.r.is_positive()


def pairwise_min_distance(book, book_p, same_object=False):
    """Minimum distance between co-located lifts of the two books
    (POS_INF when no tetrahedron holds a pair).

    With same_object=True the books are the same and a pair must come from
    distinct stream indices.
    """
    best = POS_INF
    for lifts, lifts_p in zip(book.tiles, book_p.tiles):
        for i, a in lifts:
            for j, b in lifts_p:
                if same_object and i == j:
                    continue
                best = _min_bound(best, dist(a, b))
    return best


class DistanceResult:
    """Enclosure of d_M(K, K') with the certification status.

    status 'certified':  value encloses the exact distance.
    status 'embedded-disjoint-only':  the iteration cap was reached; value
    still sandwiches the distance from below and above, and the radius
    neighborhoods pulled so far are certified embedded / disjoint.
    """

    __slots__ = ('value', 'status', 'tiles_used')

    def __init__(self, value, status, tiles_used):
        self.value = value
        self.status = status
        self.tiles_used = tiles_used


def _pull_and_update(book, other, same_object, d_min):
    """Pull one tile and fold its distances to co-located lifts of the
    other book into the running minimum."""
    t, (i, a) = book.pull()
    for j, b in other.tiles[t]:
        if same_object and i == j:
            continue
        d_min = _min_bound(d_min, dist(a, b))
    return d_min


def _sum_exceeds(r, r_p, d_min):
    """Certified r + r' > upper(d_min)."""
    if d_min is POS_INF:
        return False
    if d_min is NEG_INF:
        return True
    return d_min < r + r_p


def compute_distance(P, K, K_p=None, max_tiles=100000):
    """Enclosure of the distance d_M(K, K') in the manifold (signed if a
    horoball is involved; K' = None or K' = K gives twice the embedding
    size of K, via a single shared tile stream)."""
    shared = K_p is None or K_p is K
    book = TilesBook(P, K)
    book_p = book if shared else TilesBook(P, K_p)
    d_min = POS_INF
    pulls = 0

    def take(b):
        nonlocal d_min, pulls
        d_min = _pull_and_update(b, book_p if b is book else book,
                                 shared, d_min)
        pulls += 1

    # Phase 1: make both radii exceed d(K, H^3) so the books' coverage
    # guarantee is in force.
    while not (book.radius_above_ambient() and book_p.radius_above_ambient()):
        if pulls >= max_tiles:
            break
        if not book.radius_above_ambient():
            take(book)
        else:
            take(book_p)

    # Phase 2: alternate until r + r' > d, which pins d_M(K, K') = d.
    turn = 0
    while pulls < max_tiles:
        if book.radius_above_ambient() and book_p.radius_above_ambient() \
                and _sum_exceeds(book.r, book_p.r, d_min):
            tiles = (book.count, book_p.count)
            return DistanceResult(d_min, 'certified', tiles)
        take(book if (shared or turn == 0) else book_p)
        turn ^= 1

    # Iteration cap: report the sandwich
    #   min(d, r + r') <= d_M <= d
    # as one interval; the first branch of the sandwich also certifies
    # that the r- and r'-neighborhoods are embedded / disjoint.
    tiles = (book.count, book_p.count)
    if d_min is POS_INF or d_min is NEG_INF:
        return DistanceResult(d_min, 'embedded-disjoint-only', tiles)
    lower = _min_bound(d_min, book.r + book_p.r)
    value = Interval._raw(bound_lo(lower), d_min.hi, d_min.prec)
    return DistanceResult(value, 'embedded-disjoint-only', tiles)


def _cusp_vertices(P):
    """One polyhedron vertex (t, v) per cusp, the first in scan order."""
    chosen = {}
    for t in range(P.tri.n):
        for v in range(4):
            chosen.setdefault(P.tri.cusp_of_vertex[t][v], (t, v))
    return [chosen[c] for c in range(P.tri.num_cusps)]


def cusp_area_matrix(P, max_tiles=100000):
    """The maximal cusp area matrix: A_ij = e^(2 d_M(K_i, K_j)) A(C_i) A(C_j)
    for the horoballs K at the chosen cross sections (symmetric; each
    unordered pair is computed once)."""
    num = P.tri.num_cusps
    verts = _cusp_vertices(P)
    areas = [cs.area for cs in P.cross_sections]
    matrix = [[None] * num for _ in range(num)]
    for i in range(num):
        K = GeometricObject.horoball_at_vertex(P, *verts[i])
        for j in range(i, num):
            K_p = None if j == i else \
                GeometricObject.horoball_at_vertex(P, *verts[j])
            result = compute_distance(P, K, K_p, max_tiles=max_tiles)
            d = result.value
            entry = (d * Interval.exact(2)).exp() * areas[i] * areas[j]
            matrix[i][j] = entry
            matrix[j][i] = entry
    return matrix


def system_lower_bound(P, objects, extra_tiles=0, max_tiles=100000):
    """A radius r such that the B_r(K_j) of the given pairwise-distinct
    objects are certified embedded and pairwise disjoint: half the minimum
    of all inter-lift distances seen and all stream radii.  extra_tiles
    additional pulls per stream (beyond the coverage threshold) tighten
    the bound."""
    books = [TilesBook(P, K) for K in objects]
    for book in books:
        pulls = 0
        while not book.radius_above_ambient():
            book.pull()
            pulls += 1
            if pulls >= max_tiles:
                raise RuntimeError('tile cap hit before coverage threshold')
        for _ in range(extra_tiles):
            book.pull()

    best = POS_INF
    for t in range(P.tri.n):
        merged = [(b_idx, i, a) for b_idx, book in enumerate(books)
                  for i, a in book.tiles[t]]
        for x in range(len(merged)):
            for y in range(x + 1, len(merged)):
                b1, i1, a1 = merged[x]
                b2, i2, a2 = merged[y]
                if b1 == b2 and i1 == i2:
                    continue
                best = _min_bound(best, dist(a1, a2))
    for book in books:
        best = _min_bound(best, book.r)
    if best is POS_INF or best is NEG_INF:
        return best
    return best / Interval.exact(2)
