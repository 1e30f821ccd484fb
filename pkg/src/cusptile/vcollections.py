"""Associative structures whose keys are known only as interval enclosures.

The building blocks, bottom up:

* IntervalTree — a red-black search tree of (interval, payload) entries
  sorted by left endpoint, with each node annotated by the largest right
  endpoint in its subtree; stabbing queries return exactly the entries
  overlapping a query interval.
* HashDictionary — key-value store driven by a real-valued hash (stored as
  an interval in the tree) and a three-valued certified equality predicate;
  a lookup either finds the value, certifies absence, or fails explicitly.
* QuotientDictionary — dictionary on equivalence classes via a choice
  function returning a candidate set that contains the true canonical
  representative; values alias one shared reference across the class.
* eq_b / hash_mu — the predicate and hash for discrete sets of points and
  light-like vectors: keys x, y are equal iff -x.y < b, distinct iff
  -x.y >= b, where b separates 'same' from 'different'.
* LiftedTetSet — the set of lifted tetrahedra m T_t modulo the stabilizer
  of the tiled object (trivial for points, parabolic for horoballs, cyclic
  for lines), one dictionary per tetrahedron index.
"""

from mpmath.libmp import mpf_le, mpf_lt

from .interval import Interval, PrecisionError
from .hyperboloid import MVector, line_projection_offset

__all__ = [
    'IntervalTree', 'HashDictionary', 'QuotientDictionary',
    'eq_b', 'hash_mu', 'MU', 'make_line_choice', 'LiftedTetSet',
]


# -- interval tree ----------------------------------------------------------

_RED, _BLACK = True, False


class _Node:
    __slots__ = ('key', 'payload', 'left', 'right', 'red', 'max_hi')

    def __init__(self, red, left, key, payload, right):
        self.red = red
        self.left = left
        self.key = key
        self.payload = payload
        self.right = right
        hi = key.hi
        for child in (left, right):
            if child is not None and mpf_lt(hi, child.max_hi):
                hi = child.max_hi
        self.max_hi = hi


def _balance(red, left, key, payload, right):
    """Rebuild a black node whose subtree may contain a red-red violation
    directly below it (the four classic rotation cases)."""
    if not red:
        ll = left.left if left else None
        lr = left.right if left else None
        rl = right.left if right else None
        rr = right.right if right else None
        if left and left.red and ll and ll.red:
            return _Node(_RED,
                         _Node(_BLACK, ll.left, ll.key, ll.payload, ll.right),
                         left.key, left.payload,
                         _Node(_BLACK, lr, key, payload, right))
        if left and left.red and lr and lr.red:
            return _Node(_RED,
                         _Node(_BLACK, left.left, left.key, left.payload,
                               lr.left),
                         lr.key, lr.payload,
                         _Node(_BLACK, lr.right, key, payload, right))
        if right and right.red and rl and rl.red:
            return _Node(_RED,
                         _Node(_BLACK, left, key, payload, rl.left),
                         rl.key, rl.payload,
                         _Node(_BLACK, rl.right, right.key, right.payload,
                               right.right))
        if right and right.red and rr and rr.red:
            return _Node(_RED,
                         _Node(_BLACK, left, key, payload, right.left),
                         right.key, right.payload,
                         _Node(_BLACK, rr.left, rr.key, rr.payload,
                               rr.right))
    return _Node(red, left, key, payload, right)


class IntervalTree:
    """Red-black tree of (Interval, payload), sorted by left endpoint and
    annotated with subtree maxima of the right endpoints."""

    def __init__(self):
        self._root = None
        self._size = 0

    def __len__(self):
        return self._size

    def insert(self, key, payload):
        if key.is_empty:
            raise ValueError('cannot index by the empty interval')

        def ins(node):
            if node is None:
                return _Node(_RED, None, key, payload, None)
            if mpf_lt(key.lo, node.key.lo):
                return _balance(node.red, ins(node.left), node.key,
                                node.payload, node.right)
            return _balance(node.red, node.left, node.key, node.payload,
                            ins(node.right))

        root = ins(self._root)
        if root.red:
            root = _Node(_BLACK, root.left, root.key, root.payload,
                         root.right)
        self._root = root
        self._size += 1

    def stabbing_query(self, q):
        """All (key, payload) entries whose key overlaps the interval q."""
        if q.is_empty:
            return []
        out = []

        def visit(node):
            if node is None or mpf_lt(node.max_hi, q.lo):
                return
            visit(node.left)
            if mpf_le(q.lo, node.key.hi) and mpf_le(node.key.lo, q.hi):
                out.append((node.key, node.payload))
            if mpf_le(node.key.lo, q.hi):
                visit(node.right)

        visit(self._root)
        return out

    def __iter__(self):
        def walk(node):
            if node is not None:
                yield from walk(node.left)
                yield (node.key, node.payload)
                yield from walk(node.right)
        return walk(self._root)

    def check_invariants(self):
        """Verify search order, annotation, and red-black shape (for tests
        and debugging)."""
        def check(node):
            if node is None:
                return 1, None
            bh_l, _ = check(node.left)
            bh_r, _ = check(node.right)
            assert bh_l == bh_r, 'unequal black heights'
            hi = node.key.hi
            for child in (node.left, node.right):
                if child is not None:
                    assert not mpf_lt(node.max_hi, child.max_hi)
                    if node.red:
                        assert not child.red, 'red node with red child'
                    if mpf_lt(hi, child.max_hi):
                        hi = child.max_hi
            assert node.max_hi == hi, 'stale subtree annotation'
            if node.left is not None:
                assert mpf_le(node.left.key.lo, node.key.lo)
            if node.right is not None:
                assert mpf_le(node.key.lo, node.right.key.lo)
            return bh_l + (0 if node.red else 1), None

        if self._root is not None:
            assert not self._root.red, 'red root'
            check(self._root)


# -- dictionaries -----------------------------------------------------------


class HashDictionary:
    """Dictionary on interval-enclosed keys.

    hash_fn maps a key to an Interval; enclosures of equal keys must always
    overlap.  eq is three-valued: True / False when equality or inequality
    is certified, None when undecided (a lookup hitting None fails with
    PrecisionError rather than guess).
    """

    def __init__(self, hash_fn, eq):
        self._hash = hash_fn
        self._eq = eq
        self._tree = IntervalTree()

    def __len__(self):
        return len(self._tree)

    def insert(self, key, value):
        self._tree.insert(self._hash(key), (key, value))

    def lookup(self, key, default=None):
        """The stored value for this key; `default` if certified absent."""
        for _, (stored, value) in self._tree.stabbing_query(self._hash(key)):
            verdict = self._eq(stored, key)
            if verdict is None:
                raise PrecisionError('key comparison is undecided')
            if verdict:
                return value
        return default

    def items(self):
        for _, pair in self._tree:
            yield pair


class QuotientDictionary:
    """Dictionary on equivalence classes of keys.

    choice(key) returns a candidate list guaranteed to contain the true
    canonical representative of the class.  Values are stored by reference
    under every candidate, so all members of a class alias one value.
    """

    def __init__(self, hash_fn, eq, choice):
        self._base = HashDictionary(hash_fn, eq)
        self._choice = choice

    def __len__(self):
        return len(self._base)

    def insert(self, key, value):
        for candidate in self._choice(key):
            self._base.insert(candidate, value)

    def lookup(self, key, default=None):
        for candidate in self._choice(key):
            value = self._base.lookup(candidate, default=_MISSING)
            if value is not _MISSING:
                return value
        return default


_MISSING = object()


# -- the geometric predicate and hash ----------------------------------------


def eq_b(x, y, b):
    """Equality predicate for a discrete set of points / light-like
    vectors separated by -x.y >= b (with -x.x < b): True / False when
    certified, None when undecided."""
    d = -(x.dot(y))
    if d < b:
        return True
    if d >= b:
        return False
    return None


MU = MVector([Interval.exact(1), Interval.exact(0),
              Interval.exact(0), Interval.exact(0)])


def hash_mu(x, mu=MU):
    """Hash of a Minkowski vector: the inner product with a fixed mu."""
    return x.dot(mu)


# -- choice function for the line quotient ------------------------------------


def make_line_choice(line, h, length, max_candidates=3):
    """Choice function for points modulo the cyclic group of a geodesic.

    line carries the two ideal endpoints; h is the generator of the cyclic
    group whose attractive fixed point is line.x1 and `length` encloses its
    translation length.  A point x is pushed back into the fundamental slab
    through the midpoint by h^(-i) where i = floor of the signed offset of
    x along the line divided by the length; every floor value allowed by
    the enclosure yields one candidate.
    """
    if not length.is_positive():
        raise ValueError('translation length must be certified positive')
    mid = (line.x0 + line.x1).normalize_point()
    h_inv = h.so13_inverse()

    def choice(x):
        d = line_projection_offset(line, _as_point(mid), _as_point(x)) \
            / length
        i_lo, i_hi = d.lo_floor(), d.hi_floor()
        if i_hi - i_lo + 1 > max_candidates:
            raise PrecisionError(
                'offset along the geodesic spans %d translation slabs'
                % (i_hi - i_lo + 1))
        candidates = []
        for i in range(i_lo, i_hi + 1):
            y = x
            step = h_inv if i > 0 else h
            for _ in range(abs(i)):
                y = step.apply(y)
            candidates.append(y)
        return candidates

    return choice


class _PointView:
    """Adapter giving an MVector the .v attribute the distance helpers
    expect from a point."""

    __slots__ = ('v',)

    def __init__(self, v):
        self.v = v


def _as_point(v):
    return _PointView(v)


# -- set of lifted tetrahedra --------------------------------------------------


class LiftedTetSet:
    """Set of lifted tetrahedra (m, t), with m taken modulo the stabilizer
    of the tiled object.

    key_fn converts the motion m to the Minkowski vector actually compared
    (the moved base point, or the pulled-back horoball vector); b is the
    separation bound of the resulting discrete set; choice (optional)
    quotients by a nontrivial stabilizer.
    """

    def __init__(self, num_tets, key_fn, b, choice=None):
        self._key_fn = key_fn
        self._b = b
        eq = lambda x, y: eq_b(x, y, b)
        if choice is None:
            make = lambda: HashDictionary(hash_mu, eq)
        else:
            make = lambda: QuotientDictionary(hash_mu, eq, choice)
        self._dicts = [make() for _ in range(num_tets)]

    @classmethod
    def for_point(cls, P):
        """Set for tiling about a point: keys m p for the incenter p of
        tetrahedron 0, separated by b = cosh(inradius)."""
        p = P.incenters[0].v
        b = P.inradii[0].cosh()
        if not (Interval.exact(1) < b):
            raise ValueError('separation bound must exclude cosh(0) = 1')
        return cls(P.tri.n, lambda m: m.apply(p), b)

    @classmethod
    def for_horoball(cls, P, l, b=None):
        """Set for tiling about a horoball B(l) whose cusp neighborhood is
        embedded after scaling areas by s: keys m^-1 l, separated by
        b = s^2 (default: s = 1, valid whenever the supplied cross
        sections are already embedded)."""
        if b is None:
            b = Interval.exact(1)
        if not b.is_positive():
            raise ValueError('separation bound must be positive')
        return cls(P.tri.n, lambda m: m.so13_inverse().apply(l), b)

    @classmethod
    def for_line(cls, P, line, h, length, max_candidates=3):
        """Set for tiling about the lift of a closed geodesic: keys m p
        modulo the cyclic holonomy h, via the slab choice function."""
        p = P.incenters[0].v
        b = P.inradii[0].cosh()
        if not (Interval.exact(1) < b):
            raise ValueError('separation bound must exclude cosh(0) = 1')
        choice = make_line_choice(line, h, length,
                                  max_candidates=max_candidates)
        return cls(P.tri.n, lambda m: m.apply(p), b, choice=choice)

    def __len__(self):
        return sum(len(d) for d in self._dicts)

    def contains(self, m, t):
        """Certified membership; eq_b failure raises PrecisionError."""
        return self._dicts[t].lookup(self._key_fn(m)) is not None

    def add(self, m, t):
        """Insert if absent; True if newly added, False if already present."""
        key = self._key_fn(m)
        if self._dicts[t].lookup(key) is not None:
            return False
        self._dicts[t].insert(key, (m, t))
        return True
