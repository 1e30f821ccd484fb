"""Arbitrary-precision interval arithmetic with directed outward rounding.

Endpoints are raw mpf tuples from ``mpmath.libmp`` so that every operation
can request an explicit rounding direction ('f' = toward -inf for lower
endpoints, 'c' = toward +inf for upper endpoints).  No global rounding state
is touched; values are immutable.

Comparison semantics are deliberately one-sided: ``a < b`` is True only when
the whole of ``a`` lies strictly below the whole of ``b``, and False
otherwise.  A False answer certifies nothing.  Where code needs a certified
negative answer it uses the three-valued helpers (:func:`lt_certified`).
"""

from __future__ import annotations

from fractions import Fraction

from mpmath import libmp as _L
from mpmath.libmp import (
    fzero, fone, fnan, finf, fninf,
    from_int, from_man_exp, from_rational, from_float,
    mpf_abs, mpf_add, mpf_sub, mpf_mul, mpf_mul_int, mpf_div, mpf_neg,
    mpf_sqrt, mpf_exp, mpf_log, mpf_cosh_sinh, mpf_atan, mpf_pi,
    mpf_asinh, mpf_acosh, mpf_shift, mpf_pow_int,
    mpf_cmp, mpf_lt, mpf_le, mpf_gt, mpf_ge, mpf_eq,
    to_float, to_int,
)

__all__ = [
    'Interval', 'ComplexInterval', 'NEG_INF', 'NegativeInfinity',
    'DomainError', 'EmptyIntervalError', 'PrecisionError',
    'DEFAULT_PRECISION',
    'pi_interval', 'bound_min', 'bound_lo',
]

DEFAULT_PRECISION = 212

# Guard bits for transcendental endpoint evaluation, plus a post-hoc ulp
# widening that absorbs the library's (small, but not formally guaranteed)
# rounding slack before the final outward rounding.
_GUARD = 16
_SLACK_ULPS = 4


class DomainError(ArithmeticError):
    """Operand outside the mathematical domain of the operation."""


class EmptyIntervalError(DomainError):
    """A function was applied to the empty interval."""


class PrecisionError(ArithmeticError):
    """A verification step failed for interval-width (not mathematical)
    reasons; retrying at higher precision may succeed."""


class NegativeInfinity:
    """Sentinel that compares below every interval (seed radii etc.)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return '-inf'


NEG_INF = NegativeInfinity()


def _exact(x):
    """Widen-free raw-mpf identity; documents intent at call sites."""
    return x


def _widen(x, ulps, prec, direction):
    """Move ``x`` by ``ulps`` units in the last place of ``prec`` bits,
    in the given direction ('f' = down, 'c' = up)."""
    if x == fzero:
        eps = from_man_exp(1, -prec - _GUARD)
    else:
        sign, man, exp, bc = x
        eps = from_man_exp(ulps, exp + bc - prec - _GUARD)
    if direction == 'f':
        return mpf_sub(x, eps, prec + _GUARD, 'f')
    return mpf_add(x, eps, prec + _GUARD, 'c')


def _fn_down(fn, x, prec):
    r = fn(x, prec + _GUARD, 'f')
    return _widen(r, _SLACK_ULPS, prec, 'f')


def _fn_up(fn, x, prec):
    r = fn(x, prec + _GUARD, 'c')
    return _widen(r, _SLACK_ULPS, prec, 'c')


def _min(*xs):
    m = xs[0]
    for x in xs[1:]:
        if mpf_lt(x, m):
            m = x
    return m


def _max(*xs):
    m = xs[0]
    for x in xs[1:]:
        if mpf_gt(x, m):
            m = x
    return m


def _to_raw(x, prec, rnd):
    if isinstance(x, tuple):
        return x
    if isinstance(x, int):
        return from_int(x, prec, rnd)
    if isinstance(x, float):
        return from_float(x, prec, rnd)
    if isinstance(x, Fraction):
        return from_rational(x.numerator, x.denominator, prec, rnd)
    if isinstance(x, str):
        return _raw_from_decimal(x, prec, rnd)
    raise TypeError(f'cannot build interval endpoint from {type(x)!r}')


def _raw_from_decimal(s, prec, rnd):
    """Parse 'DeE' / 'D' decimal notation exactly, rounding in ``rnd``."""
    s = s.strip()
    mant, _, expo = s.partition('e')
    e = int(expo) if expo else 0
    if '.' in mant:
        int_part, frac_part = mant.split('.')
        e -= len(frac_part)
        mant = (int_part + frac_part) or '0'
    d = int(mant)
    if e >= 0:
        return from_int(d * 10 ** e, prec, rnd)
    return from_rational(d, 10 ** -e, prec, rnd)


def _raw_to_decimal(x):
    """Exact decimal string 'Me<E>' for a raw mpf (finite binary is exact
    in decimal)."""
    if x == fzero:
        return '0e0'
    if x == finf:
        return 'inf'
    if x == fninf:
        return '-inf'
    sign, man, exp, bc = x
    man = int(man)
    if sign:
        man = -man
    if exp >= 0:
        return f'{man << exp if exp else man}e0'
    return f'{man * 5 ** -exp}e{exp}'


class Interval:
    """Closed interval [lo, hi] with endpoints at ``precision`` bits.

    The distinguished empty interval is represented by lo > hi (NaN-free);
    use :meth:`empty` / :attr:`is_empty`.
    """

    __slots__ = ('lo', 'hi', 'prec')

    def __init__(self, lo, hi=None, prec=None):
        prec = prec or DEFAULT_PRECISION
        if hi is None:
            hi = lo
        lo = _to_raw(lo, prec, 'f')
        hi = _to_raw(hi, prec, 'c')
        self.lo = lo
        self.hi = hi
        self.prec = prec

    @classmethod
    def _raw(cls, lo, hi, prec):
        iv = object.__new__(cls)
        iv.lo = lo
        iv.hi = hi
        iv.prec = prec
        return iv

    @classmethod
    def empty(cls, prec=None):
        return cls._raw(fone, fzero, prec or DEFAULT_PRECISION)

    @classmethod
    def exact(cls, x, prec=None):
        """Interval from an exactly representable value (int / binary float)."""
        prec = prec or DEFAULT_PRECISION
        lo = _to_raw(x, prec, 'f')
        hi = _to_raw(x, prec, 'c')
        return cls._raw(lo, hi, prec)

    @classmethod
    def max_of(cls, *ivs):
        """Pointwise maximum (encloses max of the represented numbers)."""
        prec = max(iv.prec for iv in ivs)
        for iv in ivs:
            iv._check()
        return cls._raw(_max(*[iv.lo for iv in ivs]),
                        _max(*[iv.hi for iv in ivs]), prec)

    @classmethod
    def min_of(cls, *ivs):
        """Pointwise minimum (encloses min of the represented numbers)."""
        prec = max(iv.prec for iv in ivs)
        for iv in ivs:
            iv._check()
        return cls._raw(_min(*[iv.lo for iv in ivs]),
                        _min(*[iv.hi for iv in ivs]), prec)

    @classmethod
    def hull_of(cls, *ivs):
        prec = max(iv.prec for iv in ivs)
        ivs = [iv for iv in ivs if not iv.is_empty]
        if not ivs:
            return cls.empty(prec)
        return cls._raw(_min(*[iv.lo for iv in ivs]),
                        _max(*[iv.hi for iv in ivs]), prec)

    # -- predicates ----------------------------------------------------

    @property
    def is_empty(self):
        return mpf_gt(self.lo, self.hi)

    @property
    def is_point(self):
        return mpf_eq(self.lo, self.hi)

    def contains_zero(self):
        return (not self.is_empty and mpf_le(self.lo, fzero)
                and mpf_ge(self.hi, fzero))

    def contains(self, x):
        """Membership of a number (int/float/Fraction/raw) or interval."""
        if isinstance(x, Interval):
            if x.is_empty:
                return True
            return mpf_le(self.lo, x.lo) and mpf_ge(self.hi, x.hi)
        p = max(self.prec, DEFAULT_PRECISION)
        xl = _to_raw(x, p + _GUARD, 'f')
        xh = _to_raw(x, p + _GUARD, 'c')
        return mpf_le(self.lo, xl) and mpf_ge(self.hi, xh)

    def overlaps(self, other):
        if self.is_empty or other.is_empty:
            return False
        return mpf_le(self.lo, other.hi) and mpf_le(other.lo, self.hi)

    def is_positive(self):
        return not self.is_empty and mpf_gt(self.lo, fzero)

    def is_negative(self):
        return not self.is_empty and mpf_lt(self.hi, fzero)

    def is_nonnegative(self):
        return not self.is_empty and mpf_ge(self.lo, fzero)

    # -- one-sided comparisons (False certifies nothing) ---------------

    def __lt__(self, other):
        other = _coerce(other, self.prec)
        return mpf_lt(self.hi, other.lo)

    def __le__(self, other):
        other = _coerce(other, self.prec)
        return mpf_le(self.hi, other.lo)

    def __gt__(self, other):
        other = _coerce(other, self.prec)
        return mpf_gt(self.lo, other.hi)

    def __ge__(self, other):
        other = _coerce(other, self.prec)
        return mpf_ge(self.lo, other.hi)

    # -- arithmetic -----------------------------------------------------

    def _check(self, *others):
        if self.is_empty or any(o.is_empty for o in others):
            raise EmptyIntervalError('arithmetic on the empty interval')

    def __neg__(self):
        if self.is_empty:
            return self
        return Interval._raw(mpf_neg(self.hi), mpf_neg(self.lo), self.prec)

    def __abs__(self):
        self._check()
        if self.is_nonnegative():
            return self
        if self.is_negative():
            return -self
        return Interval._raw(fzero, _max(mpf_abs(self.hi), mpf_abs(self.lo)),
                             self.prec)

    def __add__(self, other):
        other = _coerce(other, self.prec)
        self._check(other)
        p = max(self.prec, other.prec)
        return Interval._raw(mpf_add(self.lo, other.lo, p, 'f'),
                             mpf_add(self.hi, other.hi, p, 'c'), p)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other, self.prec)
        self._check(other)
        p = max(self.prec, other.prec)
        return Interval._raw(mpf_sub(self.lo, other.hi, p, 'f'),
                             mpf_sub(self.hi, other.lo, p, 'c'), p)

    def __rsub__(self, other):
        return _coerce(other, self.prec) - self

    def __mul__(self, other):
        other = _coerce(other, self.prec)
        self._check(other)
        p = max(self.prec, other.prec)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lo = _min(mpf_mul(a, c, p, 'f'), mpf_mul(a, d, p, 'f'),
                  mpf_mul(b, c, p, 'f'), mpf_mul(b, d, p, 'f'))
        hi = _max(mpf_mul(a, c, p, 'c'), mpf_mul(a, d, p, 'c'),
                  mpf_mul(b, c, p, 'c'), mpf_mul(b, d, p, 'c'))
        return Interval._raw(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other, self.prec)
        self._check(other)
        if other.contains_zero():
            raise DomainError('division by an interval containing zero')
        p = max(self.prec, other.prec)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lo = _min(mpf_div(a, c, p, 'f'), mpf_div(a, d, p, 'f'),
                  mpf_div(b, c, p, 'f'), mpf_div(b, d, p, 'f'))
        hi = _max(mpf_div(a, c, p, 'c'), mpf_div(a, d, p, 'c'),
                  mpf_div(b, c, p, 'c'), mpf_div(b, d, p, 'c'))
        return Interval._raw(lo, hi, p)

    def __rtruediv__(self, other):
        return _coerce(other, self.prec) / self

    def sqr(self):
        """Dependency-aware square: tighter than self * self around 0."""
        self._check()
        p = self.prec
        a = abs(self)
        return Interval._raw(mpf_mul(a.lo, a.lo, p, 'f'),
                             mpf_mul(a.hi, a.hi, p, 'c'), p)

    # -- elementary functions -------------------------------------------

    def sqrt(self):
        self._check()
        if mpf_lt(self.lo, fzero):
            raise DomainError('sqrt of an interval with negative part')
        p = self.prec
        return Interval._raw(mpf_sqrt(self.lo, p, 'f'),
                             mpf_sqrt(self.hi, p, 'c'), p)

    def exp(self):
        self._check()
        p = self.prec
        return Interval._raw(_fn_down(mpf_exp, self.lo, p),
                             _fn_up(mpf_exp, self.hi, p), p)

    def log(self):
        self._check()
        if mpf_le(self.lo, fzero):
            raise DomainError('log of an interval touching (-inf, 0]')
        p = self.prec
        return Interval._raw(_fn_down(mpf_log, self.lo, p),
                             _fn_up(mpf_log, self.hi, p), p)

    def sinh(self):
        self._check()
        p = self.prec

        def s_f(x, prec, rnd):
            return mpf_cosh_sinh(x, prec, rnd)[1]

        return Interval._raw(_fn_down(s_f, self.lo, p),
                             _fn_up(s_f, self.hi, p), p)._sign_clamp(self)

    def cosh(self):
        self._check()
        p = self.prec

        def c_f(x, prec, rnd):
            return mpf_cosh_sinh(x, prec, rnd)[0]

        a = abs(self)
        if self.contains_zero():
            lo = fone
        else:
            lo = _fn_down(c_f, a.lo, p)
            if mpf_lt(lo, fone):
                lo = fone
        return Interval._raw(lo, _fn_up(c_f, a.hi, p), p)

    def asinh(self):
        self._check()
        p = self.prec
        return Interval._raw(_fn_down(mpf_asinh, self.lo, p),
                             _fn_up(mpf_asinh, self.hi, p), p)._sign_clamp(self)

    def _sign_clamp(self, src):
        """Tighten an odd-function image so it keeps the argument's sign:
        endpoint widening must not push the enclosure across zero."""
        lo, hi = self.lo, self.hi
        if not mpf_lt(src.lo, fzero) and mpf_lt(lo, fzero):
            lo = fzero
        if not mpf_lt(fzero, src.hi) and mpf_lt(fzero, hi):
            hi = fzero
        return Interval._raw(lo, hi, self.prec)

    def acosh(self):
        self._check()
        if mpf_lt(self.lo, fone):
            raise DomainError('acosh of an interval with part below 1')
        p = self.prec
        lo = _fn_down(mpf_acosh, self.lo, p)
        if mpf_lt(lo, fzero):
            lo = fzero
        return Interval._raw(lo, _fn_up(mpf_acosh, self.hi, p), p)

    def log_or_neg_inf(self):
        """log as an ExtendedBound: NEG_INF when the enclosure touches
        (-inf, 0] (signed horoball distances)."""
        if self.is_empty or mpf_le(self.lo, fzero):
            return NEG_INF
        return self.log()

    def atan(self):
        self._check()
        p = self.prec
        return Interval._raw(_fn_down(mpf_atan, self.lo, p),
                             _fn_up(mpf_atan, self.hi, p), p)

    # -- set operations ---------------------------------------------------

    def intersect(self, other):
        other = _coerce(other, self.prec)
        p = max(self.prec, other.prec)
        if self.is_empty or other.is_empty:
            return Interval.empty(p)
        lo = _max(self.lo, other.lo)
        hi = _min(self.hi, other.hi)
        if mpf_gt(lo, hi):
            return Interval.empty(p)
        return Interval._raw(lo, hi, p)

    def hull(self, other):
        return Interval.hull_of(self, _coerce(other, self.prec))

    def clamp_lower(self, bound):
        """Intersect with [bound, +inf) — the robustness clamp."""
        if self.is_empty:
            return self
        b = _to_raw(bound, self.prec, 'f')
        if mpf_lt(self.hi, b):
            return Interval.empty(self.prec)
        return Interval._raw(_max(self.lo, b), self.hi, self.prec)

    def max_with(self, bound):
        """Pointwise max(self, bound): both endpoints are raised to bound.
        Unlike clamp_lower this never empties the interval."""
        self._check()
        b = _to_raw(bound, self.prec, 'f')
        return Interval._raw(_max(self.lo, b), _max(self.hi, b), self.prec)

    # -- inspection -------------------------------------------------------

    def midpoint_float(self):
        return (to_float(self.lo) + to_float(self.hi)) / 2.0

    def midpoint(self):
        """Midpoint as a point interval (exactly representable)."""
        self._check()
        p = self.prec
        m = mpf_shift(mpf_add(self.lo, self.hi, p, 'n'), -1)
        return Interval._raw(m, m, p)

    def width(self):
        self._check()
        return mpf_sub(self.hi, self.lo, self.prec, 'c')

    def width_float(self):
        return to_float(self.width())

    def lo_float(self):
        return to_float(self.lo)

    def hi_float(self):
        return to_float(self.hi)

    def lo_floor(self):
        return _raw_floor(self.lo)

    def hi_floor(self):
        return _raw_floor(self.hi)

    # -- serialization ------------------------------------------------------

    def serialize(self):
        if self.is_empty:
            return ('empty', 'empty')
        return (_raw_to_decimal(self.lo), _raw_to_decimal(self.hi))

    @classmethod
    def deserialize(cls, pair, prec=None):
        prec = prec or DEFAULT_PRECISION
        if pair[0] == 'empty':
            return cls.empty(prec)
        lo = (fninf if pair[0] == '-inf'
              else _raw_from_decimal(pair[0], prec, 'f'))
        hi = (finf if pair[1] == 'inf'
              else _raw_from_decimal(pair[1], prec, 'c'))
        return cls._raw(lo, hi, prec)

    def __repr__(self):
        if self.is_empty:
            return 'Interval(empty)'
        return f'Interval[{self.lo_float()!r}, {self.hi_float()!r}]'


def _raw_floor(x):
    """floor of a raw mpf as a Python int."""
    sign, man, exp, bc = x
    if man == 0:
        if x == fzero:
            return 0
        raise DomainError('floor of an infinite endpoint')
    m = int(man)
    if exp >= 0:
        v = m << exp
        return -v if sign else v
    if sign:
        return -((m + (1 << -exp) - 1) >> -exp)
    return m >> -exp


def _coerce(x, prec):
    if isinstance(x, Interval):
        return x
    if isinstance(x, (int, float, Fraction, str)):
        return Interval(x, x, prec)
    raise TypeError(f'cannot coerce {type(x)!r} to Interval')


def pi_interval(prec=None):
    prec = prec or DEFAULT_PRECISION
    lo = _widen(mpf_pi(prec + _GUARD, 'f'), _SLACK_ULPS, prec, 'f')
    hi = _widen(mpf_pi(prec + _GUARD, 'c'), _SLACK_ULPS, prec, 'c')
    return Interval._raw(lo, hi, prec)


def lt_certified(a, b):
    """Three-valued strict comparison: True / False are certified,
    None means undecided at the current precision."""
    if a < b:
        return True
    if a >= b:
        return False
    return None


def bound_lo(x):
    """Lower endpoint of an ExtendedBound as a sortable mpf raw (or -inf)."""
    if x is NEG_INF:
        return fninf
    return x.lo


def bound_min(a, b):
    """Min of two ExtendedBounds in the lower-bound sense (compare lo)."""
    if a is NEG_INF or b is NEG_INF:
        return NEG_INF
    return a if mpf_le(a.lo, b.lo) else b


class ComplexInterval:
    """Rectangle enclosure re + i*im with component-wise inclusion."""

    __slots__ = ('re', 'im')

    def __init__(self, re, im=0, prec=None):
        if isinstance(re, complex) and im == 0:
            re, im = re.real, re.imag
        self.re = re if isinstance(re, Interval) else Interval(re, prec=prec)
        self.im = im if isinstance(im, Interval) else Interval(im, prec=prec)

    @property
    def prec(self):
        return max(self.re.prec, self.im.prec)

    def __add__(self, other):
        other = _ccoerce(other, self.prec)
        return ComplexInterval(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _ccoerce(other, self.prec)
        return ComplexInterval(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _ccoerce(other, self.prec) - self

    def __neg__(self):
        return ComplexInterval(-self.re, -self.im)

    def __mul__(self, other):
        other = _ccoerce(other, self.prec)
        return ComplexInterval(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _ccoerce(other, self.prec)
        d = other.re.sqr() + other.im.sqr()
        num = self * other.conj()
        return ComplexInterval(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return _ccoerce(other, self.prec) / self

    def conj(self):
        return ComplexInterval(self.re, -self.im)

    def abs_sqr(self):
        return self.re.sqr() + self.im.sqr()

    def __abs__(self):
        return self.abs_sqr().sqrt()

    def contains(self, z):
        if isinstance(z, ComplexInterval):
            return self.re.contains(z.re) and self.im.contains(z.im)
        if isinstance(z, complex):
            return self.re.contains(z.real) and self.im.contains(z.imag)
        return self.re.contains(z) and self.im.contains(0)

    def overlaps(self, other):
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def contains_zero(self):
        return self.re.contains_zero() and self.im.contains_zero()

    def log_upper_half(self):
        """log z for enclosures certified to have im > 0 (arg in (0, pi));
        avoids the branch cut without case analysis."""
        if not self.im.is_positive():
            raise DomainError('log_upper_half needs certified im > 0')
        half_pi = pi_interval(self.prec) * Interval(Fraction(1, 2))
        arg = half_pi - (self.re / self.im).atan()
        return ComplexInterval(abs(self).log(), arg)

    def midpoint_complex(self):
        return complex(self.re.midpoint_float(), self.im.midpoint_float())

    def max_width(self):
        return _max(self.re.width(), self.im.width())

    def max_width_float(self):
        return to_float(self.max_width())

    def serialize(self):
        return self.re.serialize() + self.im.serialize()

    @classmethod
    def deserialize(cls, quad, prec=None):
        return cls(Interval.deserialize(quad[:2], prec),
                   Interval.deserialize(quad[2:], prec))

    def __repr__(self):
        return (f'ComplexInterval({self.re!r}, {self.im!r})')


def _ccoerce(z, prec):
    if isinstance(z, ComplexInterval):
        return z
    if isinstance(z, complex):
        return ComplexInterval(Interval(z.real, prec=prec),
                               Interval(z.imag, prec=prec))
    if isinstance(z, (int, float, Fraction, Interval)):
        return ComplexInterval(_coerce(z, prec), Interval(0, prec=prec))
    raise TypeError(f'cannot coerce {type(z)!r} to ComplexInterval')
