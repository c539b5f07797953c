"""Rigorous real interval arithmetic with outward rounding.

Thin wrapper around mpmath's interval context.  Every operation returns an
enclosure of the exact mathematical result at the active working precision;
endpoints are binary floats stored exactly, so intervals computed at
different precisions mix soundly.  Predicates that cannot be decided at the
current precision are retried at doubled precision up to a cap and then
reported as undecided rather than guessed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Optional

import mpmath
from mpmath import iv, mp
from mpmath.libmp import to_rational

DEFAULT_PREC = 64
PREC_CAP = 4096


class PrecisionCapError(ArithmeticError):
    """A certified decision or target width was not reached at the precision cap."""


class workprec:
    """Context manager setting the working precision (in bits) for interval ops."""

    def __init__(self, bits: int):
        self.bits = bits

    def __enter__(self):
        self._iv_prec = iv.prec
        self._mp_prec = mp.prec
        iv.prec = self.bits
        mp.prec = self.bits
        return self

    def __exit__(self, *exc):
        iv.prec = self._iv_prec
        mp.prec = self._mp_prec
        return False


def _ivmpf(x):
    """Convert x to an mpmath interval, exactly where possible, else outward."""
    if isinstance(x, Interval):
        return x._v
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return iv.mpf(x.numerator)
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    if isinstance(x, (int, float)):
        return iv.mpf(x)
    if isinstance(x, mpmath.mpf):
        return iv.mpf(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Interval")


class Interval:
    """Closed real interval [lo, hi] with directed-rounded endpoints."""

    __slots__ = ("_v",)

    def __init__(self, value, hi=None):
        if hi is not None:
            a = _ivmpf(value)
            b = _ivmpf(hi)
            self._v = iv.mpf([a.a, b.b])
        elif isinstance(value, iv.mpf):
            self._v = value
        else:
            self._v = _ivmpf(value)
        if not (self._v.a <= self._v.b):
            raise ValueError(f"invalid interval endpoints: {self._v}")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_fraction(cls, fr: Fraction) -> "Interval":
        return cls(Fraction(fr))

    @classmethod
    def pi(cls) -> "Interval":
        return cls(+iv.pi)

    # -- endpoint access ---------------------------------------------------

    @property
    def lo(self) -> mpmath.mpf:
        return mp.make_mpf(self._v._mpi_[0])

    @property
    def hi(self) -> mpmath.mpf:
        return mp.make_mpf(self._v._mpi_[1])

    @property
    def lo_fraction(self) -> Fraction:
        return Fraction(*to_rational(self._v._mpi_[0]))

    @property
    def hi_fraction(self) -> Fraction:
        return Fraction(*to_rational(self._v._mpi_[1]))

    @property
    def mid(self) -> mpmath.mpf:
        return (self.lo + self.hi) / 2

    @property
    def width_fraction(self) -> Fraction:
        return self.hi_fraction - self.lo_fraction

    def is_finite(self) -> bool:
        return mpmath.isfinite(self.lo) and mpmath.isfinite(self.hi)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        return Interval(self._v + _ivmpf(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Interval(self._v - _ivmpf(other))

    def __rsub__(self, other):
        return Interval(_ivmpf(other) - self._v)

    def __mul__(self, other):
        return Interval(self._v * _ivmpf(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Interval(self._v / _ivmpf(other))

    def __rtruediv__(self, other):
        return Interval(_ivmpf(other) / self._v)

    def __neg__(self):
        return Interval(-self._v)

    def __abs__(self):
        return Interval(abs(self._v))

    def __pow__(self, e):
        if isinstance(e, int):
            return Interval(self._v ** e)
        if isinstance(e, Fraction) and e.denominator == 1:
            return Interval(self._v ** int(e))
        # real exponent: requires a positive base
        ee = _ivmpf(e)
        if not self._v.a > 0:
            raise ValueError("non-integer interval power needs a positive base")
        return Interval(iv.exp(ee * iv.log(self._v)))

    def square(self) -> "Interval":
        return Interval(self._v ** 2)

    # -- predicates ----------------------------------------------------------

    def contains(self, x) -> bool:
        v = _ivmpf(x)
        return self._v.a <= v.a and v.b <= self._v.b

    def contains_zero(self) -> bool:
        return self._v.a <= 0 <= self._v.b

    def sign(self) -> Optional[int]:
        """-1 / +1 when certain, 0 for the exact point zero, None when undecided."""
        if self._v.a > 0:
            return 1
        if self._v.b < 0:
            return -1
        if self._v.a == 0 and self._v.b == 0:
            return 0
        return None

    def compare(self, other) -> Optional[int]:
        """-1 if certainly below other, +1 if certainly above, else None."""
        o = _ivmpf(other)
        if self._v.b < o.a:
            return -1
        if self._v.a > o.b:
            return 1
        return None

    def overlaps(self, other) -> bool:
        o = _ivmpf(other)
        return not (self._v.b < o.a or o.b < self._v.a)

    def hull(self, other) -> "Interval":
        o = _ivmpf(other)
        return Interval(iv.mpf([min(self._v.a, o.a).a, max(self._v.b, o.b).b]))

    # -- formatting ----------------------------------------------------------

    def decimal(self, digits: int = 10) -> str:
        return mp.nstr(self.mid, digits)

    def bounds_str(self, digits: int = 17) -> tuple[str, str]:
        return mp.nstr(self.lo, digits), mp.nstr(self.hi, digits)

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"Interval[{mp.nstr(self.lo, 12)}, {mp.nstr(self.hi, 12)}]"

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self._v._mpi_ == other._v._mpi_

    def __hash__(self):
        return hash(self._v._mpi_)


# -- elementary functions (outward rounded) -----------------------------------

def i_sqrt(x: Interval) -> Interval:
    return Interval(iv.sqrt(_ivmpf(x)))


def i_exp(x: Interval) -> Interval:
    return Interval(iv.exp(_ivmpf(x)))


def i_log(x: Interval) -> Interval:
    return Interval(iv.log(_ivmpf(x)))


def i_cos(x: Interval) -> Interval:
    return Interval(iv.cos(_ivmpf(x)))


def i_sin(x: Interval) -> Interval:
    return Interval(iv.sin(_ivmpf(x)))


def i_cosh(x: Interval) -> Interval:
    e = iv.exp(_ivmpf(x))
    return Interval((e + 1 / e) / 2)


def i_sinh(x: Interval) -> Interval:
    e = iv.exp(_ivmpf(x))
    return Interval((e - 1 / e) / 2)


def i_acosh(x: Interval, clamp: bool = False) -> Interval:
    """acosh enclosure; clamp=True truncates a lower endpoint below 1 to 1."""
    v = _ivmpf(x)
    if v.b < 1:
        raise ValueError("acosh argument certainly below 1")
    if v.a < 1:
        if not clamp:
            raise ValueError("acosh argument enclosure dips below 1 (pass clamp=True)")
        v = iv.mpf([1, v.b])
    t = v ** 2 - 1
    if t.a < 0:
        t = iv.mpf([0, max(t.b, mp.mpf(0))])
    return Interval(iv.log(v + iv.sqrt(t)))


def i_pow(base: Interval, exponent) -> Interval:
    return Interval(base) ** exponent


# -- adaptive precision drivers ------------------------------------------------

def eval_to_width(fn: Callable[[], Interval], width: Fraction,
                  start_bits: int = DEFAULT_PREC, cap_bits: int = PREC_CAP) -> Interval:
    """Re-evaluate fn at doubling precision until its width is <= width."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    bits = start_bits
    while True:
        with workprec(bits):
            val = fn()
        if val.width_fraction <= width:
            return val
        if bits >= cap_bits:
            raise PrecisionCapError(
                f"target width {width} not reached at precision cap {cap_bits} "
                f"(got {val.width_fraction})")
        bits *= 2


def decide(fn: Callable[[], Optional[int]],
           start_bits: int = DEFAULT_PREC, cap_bits: int = PREC_CAP) -> Optional[int]:
    """Run a tri-state predicate at doubling precision; None means undecided at cap."""
    bits = start_bits
    while True:
        with workprec(bits):
            out = fn()
        if out is not None:
            return out
        if bits >= cap_bits:
            return None
        bits *= 2
