"""2x2 real matrices acting on the upper half-plane.

Matrices carry either exact entries (values u + v*sqrt(r) over a totally real
field, the form produced by the quaternion embedding) or plain interval
entries.  Exact matrices multiply, compare, and classify exactly; interval
matrices fall back to certified interval tests that report an undecided
outcome at the precision cap instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .algebraic import RealAlgebraic
from .intervals import (Interval, PrecisionCapError, i_acosh, i_log, i_sqrt,
                        workprec)
from .numberfield import NumberField, QuadExt
from .polynomials import IntPolynomial, poly_from_fractions

Entry = Union[QuadExt, Interval]


class UndecidedError(PrecisionCapError):
    """A geometric predicate stayed undecided at the precision cap."""


class Mat2:
    """Real 2x2 matrix; exact when all entries are QuadExt values."""

    __slots__ = ("e11", "e12", "e21", "e22", "exact")

    def __init__(self, e11: Entry, e12: Entry, e21: Entry, e22: Entry):
        self.e11, self.e12, self.e21, self.e22 = e11, e12, e21, e22
        self.exact = all(isinstance(e, QuadExt) for e in (e11, e12, e21, e22))

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_exact(cls, e11: QuadExt, e12: QuadExt, e21: QuadExt, e22: QuadExt) -> "Mat2":
        return cls(e11, e12, e21, e22)

    @classmethod
    def from_rationals(cls, rows, field: NumberField | None = None) -> "Mat2":
        field = field or NumberField.rationals()
        (a, b), (c, d) = rows
        return cls(*(QuadExt.rational(field, Fraction(v)) for v in (a, b, c, d)))

    @classmethod
    def from_intervals(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(Interval(a), Interval(b), Interval(c), Interval(d))

    @classmethod
    def identity(cls, field: NumberField | None = None) -> "Mat2":
        return cls.from_rationals(((1, 0), (0, 1)), field)

    def entries(self) -> tuple[Entry, Entry, Entry, Entry]:
        return self.e11, self.e12, self.e21, self.e22

    def entry_intervals(self, width: Fraction = Fraction(1, 2 ** 53)) -> list[Interval]:
        out = []
        for e in self.entries():
            out.append(e.interval(width) if isinstance(e, QuadExt) else e)
        return out

    # -- arithmetic -------------------------------------------------------------

    def __mul__(self, other: "Mat2") -> "Mat2":
        if self.exact and other.exact:
            return Mat2(
                self.e11 * other.e11 + self.e12 * other.e21,
                self.e11 * other.e12 + self.e12 * other.e22,
                self.e21 * other.e11 + self.e22 * other.e21,
                self.e21 * other.e12 + self.e22 * other.e22)
        a = self.entry_intervals()
        b = other.entry_intervals()
        return Mat2(
            a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3])

    def __neg__(self) -> "Mat2":
        return Mat2(-self.e11, -self.e12, -self.e21, -self.e22)

    def adjugate(self) -> "Mat2":
        """Inverse for determinant-1 matrices."""
        return Mat2(self.e22, -self.e12, -self.e21, self.e11)

    def power(self, k: int) -> "Mat2":
        if k < 0:
            return self.adjugate().power(-k)
        out = None
        base = self
        while True:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if not k:
                break
            base = base * base
        return out if out is not None else Mat2.identity()

    def trace(self) -> Entry:
        return self.e11 + self.e22

    def det(self) -> Entry:
        return self.e11 * self.e22 - self.e12 * self.e21

    def trace_interval(self, width: Fraction = Fraction(1, 2 ** 53)) -> Interval:
        t = self.trace()
        return t.interval(width) if isinstance(t, QuadExt) else t

    def det_contains_one(self) -> bool:
        d = self.det()
        if isinstance(d, QuadExt):
            return d.cmp_fraction(1) == 0
        return d.contains(1)

    # -- exact predicates ----------------------------------------------------------

    def is_identity(self) -> bool:
        if not self.exact:
            raise ValueError("identity test needs exact entries")
        return (self.e11.cmp_fraction(1) == 0 and self.e22.cmp_fraction(1) == 0
                and self.e12.is_zero() and self.e21.is_zero())

    def is_pm_identity(self) -> bool:
        return self.is_identity() or (-self).is_identity()

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        if self.exact and other.exact:
            return all((a - b).is_zero() for a, b in zip(self.entries(), other.entries()))
        return NotImplemented

    def __hash__(self):
        if not self.exact:
            raise TypeError("interval matrices are unhashable")
        return hash(self.entries())

    def __repr__(self):
        es = self.entry_intervals(Fraction(1, 2 ** 20))
        vals = ", ".join(e.decimal(8) for e in es)
        tag = "exact" if self.exact else "interval"
        return f"Mat2[{tag}]({vals})"


# -- norms ----------------------------------------------------------------------------

def sup_norm_exact(m: Mat2) -> QuadExt:
    """The entry of maximal absolute value, as an exact nonnegative QuadExt."""
    if not m.exact:
        raise ValueError("exact sup-norm needs exact entries")
    best = None
    for e in m.entries():
        ae = e if e.sign() >= 0 else -e
        if best is None or (ae - best).sign() > 0:
            best = ae
    return best


def sup_norm(m: Mat2, width: Fraction = Fraction(1, 2 ** 53)) -> Interval:
    """Enclosure of the L-infinity norm max |m_ij|."""
    if m.exact:
        return sup_norm_exact(m).interval(width)
    out = None
    for e in m.entries():
        ae = abs(e)
        out = ae if out is None else Interval(max(out.lo, ae.lo), max(out.hi, ae.hi))
    return out


# -- isometry classification ------------------------------------------------------------

@dataclass
class IsometryClass:
    kind: str                       # central | elliptic | parabolic | hyperbolic
    u: Optional[RealAlgebraic]      # eigenvalue off the unit circle (hyperbolic)
    order: Optional[int]            # matrix order in SL2 (elliptic/central)
    projective_order: Optional[int] = None   # least k with m^k = +/-1
    note: str = ""


DEFAULT_ORDER_CAP = 512


def classify(m: Mat2, order_cap: int = DEFAULT_ORDER_CAP) -> IsometryClass:
    """Isometry type of a determinant-1 matrix (exact when entries are exact)."""
    if not m.det_contains_one():
        raise ValueError("classification requires determinant 1")
    if m.exact:
        return _classify_exact(m, order_cap)
    return _classify_interval(m)


def _classify_exact(m: Mat2, order_cap: int) -> IsometryClass:
    t = m.trace()
    above = (t - QuadExt.rational(t.field, 2)).sign()
    below = (t + QuadExt.rational(t.field, 2)).sign()
    if above > 0 or below < 0:
        return IsometryClass("hyperbolic", _hyperbolic_eigenvalue(t), None)
    if above == 0 or below == 0:
        if m.is_pm_identity():
            return IsometryClass("central", None, 1 if m.is_identity() else 2,
                                 projective_order=1)
        return IsometryClass("parabolic", None, None,
                             note="parabolic element: contradicts cocompactness")
    order, proj = _elliptic_order(m, order_cap)
    note = "" if order else f"no finite order found within {order_cap} steps"
    return IsometryClass("elliptic", None, order, projective_order=proj, note=note)


def _classify_interval(m: Mat2) -> IsometryClass:
    # interval entries are fixed data: the trace either separates from +/-2 or
    # the classification is genuinely undecided
    c = abs(m.trace()).compare(Interval(2))
    if c is None:
        raise UndecidedError("trace enclosure overlaps +/-2; classification undecided")
    if c > 0:
        return IsometryClass("hyperbolic", None, None,
                             note="interval entries: eigenvalue not extracted")
    return IsometryClass("elliptic", None, None,
                         note="interval entries: order not determined")


def _hyperbolic_eigenvalue(t: QuadExt) -> RealAlgebraic:
    """Root of x^2 - t*x + 1 outside the unit circle, as an exact algebraic number."""
    if t.is_rational_value():
        tr = t.as_fraction()
        charpoly, _ = poly_from_fractions([Fraction(1), -tr, Fraction(1)])
        if tr > 2:
            return RealAlgebraic.root_of(charpoly, (Fraction(1), tr))
        return RealAlgebraic.root_of(charpoly, (tr, Fraction(-1)))
    return _eigenvalue_from_algebraic_trace(t)


def _eigenvalue_from_algebraic_trace(t: QuadExt) -> RealAlgebraic:
    import sympy
    y = sympy.symbols("y")
    mp = sympy.minimal_polynomial(t.sympy_expr(), y)
    z = sympy.symbols("z")
    res = sympy.resultant(mp.subs(y, sympy.symbols("w")),
                          (z ** 2 - sympy.symbols("w") * z + 1), sympy.symbols("w"))
    upoly = IntPolynomial([int(c) for c in reversed(sympy.Poly(res, z).all_coeffs())])
    width = Fraction(1, 2 ** 24)
    while True:
        ti = t.interval(width)
        disc = ti.square() - 4
        if disc.sign() == 1:
            root = (abs(ti) + i_sqrt(disc)) / 2
            if ti.sign() == -1:
                root = -root
            try:
                return RealAlgebraic.root_of(upoly, (root.lo_fraction, root.hi_fraction))
            except ValueError:
                pass
        if width < Fraction(1, 2 ** 4096):
            raise UndecidedError("could not isolate the hyperbolic eigenvalue")
        width = width ** 2


def _elliptic_order(m: Mat2, cap: int) -> tuple[Optional[int], Optional[int]]:
    """(SL2 matrix order, projective order) by exact powers, None past the cap."""
    power = m
    for k in range(1, cap + 1):
        if power.is_identity():
            return k, k
        if (-power).is_identity():
            return 2 * k, k
        power = power * m
    return None, None


def translation_length(m_or_class, width: Fraction = Fraction(1, 2 ** 40)) -> Interval:
    """Enclosure of 2*log|u| for a hyperbolic element."""
    cls = m_or_class if isinstance(m_or_class, IsometryClass) else classify(m_or_class)
    if cls.kind != "hyperbolic":
        raise ValueError(f"translation length undefined for {cls.kind} elements")
    if cls.u is None:
        raise ValueError("no exact eigenvalue available")
    u = cls.u
    width = Fraction(width)
    w, bits = width / 8, 128
    while True:
        with workprec(bits):
            val = 2 * i_log(abs(u.interval(w)))
        if val.width_fraction <= width:
            return val
        if bits >= 1 << 16:
            raise PrecisionCapError("translation length did not reach target width")
        w /= 2 ** 8
        bits *= 2


# -- upper half-plane ----------------------------------------------------------------------

@dataclass(frozen=True)
class HPoint:
    """Point of the upper half-plane with interval coordinates."""

    re: Interval
    im: Interval

    @classmethod
    def of(cls, z) -> "HPoint":
        if isinstance(z, HPoint):
            return z
        if isinstance(z, complex):
            return cls(Interval(z.real), Interval(z.imag))
        if isinstance(z, tuple):
            return cls(Interval(z[0]), Interval(z[1]))
        return cls(Interval(z), Interval(0))

    @classmethod
    def i(cls) -> "HPoint":
        return cls(Interval(0), Interval(1))

    def __repr__(self):
        return f"HPoint({self.re.decimal(8)} + {self.im.decimal(8)}i)"


def mobius_act(m: Mat2, z) -> HPoint:
    """(e11*z + e12) / (e21*z + e22) on the upper half-plane."""
    z = HPoint.of(z)
    if z.im.sign() != 1:
        raise ValueError("point must have positive imaginary part")
    a, b, c, d = m.entry_intervals()
    nr, ni = a * z.re + b, a * z.im
    t, s = c * z.re + d, c * z.im
    den = t.square() + s.square()
    return HPoint((nr * t + ni * s) / den, (ni * t - nr * s) / den)


def hyp_dist(z, w) -> Interval:
    """Hyperbolic distance arccosh(1 + |z-w|^2 / (2 Im z Im w))."""
    z, w = HPoint.of(z), HPoint.of(w)
    num = (z.re - w.re).square() + (z.im - w.im).square()
    x = 1 + num / (2 * z.im * w.im)
    return i_acosh(x, clamp=True)
