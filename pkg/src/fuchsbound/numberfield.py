"""Totally real number fields with a distinguished real embedding.

Elements are power-basis coordinate vectors with exact rational arithmetic
modulo the defining polynomial.  The distinguished embedding sends the
generator to a chosen real root (ascending order); images are produced as
certified interval enclosures of any requested width.

QuadExt models values u + v*sqrt(r) with u, v, r in the field -- the exact
form taken by entries of the standard matrix embedding of a quaternion
algebra split at the distinguished place.  Signs of such values are decided
exactly, which is what certified norm comparisons in the enumeration engine
rest on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import sympy

from .algebraic import RealAlgebraic, is_irreducible
from .intervals import Interval, i_sqrt, workprec
from .polynomials import (IntPolynomial, _poly_divmod_q, _strip, _to_frac,
                          count_real_roots, isolate_real_roots)


class NumberField:
    """Q(alpha) for alpha a chosen real root of an irreducible totally real polynomial."""

    def __init__(self, minpoly: IntPolynomial | Sequence[int], place_index: int = 0,
                 trusted: bool = False):
        if not isinstance(minpoly, IntPolynomial):
            minpoly = IntPolynomial(minpoly)
        minpoly = minpoly.primitive()
        if minpoly.degree < 1:
            raise ValueError("defining polynomial must have degree >= 1")
        if not trusted and not is_irreducible(minpoly):
            raise ValueError(f"defining polynomial {minpoly} is reducible")
        n_real = count_real_roots(minpoly)
        if n_real != minpoly.degree:
            raise ValueError(
                f"field is not totally real: {n_real} of {minpoly.degree} roots are real")
        if not 0 <= place_index < minpoly.degree:
            raise ValueError(f"place_index {place_index} out of range")
        self.minpoly = minpoly
        self.place_index = place_index
        self.trusted = trusted
        roots = isolate_real_roots(minpoly, Fraction(1, 2 ** 16))
        self._root = RealAlgebraic(minpoly, *roots[place_index], _verified=True)
        self._minpoly_frac = _to_frac(minpoly.coeffs)

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls(IntPolynomial((0, 1)), 0, trusted=True)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def generator_root(self) -> RealAlgebraic:
        return self._root

    def __eq__(self, other):
        return (isinstance(other, NumberField)
                and self.minpoly == other.minpoly
                and self.place_index == other.place_index)

    def __hash__(self):
        return hash((self.minpoly.coeffs, self.place_index))

    def __repr__(self):
        return f"NumberField({self.minpoly}, place={self.place_index})"

    # -- element constructors ------------------------------------------------

    def element(self, coords: Iterable) -> "FieldElement":
        cs = [Fraction(c) for c in coords]
        if len(cs) > self.degree:
            raise ValueError("too many coordinates")
        cs += [Fraction(0)] * (self.degree - len(cs))
        return FieldElement(self, tuple(cs))

    def from_rational(self, q) -> "FieldElement":
        return self.element([Fraction(q)])

    @property
    def zero(self) -> "FieldElement":
        return self.from_rational(0)

    @property
    def one(self) -> "FieldElement":
        return self.from_rational(1)

    @property
    def generator(self) -> "FieldElement":
        if self.degree == 1:
            # the generator is the rational root itself
            return self.from_rational(self._root.as_fraction())
        return self.element([0, 1])


@dataclass(frozen=True)
class FieldElement:
    """Element of a NumberField in power-basis coordinates (exact rationals)."""

    owner: NumberField
    coords: tuple[Fraction, ...]

    def _check(self, other: "FieldElement"):
        if self.owner != other.owner:
            raise ValueError("elements belong to different fields")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    # -- ring operations --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return FieldElement(self.owner, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        other = self._coerce(other)
        self._check(other)
        return FieldElement(self.owner, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return FieldElement(self.owner, tuple(-a for a in self.coords))

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        prod = [Fraction(0)] * (2 * self.owner.degree - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        _, rem = _poly_divmod_q(prod, self.owner._minpoly_frac)
        rem = list(rem) + [Fraction(0)] * (self.owner.degree - len(rem))
        return FieldElement(self.owner, tuple(rem[: self.owner.degree]))

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero field element")
        # extended Euclid: s*self + t*minpoly = 1 in Q[x]
        a = _strip(list(self.coords))
        b = list(self.owner._minpoly_frac)
        s0, s1 = [Fraction(1)], [Fraction(0)]
        r0, r1 = a, b
        while _strip(list(r1)):
            q, r = _poly_divmod_q(r0, r1)
            r0, r1 = r1, r
            qs1 = _poly_mul_q(q, s1)
            s0, s1 = s1, _poly_sub_q(s0, qs1)
        # r0 = gcd (a nonzero constant, since minpoly is irreducible)
        const = r0[0]
        inv = [c / const for c in s0]
        _, rem = _poly_divmod_q(inv, self.owner._minpoly_frac)
        rem = list(rem) + [Fraction(0)] * (self.owner.degree - len(rem))
        return FieldElement(self.owner, tuple(rem[: self.owner.degree]))

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.owner.from_rational(other)
        raise TypeError(f"cannot coerce {type(other).__name__} into {self.owner}")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == Fraction(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.owner == other.owner and self.coords == other.coords

    def __hash__(self):
        return hash((self.owner, self.coords))

    # -- embedding ----------------------------------------------------------------

    def embed(self, width: Fraction = Fraction(1, 2 ** 53)) -> Interval:
        """Enclosure of the image under the distinguished real embedding."""
        width = Fraction(width)
        bits = 64
        if self.is_rational():
            while True:
                with workprec(bits):
                    out = Interval(self.coords[0])
                if out.width_fraction <= width:
                    return out
                bits *= 2
        scale = sum(abs(c) for c in self.coords[1:])
        root = self.owner._root
        root_width = width / (2 * scale * max(1, len(self.coords)))
        while True:
            with workprec(bits):
                x = root.interval(root_width)
                acc = Interval(0)
                for c in reversed(self.coords):
                    acc = acc * x + Interval(c)
            if acc.width_fraction <= width:
                return acc
            root_width /= 4
            bits *= 2

    def sign(self) -> int:
        """Exact sign under the distinguished embedding."""
        if self.is_zero():
            return 0
        if self.is_rational():
            c = self.coords[0]
            return (c > 0) - (c < 0)
        width = Fraction(1, 2 ** 20)
        while True:
            s = self.embed(width).sign()
            if s is not None:
                return s
            width /= 2 ** 10

    def cmp(self, other) -> int:
        diff = self - self._coerce(other)
        return diff.sign()

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __abs__(self):
        return self if self.sign() >= 0 else -self

    def __float__(self):
        return float(self.embed(Fraction(1, 2 ** 60)))

    # -- algebraic data --------------------------------------------------------------

    def minpoly_over_q(self) -> IntPolynomial:
        """Minimal polynomial over Q of this element's embedded value."""
        if self.is_rational():
            q = self.coords[0]
            return IntPolynomial((-q.numerator, q.denominator))
        x, y = sympy.symbols("x y")
        d = self.owner.degree
        fld = sympy.Poly(list(reversed(self.owner.minpoly.coeffs)), x)
        elt = sum(sympy.Rational(c.numerator, c.denominator) * x ** i
                  for i, c in enumerate(self.coords))
        res = sympy.resultant(fld.as_expr(), y - elt, x)
        poly = sympy.Poly(sympy.expand(res), y)
        _, facs = poly.factor_list()
        enc = self.embed(Fraction(1, 2 ** 24))
        lo, hi = enc.lo_fraction, enc.hi_fraction
        cands = []
        for f, _ in facs:
            ip = IntPolynomial([int(c) for c in reversed(f.all_coeffs())])
            if ip.degree < 1:
                continue
            n = count_real_roots(ip, lo, hi) + (1 if ip.sign_at(lo) == 0 else 0)
            if n > 0:
                cands.append(ip)
        if len(cands) == 1:
            return cands[0].primitive()
        # ambiguity: tighten the enclosure and retry
        tight = self.embed(Fraction(1, 2 ** 80))
        lo, hi = tight.lo_fraction, tight.hi_fraction
        cands = [ip for ip in cands
                 if count_real_roots(ip, lo, hi) + (1 if ip.sign_at(lo) == 0 else 0) > 0]
        if len(cands) != 1:
            raise ArithmeticError("could not separate minimal polynomial candidates")
        return cands[0].primitive()

    def is_integral(self) -> bool:
        """Whether the element is an algebraic integer."""
        mp = self.minpoly_over_q()
        return abs(mp.leading) == 1

    def __repr__(self):
        if self.is_rational():
            return str(self.coords[0])
        return "FieldElement" + str(tuple(str(c) for c in self.coords))


def _poly_mul_q(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub_q(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
            for i in range(n)]


@dataclass(frozen=True)
class QuadExt:
    """Exact value u + v*sqrt(r) with u, v, r field elements, r > 0 at the place.

    Used for matrix entries of the standard quaternion embedding: closed under
    ring operations for a fixed radicand, with exact sign decisions.
    """

    u: FieldElement
    v: FieldElement
    rad: FieldElement

    @classmethod
    def rational(cls, field: NumberField, q) -> "QuadExt":
        z = field.zero
        return cls(field.from_rational(q), z, z)

    @classmethod
    def from_field(cls, u: FieldElement) -> "QuadExt":
        z = u.owner.zero
        return cls(u, z, z)

    @property
    def field(self) -> NumberField:
        return self.u.owner

    def _merge_rad(self, other: "QuadExt") -> FieldElement:
        if self.v.is_zero():
            return other.rad
        if other.v.is_zero():
            return self.rad
        if self.rad != other.rad:
            raise ValueError("incompatible radicands")
        return self.rad

    def __add__(self, other: "QuadExt") -> "QuadExt":
        rad = self._merge_rad(other)
        return QuadExt(self.u + other.u, self.v + other.v, rad)

    def __sub__(self, other: "QuadExt") -> "QuadExt":
        rad = self._merge_rad(other)
        return QuadExt(self.u - other.u, self.v - other.v, rad)

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.u, -self.v, self.rad)

    def __mul__(self, other: "QuadExt") -> "QuadExt":
        rad = self._merge_rad(other)
        u = self.u * other.u
        if not (self.v.is_zero() or other.v.is_zero()):
            u = u + rad * self.v * other.v
        v = self.u * other.v + self.v * other.u
        return QuadExt(u, v, rad)

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.v.is_zero()

    def __eq__(self, other):
        if not isinstance(other, QuadExt):
            return NotImplemented
        if self.u != other.u:
            return False
        if self.v.is_zero() and other.v.is_zero():
            return True
        return self.v == other.v and self.rad == other.rad

    def __hash__(self):
        return hash((self.u, self.v))

    def sign(self) -> int:
        """Exact sign of u + v*sqrt(rad) under the distinguished embedding."""
        su = self.u.sign()
        if self.v.is_zero():
            return su
        sv = self.v.sign()
        if su == 0:
            return sv
        if su == sv:
            return su
        # opposite signs: compare u^2 against rad * v^2
        t = (self.u * self.u - self.rad * self.v * self.v).sign()
        return su if t > 0 else (sv if t < 0 else 0)

    def cmp_fraction(self, q) -> int:
        shifted = QuadExt(self.u - self.u.owner.from_rational(q), self.v, self.rad)
        return shifted.sign()

    def abs_cmp_fraction(self, q) -> int:
        """Compare |value| against a nonnegative rational, exactly."""
        if self.sign() >= 0:
            return self.cmp_fraction(q)
        return (-self).cmp_fraction(q)

    def interval(self, width: Fraction = Fraction(1, 2 ** 53)) -> Interval:
        if self.v.is_zero():
            return self.u.embed(width)
        width = Fraction(width)
        w = width / 4
        bits = 64
        while True:
            with workprec(bits):
                out = self.u.embed(w) + self.v.embed(w) * i_sqrt(self.rad.embed(w))
            if out.width_fraction <= width:
                return out
            w /= 16
            bits *= 2

    def sympy_expr(self):
        x = sympy.symbols("x")
        if self.field.degree == 1:
            alpha = sympy.Rational(self.field.generator_root.as_fraction())
        else:
            fld = sympy.Poly(list(reversed(self.field.minpoly.coeffs)), x)
            alpha = sympy.CRootOf(fld, self.field.place_index)

        def emb(fe: FieldElement):
            return sum(sympy.Rational(c.numerator, c.denominator) * alpha ** i
                       for i, c in enumerate(fe.coords))

        expr = emb(self.u)
        if not self.v.is_zero():
            expr = expr + emb(self.v) * sympy.sqrt(emb(self.rad))
        return expr

    def minpoly_over_q(self) -> IntPolynomial:
        if self.v.is_zero():
            return self.u.minpoly_over_q()
        y = sympy.symbols("y")
        mp = sympy.minimal_polynomial(self.sympy_expr(), y)
        return IntPolynomial([int(c) for c in reversed(sympy.Poly(mp, y).all_coeffs())]).primitive()

    def is_rational_value(self) -> bool:
        return self.v.is_zero() and self.u.is_rational()

    def as_fraction(self) -> Fraction:
        if not self.is_rational_value():
            raise ValueError("value is not rational")
        return self.u.as_fraction()

    def __float__(self):
        return float(self.interval(Fraction(1, 2 ** 53)))

    def __repr__(self):
        if self.v.is_zero():
            return repr(self.u)
        return f"({self.u!r} + {self.v!r}*sqrt({self.rad!r}))"
