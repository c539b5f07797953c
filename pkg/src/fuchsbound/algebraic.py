"""Exact real algebraic numbers as (irreducible minimal polynomial, isolating interval).

Comparisons are decisive: distinct numbers separate after finitely many
bisections, and equality is recognized exactly from the normalized minimal
polynomial plus a one-root count on the overlap of the enclosures.
"""

from __future__ import annotations

import threading
from fractions import Fraction

import sympy

from .intervals import Interval
from .polynomials import (IntPolynomial, count_real_roots, isolate_real_roots,
                          sturm_chain, sturm_variations)

_x = sympy.symbols("x")


def _sympy_factors(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    poly = sympy.Poly(list(reversed(p.coeffs)), _x)
    _, facs = poly.factor_list()
    return [(IntPolynomial([int(c) for c in reversed(f.all_coeffs())]), m) for f, m in facs]


def is_irreducible(p: IntPolynomial) -> bool:
    if p.degree < 1:
        return False
    return sympy.Poly(list(reversed(p.coeffs)), _x).is_irreducible


class RealAlgebraic:
    """A real root of an irreducible integer polynomial, refinable on demand."""

    __slots__ = ("minpoly", "_lo", "_hi", "_chain", "_lock")

    def __init__(self, minpoly: IntPolynomial, lo: Fraction, hi: Fraction,
                 _verified: bool = False):
        minpoly = minpoly.primitive()
        if not _verified:
            if not is_irreducible(minpoly):
                raise ValueError(f"minimal polynomial {minpoly} is not irreducible")
            if count_real_roots(minpoly, Fraction(lo) - 0, Fraction(hi)) != 1 and \
               minpoly.sign_at(Fraction(lo)) != 0:
                raise ValueError("enclosure does not isolate exactly one root")
        self.minpoly = minpoly
        self._lo = Fraction(lo)
        self._hi = Fraction(hi)
        self._chain = None
        self._lock = threading.Lock()

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_rational(cls, q) -> "RealAlgebraic":
        q = Fraction(q)
        return cls(IntPolynomial((-q.numerator, q.denominator)), q, q, _verified=True)

    @classmethod
    def root_of(cls, p: IntPolynomial, enclosure: tuple[Fraction, Fraction]) -> "RealAlgebraic":
        """The unique root of p inside the given (closed) rational enclosure.

        p need not be irreducible; the matching irreducible factor is selected.
        """
        lo, hi = Fraction(enclosure[0]), Fraction(enclosure[1])
        counts = []
        for fac, _ in _sympy_factors(p):
            if fac.degree < 1:
                continue
            n = count_real_roots(fac, lo, hi) + (1 if fac.sign_at(lo) == 0 else 0)
            counts.append((fac, n))
        total = sum(n for _, n in counts)
        if total != 1:
            raise ValueError(
                f"enclosure [{lo}, {hi}] contains {total} roots of {p}, expected exactly 1")
        fac = next(f for f, n in counts if n == 1)
        return cls(fac, lo, hi, _verified=True)

    @classmethod
    def real_roots(cls, p: IntPolynomial, width: Fraction = Fraction(1, 2 ** 32)) -> list["RealAlgebraic"]:
        """All distinct real roots of p, ascending."""
        out = []
        for fac, _ in _sympy_factors(p):
            if fac.degree < 1:
                continue
            for lo, hi in isolate_real_roots(fac, width):
                out.append(cls(fac, lo, hi, _verified=True))
        out.sort()
        return out

    def __getstate__(self):
        return (self.minpoly, self._lo, self._hi)

    def __setstate__(self, state):
        self.minpoly, self._lo, self._hi = state
        self._chain = None
        self._lock = threading.Lock()

    # -- refinement -----------------------------------------------------------

    def _sturm(self):
        if self._chain is None:
            self._chain = sturm_chain(self.minpoly)
        return self._chain

    def refine(self):
        """Halve the enclosure width (no-op for exact rational values)."""
        with self._lock:
            lo, hi = self._lo, self._hi
            if lo == hi:
                return
            mid = (lo + hi) / 2
            if self.minpoly.degree == 1:
                q = Fraction(-self.minpoly.coeffs[0], self.minpoly.coeffs[1])
                self._lo = self._hi = q
                return
            chain = self._sturm()
            # irreducible of degree >= 2 has no rational roots, so signs are nonzero
            if sturm_variations(chain, lo) - sturm_variations(chain, mid) == 1:
                self._hi = mid
            else:
                self._lo = mid

    def refine_to(self, width: Fraction):
        width = Fraction(width)
        while self._hi - self._lo > width:
            self.refine()

    @property
    def enclosure(self) -> tuple[Fraction, Fraction]:
        return self._lo, self._hi

    def interval(self, width: Fraction = Fraction(1, 2 ** 53)) -> Interval:
        self.refine_to(width)
        return Interval(self._lo, self._hi)

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    def is_rational(self) -> bool:
        return self.minpoly.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational value")
        return Fraction(-self.minpoly.coeffs[0], self.minpoly.coeffs[1])

    # -- comparisons -----------------------------------------------------------

    def cmp_fraction(self, q: Fraction) -> int:
        q = Fraction(q)
        if self.is_rational():
            v = self.as_fraction()
            return (v > q) - (v < q)
        # q is never a root of an irreducible polynomial of degree >= 2
        while self._lo <= q <= self._hi:
            self.refine()
        return 1 if self._lo > q else -1

    def _canonical_index(self) -> int:
        """Index of this number among the ascending real roots of its minpoly.

        The canonical isolating intervals have rational endpoints, and roots of
        an irreducible polynomial of degree >= 2 are irrational, so refining
        eventually places the enclosure strictly inside exactly one of them.
        """
        ivs = isolate_real_roots(self.minpoly, Fraction(1, 4))
        while True:
            for idx, (clo, chi) in enumerate(ivs):
                if clo < self._lo and self._hi < chi:
                    return idx
            self.refine()

    def cmp(self, other: "RealAlgebraic") -> int:
        if self is other:
            return 0
        if self.minpoly == other.minpoly:
            if self.is_rational():
                return 0
            i, j = self._canonical_index(), other._canonical_index()
            return (i > j) - (i < j)
        # distinct irreducible minimal polynomials never share a root
        while not (self._hi < other._lo or other._hi < self._lo):
            self.refine()
            other.refine()
        return -1 if self._hi < other._lo else 1

    def __eq__(self, other):
        if isinstance(other, RealAlgebraic):
            return self.cmp(other) == 0
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.as_fraction() == Fraction(other)
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.cmp_fraction(Fraction(other)) < 0
        return self.cmp(other) < 0

    def __le__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.cmp_fraction(Fraction(other)) <= 0
        return self.cmp(other) <= 0

    def __gt__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.cmp_fraction(Fraction(other)) > 0
        return self.cmp(other) > 0

    def __ge__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.cmp_fraction(Fraction(other)) >= 0
        return self.cmp(other) >= 0

    def __hash__(self):
        return hash(self.minpoly.coeffs)

    def __float__(self):
        self.refine_to(Fraction(1, 2 ** 60))
        return float((self._lo + self._hi) / 2)

    def __repr__(self):
        return f"RealAlgebraic({self.minpoly}, ~{float(self):.12g})"
