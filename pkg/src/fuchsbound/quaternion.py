"""Quaternion algebras (a,b/k), orders, and the real matrix embedding.

The algebra has basis 1, i, j, ij with i^2 = a, j^2 = b, ij = -ji.  Over Q,
ramification is computed from Hilbert symbols in closed form; over larger
totally real fields the caller asserts ramification data and the reports
record the assertion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .halfplane import Mat2
from .numberfield import FieldElement, NumberField, QuadExt


# -- Hilbert symbols over Q ----------------------------------------------------

def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ValueError("Legendre symbol of a multiple of p")
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def _split_valuation(q: Fraction, p: int) -> tuple[int, Fraction]:
    """q = p^e * u with u a p-adic unit; returns (e, u)."""
    if q == 0:
        raise ValueError("zero has no valuation decomposition")
    e = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        e += 1
    while den % p == 0:
        den //= p
        e -= 1
    return e, Fraction(num, den)


def _unit_mod(u: Fraction, modulus: int) -> int:
    num = u.numerator % modulus
    den = u.denominator % modulus
    return (num * pow(den, -1, modulus)) % modulus


def hilbert_symbol(a, b, place) -> int:
    """Hilbert symbol (a, b) at a rational place (a prime, or "inf").

    +1 iff z^2 = a*x^2 + b*y^2 has a nontrivial solution over the completion.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol requires nonzero arguments")
    if place in ("inf", "infinity", None):
        return -1 if (a < 0 and b < 0) else 1
    p = int(place)
    if p < 2 or not sympy.isprime(p):
        raise ValueError(f"place must be a prime or 'inf', got {place}")
    alpha, u = _split_valuation(a, p)
    beta, v = _split_valuation(b, p)
    if p != 2:
        eps_p = (p - 1) // 2
        sign = -1 if (alpha * beta * eps_p) % 2 else 1
        if beta % 2:
            sign *= _legendre(_unit_mod(u, p), p)
        if alpha % 2:
            sign *= _legendre(_unit_mod(v, p), p)
        return sign
    u8 = _unit_mod(u, 8)
    v8 = _unit_mod(v, 8)
    eps = lambda w: ((w - 1) // 2) % 2
    omega = lambda w: ((w * w - 1) // 8) % 2
    expo = eps(u8) * eps(v8) + alpha * omega(v8) + beta * omega(u8)
    return -1 if expo % 2 else 1


@dataclass(frozen=True)
class RamificationSet:
    """Places of Q where the algebra (a,b/Q) is ramified."""

    finite_places: tuple[int, ...]
    infinite_ramified: bool

    @property
    def count(self) -> int:
        return len(self.finite_places) + (1 if self.infinite_ramified else 0)

    def is_division(self) -> bool:
        return self.count > 0

    def places(self) -> list:
        out: list = list(self.finite_places)
        if self.infinite_ramified:
            out.append("inf")
        return out


def ramification_set(a, b) -> RamificationSet:
    """All ramified places of (a,b/Q); only primes dividing 2ab need checking."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("ramification requires nonzero arguments")
    primes = {2}
    for q in (a, b):
        primes |= set(sympy.factorint(abs(q.numerator)).keys())
        primes |= set(sympy.factorint(q.denominator).keys())
    primes.discard(1)
    finite = tuple(sorted(p for p in primes if hilbert_symbol(a, b, p) == -1))
    infinite = hilbert_symbol(a, b, "inf") == -1
    rs = RamificationSet(finite, infinite)
    if rs.count % 2:
        raise ArithmeticError(f"odd ramification count for ({a},{b}): {rs}")
    return rs


# -- the algebra ----------------------------------------------------------------

class QuatAlgebra:
    """(a, b / k): basis 1, i, j, ij with i^2 = a, j^2 = b, ij = -ji."""

    def __init__(self, field: NumberField, a, b):
        self.field = field
        self.a = a if isinstance(a, FieldElement) else field.from_rational(a)
        self.b = b if isinstance(b, FieldElement) else field.from_rational(b)
        if self.a.is_zero() or self.b.is_zero():
            raise ValueError("a and b must be nonzero")
        self._place_signs = None

    @classmethod
    def over_q(cls, a, b) -> "QuatAlgebra":
        return cls(NumberField.rationals(), a, b)

    def __eq__(self, other):
        return (isinstance(other, QuatAlgebra) and self.field == other.field
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def __repr__(self):
        return f"QuatAlgebra(a={self.a!r}, b={self.b!r} / {self.field!r})"

    # -- real place signs -----------------------------------------------------

    def real_place_signs(self) -> list[tuple[int, int]]:
        """(sign a, sign b) at each real place of k, in ascending root order."""
        if self._place_signs is None:
            field = self.field
            signs = []
            for idx in range(field.degree):
                fld = NumberField(field.minpoly, idx, trusted=True)
                sa = fld.element(self.a.coords).sign()
                sb = fld.element(self.b.coords).sign()
                signs.append((sa, sb))
            self._place_signs = signs
        return self._place_signs

    def is_split_at_distinguished(self) -> bool:
        sa, sb = self.real_place_signs()[self.field.place_index]
        return not (sa < 0 and sb < 0)

    def is_fuchsian_presentation(self) -> bool:
        """Split at the distinguished real place, ramified at every other one."""
        signs = self.real_place_signs()
        for idx, (sa, sb) in enumerate(signs):
            ram = sa < 0 and sb < 0
            if idx == self.field.place_index and ram:
                return False
            if idx != self.field.place_index and not ram:
                return False
        return True

    def normalize_split(self) -> "QuatAlgebra":
        """Presentation with a > 0 at the distinguished place ((a,b) ~ (b,a))."""
        sa, _ = self.real_place_signs()[self.field.place_index]
        if sa > 0:
            return self
        if not self.is_split_at_distinguished():
            raise ValueError("algebra is ramified at the distinguished real place")
        return QuatAlgebra(self.field, self.b, self.a)

    def one(self) -> "QuatElement":
        return self.element([1, 0, 0, 0])

    def element(self, coords: Sequence) -> "QuatElement":
        cs = tuple(c if isinstance(c, FieldElement) else self.field.from_rational(c)
                   for c in coords)
        if len(cs) != 4:
            raise ValueError("quaternion elements need 4 coordinates")
        return QuatElement(self, cs)


@dataclass(frozen=True)
class QuatElement:
    """x0 + x1*i + x2*j + x3*ij with field-element coordinates."""

    algebra: QuatAlgebra
    coords: tuple[FieldElement, FieldElement, FieldElement, FieldElement]

    def _check(self, other: "QuatElement"):
        if self.algebra != other.algebra:
            raise ValueError("elements of different quaternion algebras")

    def __add__(self, other):
        self._check(other)
        return QuatElement(self.algebra,
                           tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return QuatElement(self.algebra,
                           tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return QuatElement(self.algebra, tuple(-c for c in self.coords))

    def __mul__(self, other):
        self._check(other)
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coords
        y0, y1, y2, y3 = other.coords
        return QuatElement(self.algebra, (
            x0 * y0 + a * (x1 * y1) + b * (x2 * y2) - a * b * (x3 * y3),
            x0 * y1 + x1 * y0 - b * (x2 * y3) + b * (x3 * y2),
            x0 * y2 + x2 * y0 + a * (x1 * y3) - a * (x3 * y1),
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ))

    def conj(self) -> "QuatElement":
        x0, x1, x2, x3 = self.coords
        return QuatElement(self.algebra, (x0, -x1, -x2, -x3))

    def trd(self) -> FieldElement:
        return self.coords[0] + self.coords[0]

    def nrd(self) -> FieldElement:
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.coords
        return x0 * x0 - a * (x1 * x1) - b * (x2 * x2) + a * b * (x3 * x3)

    def inverse_unit(self) -> "QuatElement":
        """Inverse of a reduced-norm-1 element (its conjugate)."""
        if self.nrd() != 1:
            raise ValueError("inverse_unit requires nrd = 1")
        return self.conj()

    def is_one(self) -> bool:
        x0, x1, x2, x3 = self.coords
        return x0 == 1 and x1.is_zero() and x2.is_zero() and x3.is_zero()

    def is_pm_one(self) -> bool:
        return self.is_one() or (-self).is_one()

    def __eq__(self, other):
        if not isinstance(other, QuatElement):
            return NotImplemented
        return self.algebra == other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        names = ("", "i", "j", "ij")
        parts = [f"{c!r}{n}" for c, n in zip(self.coords, names) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


def quat_arith(x: QuatElement, y: QuatElement | None, op: str):
    """Uniform dispatch: mul, conj, trd, nrd."""
    if op == "mul":
        return x * y
    if op == "conj":
        return x.conj()
    if op == "trd":
        return x.trd()
    if op == "nrd":
        return x.nrd()
    raise ValueError(f"unknown operation {op!r}")


# -- orders ------------------------------------------------------------------------

class QuatOrder:
    """Z-lattice spanned by 4 basis quaternions, closed under multiplication.

    Desk-scale restriction: basis coordinates in (1, i, j, ij) are rational, so
    membership reduces to integrality of the change-of-basis solution.
    """

    def __init__(self, algebra: QuatAlgebra, basis: Sequence[QuatElement] | None = None,
                 check: bool = True):
        self.algebra = algebra
        if basis is None:
            basis = [algebra.element([1, 0, 0, 0]), algebra.element([0, 1, 0, 0]),
                     algebra.element([0, 0, 1, 0]), algebra.element([0, 0, 0, 1])]
        self.basis = tuple(basis)
        if len(self.basis) != 4:
            raise ValueError("an order basis has exactly 4 elements")
        rows = []
        for e in self.basis:
            row = []
            for c in e.coords:
                if not c.is_rational():
                    raise ValueError("desk-scale orders need rational basis coordinates")
                row.append(c.as_fraction())
            rows.append(row)
        self._basis_matrix = rows            # rows = basis elements in coords (1,i,j,ij)
        self._inv_t = _invert4(_transpose(rows))   # maps quaternion coords -> lattice coords
        if self._inv_t is None:
            raise ValueError("singular order basis")
        if check:
            self._verify_order()

    @classmethod
    def natural(cls, algebra: QuatAlgebra) -> "QuatOrder":
        return cls(algebra, None, check=False)

    @classmethod
    def from_rational_rows(cls, algebra: QuatAlgebra, rows: Sequence[Sequence]) -> "QuatOrder":
        basis = [algebra.element([Fraction(c) for c in row]) for row in rows]
        return cls(algebra, basis)

    @property
    def basis_rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self._basis_matrix]

    def coordinates(self, x: QuatElement) -> tuple[Fraction, ...] | None:
        """Lattice coordinates of x, or None if x has irrational quaternion coords."""
        vals = []
        for c in x.coords:
            if not c.is_rational():
                return None
            vals.append(c.as_fraction())
        return tuple(sum(self._inv_t[r][k] * vals[k] for k in range(4)) for r in range(4))

    def contains(self, x: QuatElement) -> bool:
        if x.algebra != self.algebra:
            raise ValueError("element of a different algebra")
        n = self.coordinates(x)
        if n is None:
            return False
        return all(c.denominator == 1 for c in n)

    def element_from_coordinates(self, n: Sequence[int]) -> QuatElement:
        acc = None
        for c, e in zip(n, self.basis):
            term = self.algebra.element([Fraction(c) * v.as_fraction() for v in e.coords])
            acc = term if acc is None else acc + term
        return acc

    def _verify_order(self):
        if not self.contains(self.algebra.one()):
            raise ValueError("order does not contain 1")
        for bi in self.basis:
            for bj in self.basis:
                if not self.contains(bi * bj):
                    raise ValueError(
                        f"lattice not closed under multiplication: {bi!r} * {bj!r}")

    def gram_matrix(self) -> list[list[Fraction]]:
        """G with nrd(sum n_r b_r) = n^T G n (requires rational a, b)."""
        a = self.algebra.a.as_fraction()
        b = self.algebra.b.as_fraction()
        diag = [Fraction(1), -a, -b, a * b]
        t = self._basis_matrix
        g = [[Fraction(0)] * 4 for _ in range(4)]
        for r in range(4):
            for s in range(4):
                g[r][s] = sum(diag[k] * t[r][k] * t[s][k] for k in range(4))
        return g

    def __repr__(self):
        return f"QuatOrder(basis={self._basis_matrix})"


def _transpose(m):
    return [[m[j][i] for j in range(len(m))] for i in range(len(m[0]))]


def _invert4(m):
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# -- the matrix embedding -----------------------------------------------------------

def embed_matrix(x: QuatElement) -> Mat2:
    """Standard embedding into M_2(R) at the distinguished split real place.

    rho(x) = x0*I + x1*[[s,0],[0,-s]] + x2*[[0,1],[b,0]] + x3*[[0,s],[-b*s,0]]
    with s = sqrt(a); requires a > 0 at the distinguished place.
    """
    alg = x.algebra
    if alg.a.sign() <= 0:
        raise ValueError(
            "embedding needs a > 0 at the distinguished place; use normalize_split()")
    a, b = alg.a, alg.b
    x0, x1, x2, x3 = x.coords
    e11 = QuadExt(x0, x1, a)
    e12 = QuadExt(x2, x3, a)
    e21 = QuadExt(b * x2, -(b * x3), a)
    e22 = QuadExt(x0, -x1, a)
    return Mat2.from_exact(e11, e12, e21, e22)
