"""Integer polynomials with exact real-root isolation.

Coefficients are arbitrary-precision integers stored constant term first.
Root counting uses Sturm sequences over exact rational arithmetic, so
isolation and refinement are deterministic and certified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .intervals import Interval


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, constant term first."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def constant(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def is_monic(self) -> bool:
        return not self.is_zero() and self.leading == 1

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "IntPolynomial":
        if self.is_zero():
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                             for i in range(n))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-c for c in self.coeffs)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def scale(self, k: int) -> "IntPolynomial":
        return IntPolynomial(k * c for c in self.coeffs)

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def divides_exactly(self, other: "IntPolynomial") -> "IntPolynomial | None":
        """Return other / self when the division is exact over the integers."""
        q, r = _poly_divmod_q(_to_frac(other.coeffs), _to_frac(self.coeffs))
        if any(r) or any(c.denominator != 1 for c in q):
            return None
        return IntPolynomial(int(c) for c in q)

    def reciprocal(self) -> "IntPolynomial":
        """x^deg * p(1/x)."""
        return IntPolynomial(reversed(self.coeffs))

    def is_self_reciprocal(self) -> bool:
        return not self.is_zero() and tuple(reversed(self.coeffs)) == self.coeffs

    # -- evaluation -----------------------------------------------------------

    def eval_fraction(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: Fraction) -> int:
        """Exact sign of p(x) for rational x, via integer Horner on q^deg * p(p/q)."""
        p, q = x.numerator, x.denominator
        acc = 0
        qq = 1
        for c in reversed(self.coeffs):
            acc = acc * p + c * qq
            qq *= q
        return (acc > 0) - (acc < 0)

    def eval_interval(self, x: Interval) -> Interval:
        acc = Interval(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- representations --------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x" if abs(c) != 1 else ("x" if c > 0 else "-x"))
            else:
                terms.append(f"{c}*x^{i}" if abs(c) != 1 else (f"x^{i}" if c > 0 else f"-x^{i}"))
        return " + ".join(terms).replace("+ -", "- ")


def poly_from_fractions(coeffs: Sequence[Fraction]) -> tuple[IntPolynomial, int]:
    """Clear denominators; return (integer polynomial, common denominator)."""
    fr = [Fraction(c) for c in coeffs]
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return IntPolynomial(int(c * den) for c in fr), den


# -- exact rational polynomial helpers (internal) -------------------------------

def _to_frac(coeffs) -> list[Fraction]:
    return [Fraction(c) for c in coeffs]


def _strip(cs: list[Fraction]) -> list[Fraction]:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _poly_divmod_q(a: list[Fraction], b: list[Fraction]):
    a = _strip(list(a))
    b = _strip(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = a
    while r and len(r) >= len(b):
        k = len(r) - len(b)
        f = r[-1] / b[-1]
        q[k] = f
        for i, bc in enumerate(b):
            r[k + i] -= f * bc
        r = _strip(r)
    return q, r


def _primitive_int(cs: list[Fraction]) -> tuple[int, ...]:
    """Rescale by a positive rational into a primitive integer vector (sign kept)."""
    cs = _strip(list(cs))
    if not cs:
        return ()
    den = 1
    for c in cs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = math.gcd(*ints)
    return tuple(c // g for c in ints)


def sturm_chain(p: IntPolynomial) -> list[tuple[int, ...]]:
    """Sturm sequence of p (coefficients kept primitive; signs preserved)."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    chain = [_primitive_int(_to_frac(p.coeffs))]
    d = p.derivative()
    if d.is_zero():
        return chain
    chain.append(_primitive_int(_to_frac(d.coeffs)))
    while True:
        _, r = _poly_divmod_q(_to_frac(chain[-2]), _to_frac(chain[-1]))
        if not r:
            break
        chain.append(_primitive_int([-c for c in r]))
        if len(chain[-1]) == 1:
            break
    return chain


def _sign_at_int(coeffs: tuple[int, ...], x: Fraction) -> int:
    p, q = x.numerator, x.denominator
    acc = 0
    qq = 1
    for c in reversed(coeffs):
        acc = acc * p + c * qq
        qq *= q
    return (acc > 0) - (acc < 0)


def _sign_at_inf(coeffs: tuple[int, ...], positive: bool) -> int:
    lead = coeffs[-1]
    if positive or (len(coeffs) - 1) % 2 == 0:
        return (lead > 0) - (lead < 0)
    return (lead < 0) - (lead > 0)


def _variations(signs: Iterable[int]) -> int:
    out, prev = 0, 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            out += 1
        prev = s
    return out


def sturm_variations(chain, x: Fraction | None, positive_inf: bool = True) -> int:
    """Sign-variation count at rational x, or at +/-infinity when x is None."""
    if x is None:
        return _variations(_sign_at_inf(c, positive_inf) for c in chain)
    return _variations(_sign_at_int(c, x) for c in chain)


def count_real_roots(p: IntPolynomial, lo: Fraction | None = None,
                     hi: Fraction | None = None) -> int:
    """Number of distinct real roots of p in (lo, hi]; None endpoint = infinity."""
    sq = squarefree_part(p)
    chain = sturm_chain(sq)
    va = sturm_variations(chain, lo, positive_inf=False)
    vb = sturm_variations(chain, hi, positive_inf=True)
    return va - vb


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return IntPolynomial((1,))
    g = _poly_gcd_q(_to_frac(p.coeffs), _to_frac(p.derivative().coeffs))
    q, _ = _poly_divmod_q(_to_frac(p.coeffs), g)
    return IntPolynomial(_primitive_int(q))


def _poly_gcd_q(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        _, r = _poly_divmod_q(a, b)
        a, b = b, r
        # keep coefficients small
        a = [Fraction(c) for c in _primitive_int(a)]
        b = [Fraction(c) for c in _primitive_int(b)] if b else b
    return a


def cauchy_root_bound(p: IntPolynomial) -> Fraction:
    """B with all real roots of p in [-B, B]."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    lead = abs(p.leading)
    m = max((abs(c) for c in p.coeffs[:-1]), default=0)
    return 1 + Fraction(m, lead)


def isolate_real_roots(p: IntPolynomial, width: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, one per distinct real root, each of width <= width.

    Returned intervals are sorted ascending; an exactly-rational root comes back
    as a degenerate pair [r, r].
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if p.degree == 0:
        return []
    sq = squarefree_part(p)
    chain = sturm_chain(sq)
    bound = cauchy_root_bound(sq)

    def nroots(lo: Fraction, hi: Fraction) -> int:
        return sturm_variations(chain, lo) - sturm_variations(chain, hi)

    total = nroots(-bound, bound)
    isolated: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound, total)]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        nl = nroots(lo, mid)
        stack.append((mid, hi, n - nl))
        stack.append((lo, mid, nl))

    def refine(lo: Fraction, hi: Fraction, stop) -> tuple[Fraction, Fraction]:
        while not stop(lo, hi):
            mid = (lo + hi) / 2
            if sq.sign_at(mid) == 0:
                return mid, mid
            if nroots(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        return lo, hi

    out = [refine(lo, hi, lambda a, b: b - a <= width) for lo, hi in isolated]
    out.sort()
    # Neighbours may touch at a shared bisection point e; the right root lies
    # strictly above e, so pushing the right endpoint up always terminates.
    for i in range(len(out) - 1):
        if out[i][1] >= out[i + 1][0]:
            cut = out[i][1]
            out[i + 1] = refine(*out[i + 1], lambda a, b: a > cut or a == b)
    assert len(out) == total
    return out


def poly_real_roots(p: IntPolynomial, width: Fraction) -> list[Interval]:
    """Certified enclosures of the distinct real roots of p, ascending."""
    return [Interval(Fraction(lo), Fraction(hi))
            for lo, hi in isolate_real_roots(p, Fraction(width))]


# -- cyclotomic machinery ---------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPolynomial:
    """The n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    num = IntPolynomial([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            q = cyclotomic(d).divides_exactly(num)
            assert q is not None
            num = q
    return num


def trace_transform(p: IntPolynomial) -> IntPolynomial:
    """For self-reciprocal p of even degree 2s, the q with p(x)/x^s = q(x + 1/x)."""
    if not p.is_self_reciprocal():
        raise ValueError("polynomial is not self-reciprocal")
    if p.degree % 2 != 0:
        raise ValueError("self-reciprocal transform needs even degree")
    s = p.degree // 2
    # v_k(y) represents x^k + x^(-k):  v_0 = 2, v_1 = y, v_k = y*v_(k-1) - v_(k-2)
    v_prev = IntPolynomial((2,))
    v_cur = IntPolynomial((0, 1))
    acc = IntPolynomial((p.coeffs[s],))
    for k in range(1, s + 1):
        vk = v_cur if k == 1 else IntPolynomial((0, 1)) * v_cur - v_prev
        if k > 1:
            v_prev, v_cur = v_cur, vk
        acc = acc + vk.scale(p.coeffs[s + k])
    return acc


@lru_cache(maxsize=None)
def cos_minpoly(n: int) -> IntPolynomial:
    """Minimal polynomial of 2*cos(2*pi/n) for n >= 3."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return trace_transform(cyclotomic(n)).primitive()


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out
