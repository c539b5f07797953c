"""Certified Mahler measure and exact Salem detection.

The measure |a_n| * prod max(1, |theta_i|) is enclosed rigorously: approximate
roots from mpmath are certified a posteriori by Weierstrass disk bounds (all
zeros of p lie in the union of disks D(z_i, n*|w_i|) around n distinct trial
points, where w_i is the Weierstrass correction p(z_i) / (a_n * prod_{j!=i}
(z_i - z_j)); pairwise disjoint disks each contain exactly one zero).  Roots
pinned to the unit circle never need a modulus decision because the per-root
contribution max(1, |theta|) still converges.

Salem testing is exact: for an irreducible self-reciprocal polynomial the root
pattern (one real theta > 1, theta^{-1}, all else on the circle) is equivalent
to its trace polynomial q (with p(x)/x^s = q(x + 1/x)) having all roots real,
exactly one of them above 2 and the rest inside (-2, 2) -- a Sturm computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import sympy
from mpmath import iv, mp

from .algebraic import RealAlgebraic, is_irreducible
from .intervals import Interval, PrecisionCapError, workprec
from .polynomials import (IntPolynomial, count_real_roots, isolate_real_roots,
                          trace_transform)

_x = sympy.symbols("x")


class MahlerPrecisionError(PrecisionCapError):
    """Root disks could not be separated / narrowed at the precision cap."""


def _squarefree_factors(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    poly = sympy.Poly(list(reversed(p.coeffs)), _x)
    _, facs = poly.sqf_list()
    return [(IntPolynomial([int(c) for c in reversed(f.all_coeffs())]), m) for f, m in facs]


def certified_root_disks(p: IntPolynomial, prec: int) -> list[tuple[complex, mpmath.mpf]]:
    """Disjoint disks (center, radius), one per root of squarefree p.

    Raises MahlerPrecisionError when the disks cannot be certified disjoint at
    this precision.
    """
    n = p.degree
    if n < 1:
        return []
    with workprec(prec):
        coeffs_desc = [mp.mpf(c) for c in reversed(p.coeffs)]
        try:
            roots = mpmath.polyroots(coeffs_desc, maxsteps=200, extraprec=prec)
        except mpmath.libmp.NoConvergence as exc:
            raise MahlerPrecisionError(f"root finding did not converge: {exc}") from None
        res = []
        lead = iv.mpf(p.coeffs[-1])
        ivroots = [(iv.mpf(mp.mpf(z.real)), iv.mpf(mp.mpf(z.imag))) for z in roots]
        for i, (zre, zim) in enumerate(ivroots):
            pre, pim = iv.mpf(0), iv.mpf(0)
            for c in reversed(p.coeffs):
                pre, pim = pre * zre - pim * zim + iv.mpf(c), pre * zim + pim * zre
            dre, dim = lead, iv.mpf(0)
            for j, (wre, wim) in enumerate(ivroots):
                if j == i:
                    continue
                tre, tim = zre - wre, zim - wim
                dre, dim = dre * tre - dim * tim, dre * tim + dim * tre
            num = iv.sqrt(pre ** 2 + pim ** 2)
            den = iv.sqrt(dre ** 2 + dim ** 2)
            if not den.a > 0:
                raise MahlerPrecisionError("trial roots collide; radius undefined")
            rad = mp.make_mpf((n * num / den)._mpi_[1])
            res.append((complex(roots[i]), rad))
        # disjointness certifies one root per disk
        pts = [mpmath.mpc(z) for z, _ in res]
        for i in range(len(res)):
            for j in range(i + 1, len(res)):
                if abs(pts[i] - pts[j]) <= res[i][1] + res[j][1]:
                    raise MahlerPrecisionError("root disks overlap")
        return res


def root_moduli(p: IntPolynomial, prec: int) -> list[tuple[Interval, int]]:
    """Certified (modulus enclosure, multiplicity) for every root of p."""
    out = []
    for fac, mult in _squarefree_factors(p):
        if fac.degree < 1:
            continue
        for z, rad in certified_root_disks(fac, prec):
            with workprec(prec):
                az = abs(mpmath.mpc(z))
                lo = max(mp.mpf(0), mp.make_mpf(((iv.mpf(az) - iv.mpf(rad)))._mpi_[0]))
                hi = mp.make_mpf((iv.mpf(az) + iv.mpf(rad))._mpi_[1])
            out.append((Interval(lo, hi), mult))
    return out


def mahler_measure(p: IntPolynomial, width: Fraction = Fraction(1, 10 ** 9),
                   start_prec: int = 96, prec_cap: int = 4096) -> Interval:
    """Enclosure of |lead(p)| * prod max(1, |theta_i|) of width <= width."""
    if p.is_zero():
        raise ValueError("Mahler measure of the zero polynomial")
    width = Fraction(width)
    prec = start_prec
    last_exc = None
    while prec <= prec_cap:
        try:
            moduli = root_moduli(p, prec)
        except MahlerPrecisionError as exc:
            last_exc = exc
            prec *= 2
            continue
        with workprec(prec):
            acc = iv.mpf(abs(p.coeffs[-1]))
            one = iv.mpf(1)
            for m, mult in moduli:
                contrib = iv.mpf([max(m.lo, mp.mpf(1)), max(m.hi, mp.mpf(1))])
                acc *= contrib ** mult
            out = Interval(iv.mpf([acc.a, acc.b]))
        if out.width_fraction <= width:
            return out
        prec *= 2
    raise MahlerPrecisionError(
        f"Mahler measure width {width} unreachable at precision cap {prec_cap}"
        + (f" ({last_exc})" if last_exc else ""))


@dataclass
class SalemResult:
    is_salem: bool
    theta: Optional[RealAlgebraic]
    note: str = ""


def is_salem(p: IntPolynomial) -> SalemResult:
    """Salem test exactly as defined: real theta > 1, theta^{-1} conjugate,
    every other conjugate on the unit circle (vacuous in degree 2)."""
    if p.is_zero() or p.degree < 1:
        raise ValueError("Salem test requires a nonconstant polynomial")
    if not p.is_monic():
        raise ValueError("Salem test requires a monic polynomial")
    if not is_irreducible(p):
        raise ValueError("Salem test requires an irreducible polynomial")
    if p.degree == 1:
        return SalemResult(False, None, "degree 1: theta^{-1} cannot be a conjugate")
    if not p.is_self_reciprocal():
        # for monic irreducible p of degree >= 2 the reciprocal root condition
        # forces x^n p(1/x) = p(x)
        return SalemResult(False, None, "theta^{-1} is not a conjugate")
    if p.degree % 2:
        return SalemResult(False, None, "odd-degree self-reciprocal is reducible")
    s = p.degree // 2
    q = trace_transform(p)
    real_count = count_real_roots(q)
    above = count_real_roots(q, Fraction(2), None)
    below = count_real_roots(q, None, Fraction(-2))
    at_two = 1 if q.sign_at(Fraction(2)) == 0 else 0
    at_minus_two = 1 if q.sign_at(Fraction(-2)) == 0 else 0
    ok = (real_count == s and above == 1 and below == 0
          and at_two == 0 and at_minus_two == 0)
    if not ok:
        return SalemResult(False, None,
                           f"trace polynomial root pattern fails "
                           f"(real {real_count}/{s}, above 2: {above}, below -2: {below})")
    roots = isolate_real_roots(p, Fraction(1, 2 ** 24))
    theta = RealAlgebraic(p, *roots[-1], _verified=True)
    if not theta > 1:
        return SalemResult(False, None, "no real root above 1")
    note = ""
    if p.degree < 4:
        note = "degree < 4: nonstandard Salem by some conventions (circle condition vacuous)"
    return SalemResult(True, theta, note)
