"""Closed-form bound ingredients and the generator-norm bound calculator.

Everything here is a pure function of explicit inputs: the forbidden trace
window, the small-measure lower bound for algebraic integers of bounded
degree, injectivity-radius constants, the spectral decay exponent, and the
final generator-norm bounds with their corollary variants.  Exact rational
arithmetic is used wherever the quantity is rational (notably the decay
exponent and all derived exponents); everything else is a certified interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .algebraic import RealAlgebraic
from .intervals import (Interval, PrecisionCapError, i_cos, i_cosh, i_exp,
                        i_log, i_sqrt, workprec)
from .polynomials import cos_minpoly, euler_phi, isolate_real_roots

VARIANTS = ("general", "congruence", "torsion_free", "salem")

CONGRUENCE_LAMBDA = Fraction(975, 4096)


@dataclass(frozen=True)
class MaybeExact:
    """A real quantity: exact rational when available, always enclosed."""

    exact: Optional[Fraction]
    enclosure: Interval

    @classmethod
    def of_fraction(cls, f: Fraction) -> "MaybeExact":
        f = Fraction(f)
        return cls(f, Interval(f))

    @classmethod
    def of_interval(cls, v: Interval) -> "MaybeExact":
        return cls(None, v)

    def __repr__(self):
        if self.exact is not None:
            return f"MaybeExact({self.exact})"
        return f"MaybeExact({self.enclosure!r})"


@dataclass(frozen=True)
class SpectralData:
    """lambda = min(1/4, lambda_1), kept as an exact rational."""

    lam: Fraction
    source: str = "user"
    clamped: bool = False

    @classmethod
    def from_lambda1(cls, lambda1, source: str = "user") -> "SpectralData":
        lambda1 = Fraction(lambda1)
        if lambda1 <= 0:
            raise ValueError("lambda_1 must be positive")
        if lambda1 > Fraction(1, 4):
            return cls(Fraction(1, 4), source, clamped=True)
        return cls(lambda1, source)

    @classmethod
    def congruence(cls) -> "SpectralData":
        return cls(CONGRUENCE_LAMBDA, "congruence-default")

    def __post_init__(self):
        if not 0 < self.lam <= Fraction(1, 4):
            raise ValueError(f"lambda must lie in (0, 1/4], got {self.lam}")


def _sqrt_fraction(r: Fraction) -> Optional[Fraction]:
    if r < 0:
        return None
    sn, sd = math.isqrt(r.numerator), math.isqrt(r.denominator)
    if sn * sn == r.numerator and sd * sd == r.denominator:
        return Fraction(sn, sd)
    return None


def decay_exponent(spectral: SpectralData | Fraction) -> MaybeExact:
    """s = 1 - sqrt(1 - 4*lambda); exact when 1 - 4*lambda is a rational square."""
    lam = spectral.lam if isinstance(spectral, SpectralData) else Fraction(spectral)
    if not 0 < lam <= Fraction(1, 4):
        raise ValueError(f"lambda must lie in (0, 1/4], got {lam}")
    r = 1 - 4 * lam
    root = _sqrt_fraction(r)
    if root is not None:
        return MaybeExact.of_fraction(1 - root)
    with workprec(128):
        enc = 1 - i_sqrt(Interval(r))
    return MaybeExact.of_interval(enc)


def correlation_decay_factor(t: Fraction, spectral: SpectralData | Fraction,
                             prec: int = 128) -> Interval:
    """(e^(-t/3))^s, the matrix-coefficient decay rate of the diagonal flow."""
    s = decay_exponent(spectral)
    with workprec(prec):
        base = Interval(Fraction(t)) / 3
        return i_exp(-base * s.enclosure)


# -- window ingredients -----------------------------------------------------------

def _log_ratio_cubed(n: int) -> Interval:
    """(log log n / log n)^3 at current working precision."""
    ln = i_log(Interval(n))
    return (i_log(ln) / ln) ** 3


@dataclass(frozen=True)
class VoutierBound:
    n: int
    value: Interval
    informative: bool


def voutier_lower_bound(n: int, width: Fraction = Fraction(1, 10 ** 12)) -> VoutierBound:
    """Lower bound (1/4)(log log n / log n)^3 on log M for degree <= n integers."""
    if n < 2:
        raise ValueError("degree bound must be at least 2")
    width = Fraction(width)
    bits = 96
    while True:
        with workprec(bits):
            val = _log_ratio_cubed(n) / 4
        if val.width_fraction <= width:
            return VoutierBound(n, val, val.sign() == 1)
        bits *= 2
        if bits > 1 << 16:
            raise PrecisionCapError("voutier bound did not converge")


@dataclass(frozen=True)
class TraceWindow:
    """The forbidden trace annulus for invariant trace fields of degree d."""

    d: int
    lower: RealAlgebraic                 # 2 cos(pi / 2d), exact
    upper: Interval                      # 2 cosh((1/16)(log log 2d / log 2d)^3)
    corrected_elliptic_max: RealAlgebraic

    def contains_abs_trace(self, t: Fraction) -> bool:
        """Whether |t| falls strictly inside (lower, upper) -- certified."""
        t = abs(Fraction(t))
        if not self.lower < t:
            return False
        c = Interval(t).compare(self.upper)
        if c is None:
            raise PrecisionCapError(f"|trace| = {t} undecided against window upper bound")
        return c < 0


def two_cos_pi_over(m: int) -> RealAlgebraic:
    """2*cos(pi/m) as an exact algebraic number (m >= 2)."""
    if m < 2:
        raise ValueError("m must be >= 2")
    poly = cos_minpoly(2 * m)
    roots = isolate_real_roots(poly, Fraction(1, 2 ** 20))
    return RealAlgebraic(poly, *roots[-1], _verified=True)


def window_upper(d: int, width: Fraction = Fraction(1, 10 ** 12)) -> Interval:
    bits = 96
    while True:
        with workprec(bits):
            val = 2 * i_cosh(_log_ratio_cubed(2 * d) / 16)
        if val.width_fraction <= Fraction(width):
            return val
        bits *= 2
        if bits > 1 << 16:
            raise PrecisionCapError("window upper bound did not converge")


def trace_window(d: int, width: Fraction = Fraction(1, 10 ** 12)) -> TraceWindow:
    if d < 1:
        raise ValueError("degree must be positive")
    return TraceWindow(d, two_cos_pi_over(2 * d), window_upper(d, width),
                       elliptic_trace_max(d).value)


@dataclass(frozen=True)
class EllipticMax:
    d: int
    m: int                    # realizing projective rotation order
    value: RealAlgebraic      # 2 cos(pi/m)


def elliptic_trace_max(d: int) -> EllipticMax:
    """max{2cos(pi/m) : phi(2m) <= 4d}, by direct enumeration.

    phi(n) >= sqrt(n/2) bounds the search space at m <= (4d)^2.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    best_m = 2
    for m in range(2, (4 * d) ** 2 + 1):
        if euler_phi(2 * m) <= 4 * d:
            best_m = max(best_m, m)
    return EllipticMax(d, best_m, two_cos_pi_over(best_m))


def delta_zero(d: int, width: Fraction = Fraction(1, 10 ** 12)) -> Interval:
    """min(cosh((1/16)(loglog 2d/log 2d)^3) - 1, 1 - cos(pi/2d)); positive.

    Converges to absolute width <= width or relative width <= 1e-9, whichever
    is reached first (the value itself shrinks like d^-2).
    """
    if d < 1:
        raise ValueError("degree must be positive")
    width = Fraction(width)
    bits = 96
    while True:
        with workprec(bits):
            val = _delta_zero_at(d)
        if val.sign() == 1 and (val.width_fraction <= width
                                or val.width_fraction <= val.hi_fraction / 10 ** 9):
            return val
        if bits > 1 << 16:
            raise PrecisionCapError("delta_zero did not converge")
        bits *= 2


def _delta_zero_at(d: int) -> Interval:
    cosh_term = i_cosh(_log_ratio_cubed(2 * d) / 16) - 1
    cos_term = 1 - i_cos(Interval.pi() / (2 * d))
    return Interval(min(cosh_term.lo, cos_term.lo), min(cosh_term.hi, cos_term.hi))


@dataclass(frozen=True)
class SafetyConstant:
    """Realization of the injectivity-radius constant c with delta(d) = c/d^2."""

    d_max: int
    c: Interval
    argmin_d: int
    note: str = ("c = min_d d^2*delta_0(d) / 5; the 1/5 certifies "
                 "g1^{-1}g2 in B(delta_0) from ||g1^{-1}g2 - 1|| <= 2(1+delta)*2delta "
                 "< 5*delta for delta < 1/4, using ||g^{-1} - 1|| = ||g - 1|| for det 1")


_SWEEP_LIMIT = 1024


def compute_safety_constant(d_max: int, prec: int = 128) -> SafetyConstant:
    """(1/5) * min_{1 <= d <= d_max} d^2 * delta_0(d), with a certified tail bound.

    The explicit sweep stops at 1024; beyond that, dyadic blocks [D+1, 2D] are
    excluded by the bound d^2*delta_0(d) >= (D+1)^2 * delta_0(2D), valid since
    both window terms decrease in d once d >= 8.
    """
    if d_max < 1:
        raise ValueError("d_max must be positive")
    min_lo = min_hi = None
    best_d = 1
    with workprec(prec):
        def feed(d: int):
            nonlocal min_lo, min_hi, best_d
            val = _delta_zero_at(d) * d ** 2
            if min_hi is None or val.hi < min_hi:
                min_hi, best_d = val.hi, d
            if min_lo is None or val.lo < min_lo:
                min_lo = val.lo

        for d in range(1, min(d_max, _SWEEP_LIMIT) + 1):
            feed(d)
        lo_cursor = _SWEEP_LIMIT
        while lo_cursor < d_max:
            hi_cursor = min(2 * lo_cursor, d_max)
            block_bound = _delta_zero_at(hi_cursor) * (lo_cursor + 1) ** 2
            if block_bound.lo > min_hi:
                lo_cursor = hi_cursor
                continue
            for d in range(lo_cursor + 1, hi_cursor + 1):
                feed(d)
            lo_cursor = hi_cursor
        out = Interval(min_lo, min_hi) / 5
    return SafetyConstant(d_max, out, best_d)


# -- delta per variant ---------------------------------------------------------------

@dataclass(frozen=True)
class DeltaConstants:
    variant: str
    c: Fraction
    m_s: Optional[Fraction]
    delta0: Interval
    delta: MaybeExact
    note: str = ""


def delta_for_variant(variant: str, d: int, c: Fraction,
                      m_s: Optional[Fraction] = None, prec: int = 128) -> DeltaConstants:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    d0 = delta_zero(d)
    if variant in ("general", "congruence"):
        return DeltaConstants(variant, c, None, d0,
                              MaybeExact.of_fraction(c / d ** 2),
                              note="delta = c * d^-2")
    if variant == "torsion_free":
        with workprec(prec):
            val = Interval(c) * (_log_ratio_cubed(2 * d) ** 2)
        return DeltaConstants(variant, c, None, d0, MaybeExact.of_interval(val),
                              note="delta = c * (log log 2d / log 2d)^6")
    if m_s is None or Fraction(m_s) <= 1:
        raise ValueError("salem variant needs m_S > 1")
    m_s = Fraction(m_s)
    with workprec(prec):
        val = Interval(c) * i_log(Interval(m_s)) ** 2
    return DeltaConstants(variant, c, m_s, d0, MaybeExact.of_interval(val),
                          note="delta = c * log(m_S)^2")


# -- powers with exact fast paths ------------------------------------------------------

def _pow_maybe(base: MaybeExact, exponent: MaybeExact, prec: int = 192) -> MaybeExact:
    if base.exact is not None and base.exact == 1:
        return MaybeExact.of_fraction(Fraction(1))
    if exponent.exact is not None and exponent.exact == 0:
        return MaybeExact.of_fraction(Fraction(1))
    if (base.exact is not None and exponent.exact is not None
            and exponent.exact.denominator == 1):
        return MaybeExact.of_fraction(base.exact ** int(exponent.exact))
    with workprec(prec):
        if exponent.exact is not None and exponent.exact.denominator == 1:
            enc = base.enclosure ** int(exponent.exact)
        else:
            enc = base.enclosure ** (exponent.exact
                                     if exponent.exact is not None else exponent.enclosure)
    return MaybeExact.of_interval(enc)


def _mul_maybe(*vals: MaybeExact, prec: int = 192) -> MaybeExact:
    if all(v.exact is not None for v in vals):
        out = Fraction(1)
        for v in vals:
            out *= v.exact
        return MaybeExact.of_fraction(out)
    with workprec(prec):
        out = Interval(1)
        for v in vals:
            out = out * (Interval(v.exact) if v.exact is not None else v.enclosure)
    return MaybeExact.of_interval(out)


def translate_bound(vol: Fraction, spectral: SpectralData | Fraction,
                    delta: Fraction, c: Fraction = Fraction(1)) -> Interval:
    """c * vol^(3/s) * delta^(-15/s): the norm bound of the translating element."""
    vol, delta, c = Fraction(vol), Fraction(delta), Fraction(c)
    if vol <= 0:
        raise ValueError("vol must be positive")
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if c <= 0:
        raise ValueError("c must be positive")
    s = decay_exponent(spectral)
    inv_s = (MaybeExact.of_fraction(1 / s.exact) if s.exact is not None
             else MaybeExact.of_interval(1 / s.enclosure))
    out = _mul_maybe(
        MaybeExact.of_fraction(c),
        _pow_maybe(MaybeExact.of_fraction(vol), _mul_maybe(MaybeExact.of_fraction(Fraction(3)), inv_s)),
        _pow_maybe(MaybeExact.of_fraction(delta), _mul_maybe(MaybeExact.of_fraction(Fraction(-15)), inv_s)))
    return out.enclosure


# -- the generator bound -----------------------------------------------------------------

@dataclass
class BoundReport:
    """Full audit trail of one generator-bound evaluation."""

    variant: str
    d: int
    vol: Fraction
    spectral: SpectralData
    big_c: Fraction
    small_c: Fraction
    m_s: Optional[Fraction]
    s: MaybeExact
    exponents: dict[str, MaybeExact]
    delta: DeltaConstants
    theorem_bound: MaybeExact
    internal_bound: MaybeExact
    alt_bound: Optional[MaybeExact]
    symbolic: str
    notes: list[str] = field(default_factory=list)


def generator_bound(d: int, vol, spectral: SpectralData,
                    variant: str = "general",
                    big_c: Fraction = Fraction(1), small_c: Fraction = Fraction(1),
                    m_s: Optional[Fraction] = None) -> BoundReport:
    """Norm bound for a generating set, per variant, with exact exponents
    whenever the decay exponent is rational."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if d < 1:
        raise ValueError("d must be a positive integer")
    vol = Fraction(vol)
    if vol <= 0:
        raise ValueError("vol must be positive")
    big_c, small_c = Fraction(big_c), Fraction(small_c)
    if big_c <= 0 or small_c <= 0:
        raise ValueError("leading constants must be positive")
    notes = []
    if variant == "congruence" and spectral.lam != CONGRUENCE_LAMBDA:
        notes.append(f"congruence variant forces lambda = 975/4096 "
                     f"(supplied {spectral.lam})")
        spectral = SpectralData.congruence()

    s = decay_exponent(spectral)
    inv_s = (MaybeExact.of_fraction(1 / s.exact) if s.exact is not None
             else MaybeExact.of_interval(1 / s.enclosure))

    def times(k: int) -> MaybeExact:
        return _mul_maybe(MaybeExact.of_fraction(Fraction(k)), inv_s)

    delta = delta_for_variant(variant, d, small_c, m_s)
    exponents = {"vol": times(6), "delta_internal": times(-30)}
    vol_me = MaybeExact.of_fraction(vol)
    cc = MaybeExact.of_fraction(big_c)
    vol_pow = _pow_maybe(vol_me, exponents["vol"])
    internal = _mul_maybe(vol_pow, _pow_maybe(delta.delta, exponents["delta_internal"]))
    alt = None

    if variant in ("general", "congruence"):
        exponents["d"] = times(60)
        theorem = _mul_maybe(cc, _pow_maybe(MaybeExact.of_fraction(Fraction(d)),
                                            exponents["d"]), vol_pow)
        symbolic = "C * d^(60/s) * vol^(6/s)   [s = 1 - sqrt(1-4*lambda)]"
    elif variant == "torsion_free":
        exponents["log_d"] = times(180)
        exponents["log_d_alt"] = times(120)
        if d == 1:
            notes.append("log(d) = 0 at d = 1: torsion-free bound degenerates to 0")
            theorem = MaybeExact.of_fraction(Fraction(0))
            alt = MaybeExact.of_fraction(Fraction(0))
        else:
            with workprec(192):
                logd = MaybeExact.of_interval(i_log(Interval(d)))
            theorem = _mul_maybe(cc, _pow_maybe(logd, exponents["log_d"]), vol_pow)
            alt = _mul_maybe(cc, _pow_maybe(logd, exponents["log_d_alt"]), vol_pow)
        notes.append("alternative exponent 120/s arises from the log(d)^-4 "
                     "simplification of delta; both are reported")
        symbolic = "C * log(d)^(180/s) * vol^(6/s); alt C * log(d)^(120/s) * vol^(6/s)"
    else:  # salem
        if m_s is None:
            raise ValueError("salem variant needs m_S")
        exponents["log_m_S"] = times(-60)
        with workprec(192):
            logm = MaybeExact.of_interval(i_log(Interval(Fraction(m_s))))
        theorem = _mul_maybe(cc, _pow_maybe(logm, exponents["log_m_S"]), vol_pow)
        symbolic = "C * log(m_S)^(-60/s) * vol^(6/s)"

    return BoundReport(
        variant=variant, d=d, vol=vol, spectral=spectral,
        big_c=big_c, small_c=small_c, m_s=Fraction(m_s) if m_s is not None else None,
        s=s, exponents=exponents, delta=delta,
        theorem_bound=theorem, internal_bound=internal, alt_bound=alt,
        symbolic=symbolic + " ; internal vol^(6/s) * delta^(-30/s)",
        notes=notes)
