"""Exhaustive unit-ball enumeration, trace census, and generation certificates.

The enumeration converts the four sup-norm entry constraints into a rigorous
integer coordinate box (outward-rounded inverse of the embedding's linear
map), scans the box with an exact integer quadratic form for nrd = 1, and
keeps elements whose norm comparison against the cap is certified.  The
census classifies every element against the forbidden trace window and its
corrected companions.  Generation certificates are words over a generator
set, found by greedy hyperbolic reduction with a bidirectional BFS fallback
and always re-verified by exact quaternion multiplication before emission.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .bounds import (EllipticMax, TraceWindow, VoutierBound, elliptic_trace_max,
                     trace_window, voutier_lower_bound)
from .halfplane import IsometryClass, Mat2, classify, sup_norm_exact, translation_length
from .intervals import Interval, i_cosh, i_exp, i_log, workprec
from .mahler import mahler_measure
from .numberfield import FieldElement, QuadExt
from .polynomials import IntPolynomial, euler_phi, poly_from_fractions
from .quaternion import QuatElement, QuatOrder, embed_matrix


class BoxBudgetError(RuntimeError):
    """The coefficient box exceeds the configured candidate budget."""


@dataclass(frozen=True)
class EnumerationJob:
    order: QuatOrder
    norm_cap: Fraction
    projective: bool = True
    candidate_budget: int = 10 ** 8
    workers: int = 1

    def __post_init__(self):
        if Fraction(self.norm_cap) < 1:
            raise ValueError("norm cap must be >= 1 (the identity has norm 1)")


@dataclass
class ElementRecord:
    coords: tuple[int, ...]              # coordinates in the order basis
    element: QuatElement
    matrix: Mat2
    norm: Interval
    boundary: bool                       # norm equals the cap exactly
    trace: FieldElement
    klass: IsometryClass
    length: Optional[Interval] = None    # hyperbolic translation length

    @property
    def kind(self) -> str:
        return self.klass.kind

    def trace_fraction(self) -> Optional[Fraction]:
        return self.trace.as_fraction() if self.trace.is_rational() else None


@dataclass
class EnumerationResult:
    job: EnumerationJob
    records: list[ElementRecord]
    undecided: list[tuple[int, ...]]
    box_bounds: tuple[int, ...]
    counters: dict

    @property
    def elements(self) -> list[QuatElement]:
        return [r.element for r in self.records]


# -- box derivation ------------------------------------------------------------------

def _embedding_rows(order: QuatOrder) -> list[list[QuadExt]]:
    """E[k][r] = k-th matrix entry of rho(basis_r); columns index the basis."""
    mats = [embed_matrix(b) for b in order.basis]
    return [[m.entries()[k] for m in mats] for k in range(4)]


def _quadext_inverse(e: QuadExt) -> QuadExt:
    den = e.u * e.u - e.rad * e.v * e.v
    if den.is_zero():
        raise ZeroDivisionError("degenerate quadratic-extension value")
    di = den.inverse()
    return QuadExt(e.u * di, -(e.v * di), e.rad)


def _invert_quadext(mat: list[list[QuadExt]]) -> list[list[QuadExt]]:
    n = len(mat)
    fieldzero = mat[0][0].u.owner.zero
    rad = next((mat[i][j].rad for i in range(n) for j in range(n)
                if not mat[i][j].v.is_zero()), mat[0][0].rad)
    one = QuadExt(fieldzero.owner.one, fieldzero, rad)
    zero = QuadExt(fieldzero, fieldzero, rad)
    aug = [[mat[i][j] for j in range(n)] + [one if i == j else zero for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular embedding matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = _quadext_inverse(aug[col][col])
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def coefficient_box(order: QuatOrder, norm_cap: Fraction) -> tuple[int, ...]:
    """Outward integer bounds B_r with |n_r| <= B_r for every unit in the ball."""
    rows = _embedding_rows(order)
    inv = _invert_quadext(rows)
    bounds = []
    for r in range(4):
        total = Fraction(0)
        for k in range(4):
            e = inv[r][k]
            ae = e if e.sign() >= 0 else -e
            total += ae.interval(Fraction(1, 2 ** 30)).hi_fraction
        bounds.append(int(math.floor(total * Fraction(norm_cap))))
    return tuple(bounds)


# -- box scanning ---------------------------------------------------------------------

def _integer_gram(order: QuatOrder) -> tuple[list[list[int]], int]:
    g = order.gram_matrix()
    den = 1
    for row in g:
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
    return [[int(v * den) for v in row] for row in g], den


def _scan_chunk(gram: Sequence[Sequence[int]], target: int,
                bounds: Sequence[int], n0_values: Sequence[int]) -> list[tuple[int, ...]]:
    """All n in the sub-box with n^T G n == target (exact in int64)."""
    g = [[int(v) for v in row] for row in gram]
    b1, b2, b3 = bounds[1], bounds[2], bounds[3]
    x2 = np.arange(-b2, b2 + 1, dtype=np.int64)[:, None]
    x3 = np.arange(-b3, b3 + 1, dtype=np.int64)[None, :]
    cgrid = g[2][2] * x2 * x2 + 2 * g[2][3] * x2 * x3 + g[3][3] * x3 * x3
    out = []
    for n0 in n0_values:
        base0 = g[0][0] * n0 * n0
        for n1 in range(-b1, b1 + 1):
            const = base0 + 2 * g[0][1] * n0 * n1 + g[1][1] * n1 * n1
            l2 = 2 * (g[0][2] * n0 + g[1][2] * n1)
            l3 = 2 * (g[0][3] * n0 + g[1][3] * n1)
            vals = const + l2 * x2 + l3 * x3 + cgrid
            hits = np.argwhere(vals == target)
            for i2, i3 in hits:
                out.append((n0, n1, int(i2) - b2, int(i3) - b3))
    return out


def _scan_chunk_args(args):
    return _scan_chunk(*args)


def _canonical_sign(n: tuple[int, ...]) -> tuple[int, ...]:
    for v in n:
        if v > 0:
            return n
        if v < 0:
            return tuple(-x for x in n)
    return n


def enumerate_unit_ball(job: EnumerationJob) -> EnumerationResult:
    """Exhaustive list of reduced-norm-1 lattice elements with sup-norm <= cap."""
    order = job.order
    if order.algebra.a.sign() <= 0:
        raise ValueError("algebra must satisfy a > 0 at the distinguished place "
                         "(normalize the presentation first)")
    cap = Fraction(job.norm_cap)
    bounds = coefficient_box(order, cap)
    box_size = 1
    for b in bounds:
        box_size *= 2 * b + 1
    if box_size > job.candidate_budget:
        raise BoxBudgetError(
            f"coefficient box {bounds} holds {box_size} candidates, beyond the "
            f"budget {job.candidate_budget}; raise the budget or lower the cap")
    gram, den = _integer_gram(order)
    # int64 safety for the vectorized scan
    worst = sum(abs(gram[r][s]) * max(1, bounds[r]) * max(1, bounds[s])
                for r in range(4) for s in range(4))
    candidates: list[tuple[int, ...]]
    if worst < 2 ** 62:
        n0s = list(range(-bounds[0], bounds[0] + 1))
        if job.workers > 1 and len(n0s) > 1:
            import multiprocessing as mp
            chunks = [n0s[i::job.workers] for i in range(job.workers)]
            args = [(gram, den, bounds, chunk) for chunk in chunks if chunk]
            with mp.Pool(len(args)) as pool:
                parts = pool.map(_scan_chunk_args, args)
            candidates = [c for part in parts for c in part]
        else:
            candidates = _scan_chunk(gram, den, bounds, n0s)
    else:
        candidates = _scan_exact(gram, den, bounds)

    if job.projective:
        candidates = sorted({_canonical_sign(c) for c in candidates})
    else:
        candidates = sorted(set(candidates))

    records: list[ElementRecord] = []
    undecided: list[tuple[int, ...]] = []
    boundary_count = 0
    class_cache: dict = {}
    for n in candidates:
        elem = order.element_from_coordinates(n)
        if elem.nrd() != 1:
            continue
        mat = embed_matrix(elem)
        norm_exact = sup_norm_exact(mat)
        cmp = norm_exact.cmp_fraction(cap)
        if cmp > 0:
            continue
        boundary = cmp == 0
        boundary_count += boundary
        rec = _build_record(n, elem, mat, boundary, class_cache)
        records.append(rec)
    counters = {
        "box_candidates": box_size,
        "nrd_hits": len(records) + len(undecided),
        "boundary_elements": boundary_count,
        "undecided_norms": len(undecided),
    }
    return EnumerationResult(job, records, undecided, bounds, counters)


def _scan_exact(gram, target, bounds) -> list[tuple[int, ...]]:
    # arbitrary-precision fallback; only reached when int64 could overflow
    out = []
    b0, b1, b2, b3 = bounds
    for n0 in range(-b0, b0 + 1):
        for n1 in range(-b1, b1 + 1):
            for n2 in range(-b2, b2 + 1):
                for n3 in range(-b3, b3 + 1):
                    n = (n0, n1, n2, n3)
                    acc = 0
                    for r in range(4):
                        for s in range(4):
                            acc += gram[r][s] * n[r] * n[s]
                    if acc == target:
                        out.append(n)
    return out


def _build_record(n, elem, mat, boundary, cache) -> ElementRecord:
    trace = elem.trd()
    key = trace.coords
    cached = cache.get(key)
    if cached is not None and cached.kind in ("hyperbolic", "elliptic"):
        klass = cached
    else:
        klass = classify(mat)
        if klass.kind in ("hyperbolic", "elliptic"):
            cache[key] = klass
    length = None
    if klass.kind == "hyperbolic":
        length = translation_length(klass)
    return ElementRecord(
        coords=tuple(n), element=elem, matrix=mat,
        norm=sup_norm_exact(mat).interval(Fraction(1, 2 ** 40)),
        boundary=boundary, trace=trace, klass=klass, length=length)


# -- trace census -----------------------------------------------------------------------

@dataclass
class CensusViolation:
    check: str
    coords: tuple[int, ...]
    trace: str
    detail: str


@dataclass
class TraceMahlerEntry:
    trace: str
    trace_of_square: str
    measure: Interval
    two_cosh_half_log_m: Interval
    two_cosh_quarter_log_m: Interval


@dataclass
class CensusReport:
    d: int
    count: int
    class_counts: dict[str, int]
    trace_multiset: list[tuple[str, int]]
    min_hyperbolic_abs_trace: Optional[Fraction]
    max_elliptic_abs_trace: Optional[Fraction]
    window: TraceWindow
    elliptic_max: EllipticMax
    voutier: VoutierBound
    paper_window_hits: list[CensusViolation]
    corrected_violations: list[CensusViolation]
    integrality_failures: list[CensusViolation]
    order_failures: list[CensusViolation]
    parabolic_elements: list[CensusViolation]
    trace_mahler: list[TraceMahlerEntry]
    checks: dict[str, bool]

    @property
    def violations(self) -> list[CensusViolation]:
        return (self.paper_window_hits + self.corrected_violations +
                self.integrality_failures + self.order_failures +
                self.parabolic_elements)


def _trace_str(t: FieldElement) -> str:
    if t.is_rational():
        f = t.as_fraction()
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return repr(t)


def _abs_trace_key(t: FieldElement):
    if t.is_rational():
        return abs(t.as_fraction())
    return abs(Fraction(float(abs(t))).limit_denominator(10 ** 12))


def trace_census(records: Sequence[ElementRecord], d: int) -> CensusReport:
    """Classify an enumeration against the degree-d trace windows.

    Violations are data, not errors: each failed check lists the offending
    element.  The paper-window check skips the central elements +-1, which lie
    in the window trivially.
    """
    window = trace_window(d)
    emax = elliptic_trace_max(d)
    vout = voutier_lower_bound(2 * d)
    class_counts: dict[str, int] = {}
    multiset: dict[str, int] = {}
    paper_hits: list[CensusViolation] = []
    corrected: list[CensusViolation] = []
    integrality: list[CensusViolation] = []
    order_fail: list[CensusViolation] = []
    parabolic: list[CensusViolation] = []
    mahler_entries: dict[str, TraceMahlerEntry] = {}
    min_hyp: Optional[FieldElement] = None
    max_ell: Optional[FieldElement] = None

    with workprec(128):
        vout_exp = i_exp(vout.value)

    for rec in records:
        kind = rec.kind
        class_counts[kind] = class_counts.get(kind, 0) + 1
        ts = _trace_str(rec.trace)
        multiset[ts] = multiset.get(ts, 0) + 1
        abs_tr = rec.trace if rec.trace.sign() >= 0 else -rec.trace

        if not rec.trace.is_integral():
            integrality.append(CensusViolation(
                "trace-integrality", rec.coords, ts, "trace is not an algebraic integer"))

        if kind == "parabolic":
            parabolic.append(CensusViolation(
                "parabolic", rec.coords, ts,
                "parabolic element contradicts cocompactness of the input data"))
            continue
        if kind == "central":
            continue

        if kind == "hyperbolic":
            if min_hyp is None or abs_tr < min_hyp:
                min_hyp = abs_tr
        else:
            if max_ell is None or abs_tr > max_ell:
                max_ell = abs_tr

        # (i) the paper window: no nontrivial |tr| strictly inside it
        if rec.trace.is_rational():
            t = abs(rec.trace.as_fraction())
            inside = window.lower < t and Interval(t).compare(window.upper) == -1
        else:
            enc = abs_tr.embed(Fraction(1, 2 ** 64))
            lower_iv = window.lower.interval(Fraction(1, 2 ** 64))
            inside = (enc.compare(lower_iv) == 1 and enc.compare(window.upper) == -1)
        if inside:
            paper_hits.append(CensusViolation(
                "paper-window", rec.coords, ts,
                f"|tr| = {ts} lies strictly inside W_{d}"))

        if kind == "elliptic":
            # (ii) corrected elliptic ceiling
            if rec.trace.is_rational():
                too_big = emax.value < abs(rec.trace.as_fraction())
            else:
                too_big = (abs_tr.embed(Fraction(1, 2 ** 64)).compare(
                    emax.value.interval(Fraction(1, 2 ** 64))) == 1)
            if too_big:
                corrected.append(CensusViolation(
                    "elliptic-max", rec.coords, ts,
                    f"elliptic |tr| exceeds 2cos(pi/{emax.m})"))
            # (v) finite order with phi(2m) <= 4d (phi(2m_proj) = phi(m_SL2))
            if rec.klass.order is None:
                order_fail.append(CensusViolation(
                    "elliptic-order", rec.coords, ts, "no finite order found"))
            elif euler_phi(rec.klass.order) > 4 * d:
                order_fail.append(CensusViolation(
                    "elliptic-order", rec.coords, ts,
                    f"order {rec.klass.order}: phi exceeds 4d = {4 * d}"))
        else:
            # (iii) hyperbolic Mahler floor, when the bound is informative
            if ts not in mahler_entries and rec.trace.is_rational():
                entry = _trace_mahler_entry(rec.trace.as_fraction())
                mahler_entries[ts] = entry
                if vout.informative and entry.measure.compare(vout_exp) == -1:
                    corrected.append(CensusViolation(
                        "hyperbolic-mahler", rec.coords, ts,
                        f"log M = {i_log(entry.measure).decimal(8)} below the "
                        f"degree-{2 * d} floor {vout.value.decimal(8)}"))

    def _frac(t: Optional[FieldElement]) -> Optional[Fraction]:
        if t is None:
            return None
        return t.as_fraction() if t.is_rational() else None

    checks = {
        "no_paper_window_content": not paper_hits,
        "no_corrected_violations": not corrected,
        "all_traces_integral": not integrality,
        "all_elliptic_orders_bounded": not order_fail,
        "no_parabolics": not parabolic,
    }
    if min_hyp is not None:
        checks["hyperbolic_half_of_window"] = (
            min_hyp.is_rational()
            and Interval(min_hyp.as_fraction()).compare(window.upper) == 1)

    return CensusReport(
        d=d, count=len(records), class_counts=class_counts,
        trace_multiset=sorted(multiset.items(), key=lambda kv: _sort_key(kv[0])),
        min_hyperbolic_abs_trace=_frac(min_hyp),
        max_elliptic_abs_trace=_frac(max_ell),
        window=window, elliptic_max=emax, voutier=vout,
        paper_window_hits=paper_hits, corrected_violations=corrected,
        integrality_failures=integrality, order_failures=order_fail,
        parabolic_elements=parabolic,
        trace_mahler=sorted(mahler_entries.values(), key=lambda e: _sort_key(e.trace)),
        checks=checks)


def _sort_key(trace_str: str) -> Fraction:
    return Fraction(trace_str)


def _trace_mahler_entry(t: Fraction) -> TraceMahlerEntry:
    """Compare |tr| with 2cosh(log M / 2) and the paper's 2cosh(log M / 4)."""
    t2 = t * t - 2
    poly, _ = poly_from_fractions([Fraction(1), -t2, Fraction(1)])
    m = mahler_measure(poly, Fraction(1, 10 ** 14))
    with workprec(128):
        logm = i_log(m)
        half = 2 * i_cosh(logm / 2)
        quarter = 2 * i_cosh(logm / 4)
    return TraceMahlerEntry(
        trace=_trace_str_fraction(t), trace_of_square=_trace_str_fraction(t2),
        measure=m, two_cosh_half_log_m=half, two_cosh_quarter_log_m=quarter)


def _trace_str_fraction(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


# -- invariant trace field check ----------------------------------------------------------

@dataclass
class TraceRingReport:
    all_squares_integral: bool
    failures: list[tuple[tuple[int, ...], str]]
    distinct_square_traces: list[str]
    span_dimension: int
    field_degree: int

    @property
    def generates_full_field(self) -> bool:
        return self.span_dimension == self.field_degree


def invariant_trace_check(records: Sequence[ElementRecord]) -> TraceRingReport:
    """tr(g^2) = tr(g)^2 - 2 must be an algebraic integer for every record."""
    failures = []
    seen: dict[tuple, FieldElement] = {}
    for rec in records:
        t2 = rec.trace * rec.trace - rec.element.algebra.field.from_rational(2)
        if t2.coords not in seen:
            seen[t2.coords] = t2
            if not t2.is_integral():
                failures.append((rec.coords, _trace_str(t2)))
    field = records[0].element.algebra.field if records else None
    degree = field.degree if field else 0
    # rational span of {1} u {tr(g^2)} inside the field
    vectors = [[Fraction(1)] + [Fraction(0)] * (degree - 1)] if degree else []
    vectors += [list(t.coords) for t in seen.values()]
    dim = _rank(vectors) if vectors else 0
    return TraceRingReport(
        all_squares_integral=not failures,
        failures=failures,
        distinct_square_traces=sorted((_trace_str(t) for t in seen.values()),
                                      key=_sort_key_safe),
        span_dimension=dim,
        field_degree=degree)


def _sort_key_safe(s: str):
    try:
        return (0, Fraction(s), "")
    except ValueError:
        return (1, Fraction(0), s)


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [v * inv for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# -- generation certificates -----------------------------------------------------------------

@dataclass
class WordCertificate:
    target_coords: tuple[Fraction, ...]
    status: str                     # certified | inconclusive
    word: Optional[list[int]]       # signed 1-based indices into the generator list
    method: str                     # trivial | greedy | bfs | none
    detail: str = ""

    @property
    def length(self) -> Optional[int]:
        return len(self.word) if self.word is not None else None


@dataclass
class GenerationCertificate:
    generators: list[tuple[Fraction, ...]]
    projective: bool
    word_budget: int
    node_cap: int
    certificates: list[WordCertificate]
    counters: dict

    @property
    def all_certified(self) -> bool:
        return all(c.status == "certified" for c in self.certificates)

    @property
    def max_length(self) -> Optional[int]:
        lens = [c.length for c in self.certificates if c.length is not None]
        return max(lens) if lens else None


def _float_matrix(elem: QuatElement) -> np.ndarray:
    a = float(elem.algebra.a.embed(Fraction(1, 2 ** 53)))
    sq = math.sqrt(a)
    b = float(elem.algebra.b.embed(Fraction(1, 2 ** 53)))
    x0, x1, x2, x3 = (float(c.embed(Fraction(1, 2 ** 53))) for c in elem.coords)
    return np.array([[x0 + x1 * sq, x2 + x3 * sq],
                     [b * (x2 - x3 * sq), x0 - x1 * sq]], dtype=float)


def _dist_to_i(m: np.ndarray) -> float:
    """Hyperbolic distance from m.i to i (det-1 matrices)."""
    c, d = m[1][0], m[1][1]
    den = c * c + d * d
    x = (m[0][0] * c + m[0][1] * d) / den
    y = 1.0 / den
    arg = 1.0 + (x * x + (y - 1.0) ** 2) / (2.0 * y)
    return math.acosh(max(1.0, arg))


def _is_done(elem: QuatElement, projective: bool) -> bool:
    return elem.is_pm_one() if projective else elem.is_one()


class _Moves:
    """Signed generator alphabet with exact elements and float matrices."""

    def __init__(self, generators: Sequence[QuatElement], projective: bool):
        self.generators = list(generators)
        self.projective = projective
        self.entries = []           # (signed_index, element, inverse_float)
        for idx, g in enumerate(self.generators):
            if g.nrd() != 1:
                raise ValueError(f"generator {idx} has reduced norm != 1")
            if _is_done(g, projective):
                continue
            ginv = g.conj()
            self.entries.append((idx + 1, g, _float_matrix(ginv)))
            self.entries.append((-(idx + 1), ginv, _float_matrix(g)))

    def element(self, signed: int) -> QuatElement:
        g = self.generators[abs(signed) - 1]
        return g if signed > 0 else g.conj()


def _multiply_word(moves: _Moves, word: Sequence[int], algebra) -> QuatElement:
    acc = algebra.one()
    for s in word:
        acc = acc * moves.element(s)
    return acc


def _greedy_reduce(target: QuatElement, moves: _Moves, budget: int,
                   projective: bool) -> Optional[list[int]]:
    word: list[int] = []
    remainder = target
    dist = _dist_to_i(_float_matrix(remainder))
    while len(word) < budget:
        if _is_done(remainder, projective):
            return word
        best = None
        for signed, gel, ginv_f in moves.entries:
            cand = gel.conj() * remainder
            if _is_done(cand, projective):
                word.append(signed)
                return word
            d = _dist_to_i(_float_matrix(cand))
            if best is None or d < best[0] - 1e-12:
                best = (d, signed, cand)
        if best is None or best[0] >= dist - 1e-9:
            return None                      # stall
        dist = best[0]
        word.append(best[1])
        remainder = best[2]
    return None


def _canonical_key(elem: QuatElement, projective: bool):
    coords = tuple(c.coords for c in elem.coords)
    if not projective:
        return coords
    flat = [x for cs in coords for x in cs]
    for v in flat:
        if v > 0:
            return coords
        if v < 0:
            return tuple(tuple(-x for x in cs) for cs in coords)
    return coords


def _bidirectional_bfs(target: QuatElement, moves: _Moves, budget: int,
                       node_cap: int, projective: bool,
                       prune_norm: Optional[float] = None) -> Optional[list[int]]:
    """Shortest word (within the pruned region) with product = target (up to
    sign in projective mode), or None."""
    algebra = target.algebra
    one = algebra.one()
    key = lambda e: _canonical_key(e, projective)

    fwd = {key(one): (0, (), one)}
    bwd = {key(target): (0, (), target)}
    fwd_frontier = [(one, ())]
    bwd_frontier = [(target, ())]
    fdepth = bdepth = 0
    best: Optional[tuple[int, list[int]]] = None

    def try_match(k, flen, fword, blen, bword):
        nonlocal best
        total = flen + blen
        if total <= budget and (best is None or total < best[0]):
            best = (total, list(fword) + list(bword))

    # initial trivial match
    if key(one) in bwd:
        blen, bword, _ = bwd[key(one)]
        try_match(None, 0, (), blen, bword)

    while True:
        if best is not None and best[0] <= fdepth + bdepth:
            return best[1]
        if fdepth + bdepth >= budget:
            return best[1] if best else None
        if len(fwd) + len(bwd) > node_cap:
            return best[1] if best else None
        expand_fwd = len(fwd_frontier) <= len(bwd_frontier)
        if expand_fwd and not fwd_frontier:
            return best[1] if best else None
        if not expand_fwd and not bwd_frontier:
            return best[1] if best else None
        if expand_fwd:
            fdepth += 1
            nxt = []
            for val, word in fwd_frontier:
                for signed, gel, _ in moves.entries:
                    new = val * gel
                    if prune_norm is not None and _float_norm(new) > prune_norm:
                        continue
                    k = key(new)
                    if k in fwd:
                        continue
                    nw = word + (signed,)
                    fwd[k] = (fdepth, nw, new)
                    nxt.append((new, nw))
                    if k in bwd:
                        blen, bword, _ = bwd[k]
                        try_match(k, fdepth, nw, blen, bword)
            fwd_frontier = nxt
        else:
            bdepth += 1
            nxt = []
            for val, word in bwd_frontier:
                for signed, gel, _ in moves.entries:
                    # suffix gains letter s at its front: v' = v * s^{-1}
                    new = val * gel.conj()
                    if prune_norm is not None and _float_norm(new) > prune_norm:
                        continue
                    k = key(new)
                    if k in bwd:
                        continue
                    nw = (signed,) + word
                    bwd[k] = (bdepth, nw, new)
                    nxt.append((new, nw))
                    if k in fwd:
                        flen, fword, _ = fwd[k]
                        try_match(k, flen, fword, bdepth, nw)
            bwd_frontier = nxt


def _float_norm(elem: QuatElement) -> float:
    return float(np.max(np.abs(_float_matrix(elem))))


def _certify_target(args):
    target, moves, budget, node_cap, projective, strategy, prune_norm = args
    algebra = target.algebra
    if _is_done(target, projective):
        return WordCertificate(tuple(c.coords[0] for c in target.coords),
                               "certified", [], "trivial")
    word = None
    method = "none"
    if strategy in ("auto", "greedy"):
        word = _greedy_reduce(target, moves, budget, projective)
        method = "greedy"
    if word is None and strategy in ("auto", "bfs"):
        word = _bidirectional_bfs(target, moves, budget, node_cap, projective,
                                  prune_norm)
        method = "bfs"
    tcoords = tuple(c.coords[0] for c in target.coords)
    if word is None:
        return WordCertificate(tcoords, "inconclusive", None, method,
                               "budget exhausted; NOT a disproof of generation")
    prod = _multiply_word(moves, word, algebra)
    ok = (prod == target) or (projective and prod == -target)
    if not ok:
        return WordCertificate(tcoords, "inconclusive", None, method,
                               "internal verification failed")
    return WordCertificate(tcoords, "certified", list(word), method)


def verify_generation(generators: Sequence[QuatElement] | Sequence[ElementRecord],
                      targets: Sequence[QuatElement] | Sequence[ElementRecord],
                      word_budget: int = 20,
                      node_cap: int = 2_000_000,
                      strategy: str = "auto",
                      projective: bool = True,
                      workers: int = 1,
                      prune_factor: float = 8.0) -> GenerationCertificate:
    """Certify each target as a word over the generators (inverses included).

    Greedy hyperbolic reduction is the fast path; bidirectional BFS with exact
    deduplication is the authority.  Every emitted word is re-multiplied in
    exact quaternion arithmetic.  'inconclusive' never claims non-generation.
    """
    gens = [g.element if isinstance(g, ElementRecord) else g for g in generators]
    tgts = [t.element if isinstance(t, ElementRecord) else t for t in targets]
    if not gens:
        raise ValueError("generator set must be nonempty")
    if strategy not in ("auto", "greedy", "bfs"):
        raise ValueError(f"unknown strategy {strategy!r}")
    moves = _Moves(gens, projective)
    prune = None
    if tgts:
        prune = prune_factor * max(max(_float_norm(t) for t in tgts),
                                   max(_float_norm(g) for g in gens))
    tasks = [(t, moves, word_budget, node_cap, projective, strategy, prune)
             for t in tgts]
    if workers > 1 and len(tasks) > 1:
        import multiprocessing as mp
        with mp.Pool(workers) as pool:
            certs = pool.map(_certify_target, tasks, chunksize=16)
    else:
        certs = [_certify_target(t) for t in tasks]
    counters = {
        "targets": len(tgts),
        "certified": sum(c.status == "certified" for c in certs),
        "inconclusive": sum(c.status != "certified" for c in certs),
        "greedy_words": sum(c.method == "greedy" for c in certs),
        "bfs_words": sum(c.method == "bfs" for c in certs),
    }
    return GenerationCertificate(
        generators=[tuple(c.coords[0] for c in g.coords) for g in gens],
        projective=projective, word_budget=word_budget, node_cap=node_cap,
        certificates=certs, counters=counters)
