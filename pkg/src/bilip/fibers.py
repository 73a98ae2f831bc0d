"""Single-variable classification and separation of fibers at infinity.

A nonconstant polynomial either factors through one affine form (and then
generic fibers stay a fixed positive distance apart) or some pair of generic
fibers gets arbitrarily close near a point at infinity.  This module decides
which, symbolically.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import numeric, upoly
from .gaussian import GaussianRational, as_gr
from .infinity import (
    LocalModel,
    PointAtInfinity,
    cone_criterion,
    infinity_residual_degree,
    local_model,
    points_at_infinity,
)
from .poly import MultiPoly, partial_derivative, substitute
from .puiseux import PuiseuxBranch, PuiseuxError, puiseux_roots, reconstruction_valuation, valuation_gap

__all__ = [
    "Classification",
    "classify_single_variable",
    "BranchData",
    "SeparationReport",
    "AnalysisConfig",
    "AnalysisVerdict",
    "PlaneRestriction",
    "separation_analysis",
    "restrict_to_plane",
    "full_verdict",
    "DISTANCE_ZERO",
    "CONE_CRITERION",
    "INCONCLUSIVE",
    "BILIPSCHITZ_TRIVIAL_VALUES_EXIST",
    "GENERIC_FIBER_DISTANCE_ZERO",
    "INCOMPLETE",
]

DISTANCE_ZERO = "DISTANCE_ZERO"
CONE_CRITERION = "CONE_CRITERION"
INCONCLUSIVE = "INCONCLUSIVE"

BILIPSCHITZ_TRIVIAL_VALUES_EXIST = "BILIPSCHITZ_TRIVIAL_VALUES_EXIST"
GENERIC_FIBER_DISTANCE_ZERO = "GENERIC_FIBER_DISTANCE_ZERO"
INCOMPLETE = "INCOMPLETE"

DEFAULT_T_SAMPLES = ("0", "1", "2", "1+i", "-3")
# Deterministic replacements for exceptional t samples, tried in order.
REPLACEMENT_T = ("3", "-1/2", "5+2*i", "7", "-11/3", "2-3*i", "13/2", "-5-i")
MAX_ORDER = 64


# -- classification ----------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    """Whether ``f = P(l(x))`` for a linear form l (constants absorbed into P)."""

    single_variable: bool
    direction: Optional[Tuple[GaussianRational, ...]] = None
    univariate: Optional[Tuple[GaussianRational, ...]] = None  # P, ascending
    annihilators: Tuple[Tuple[GaussianRational, ...], ...] = ()
    witness: str = ""

    def linear_form(self, nvars: int) -> MultiPoly:
        return MultiPoly.linear_form(self.direction)

    def univariate_poly(self) -> MultiPoly:
        return MultiPoly(1, {(k,): c for k, c in enumerate(self.univariate)})


def _small_points(n: int):
    """Integer vectors with entries in growing boxes, in a fixed order."""
    for bound in range(1, 6):
        for v in itertools.product(range(-bound, bound + 1), repeat=n):
            if max(abs(c) for c in v) == bound:
                yield tuple(GaussianRational(c) for c in v)


def _normalize(vec: Sequence[GaussianRational]) -> Tuple[GaussianRational, ...]:
    lead = next(c for c in vec if c)
    return tuple(c / lead for c in vec)


def classify_single_variable(f: MultiPoly) -> Classification:
    if f.is_constant():
        raise ValueError("constant polynomial")
    n, d = f.nvars, f.degree
    top = f.leading_form()
    if d == 1:
        coeffs = [top.coefficient(tuple(int(k == j) for k in range(n))) for j in range(n)]
        return _finish_single(f, _normalize(coeffs))
    point = next(z for z in _small_points(n) if top.evaluate(list(z)))
    grad = [partial_derivative(top, [GaussianRational(int(k == j)) for k in range(n)]).evaluate(list(point))
            for j in range(n)]
    ell = _normalize(grad)
    L = MultiPoly.linear_form(ell)
    c = top.evaluate(list(point)) / L.evaluate(list(point)) ** d
    if top != (L**d) * c:
        return Classification(False, witness="top-degree form is not a power of a linear form")
    k = next(j for j, a in enumerate(ell) if a)
    annihilators = []
    for j in range(n):
        if j == k:
            continue
        xi = [GaussianRational(0)] * n
        xi[j] = GaussianRational(1)
        xi[k] = -ell[j]
        if partial_derivative(f, xi):
            return Classification(
                False,
                witness=f"top-degree form is a power of {_fmt_vec(ell)} but f varies along {_fmt_vec(xi)}",
            )
        annihilators.append(tuple(xi))
    return _finish_single(f, ell, annihilators=tuple(annihilators))


def _finish_single(f, ell, annihilators=None) -> Classification:
    n = f.nvars
    k = next(j for j, a in enumerate(ell) if a)
    if annihilators is None:
        annihilators = []
        for j in range(n):
            if j != k:
                xi = [GaussianRational(0)] * n
                xi[j] = GaussianRational(1)
                xi[k] = -ell[j]
                annihilators.append(tuple(xi))
        annihilators = tuple(annihilators)
    # P(tau) = f(tau * e_k) since l(e_k) = 1.
    T = MultiPoly.variable(1, 0)
    images = [T if j == k else MultiPoly.zero(1) for j in range(n)]
    P = substitute(f, images)
    coeffs = tuple(P.coefficient((i,)) for i in range(P.degree + 1))
    if substitute(P, [MultiPoly.linear_form(ell)]) != f:
        raise ArithmeticError("single-variable reconstruction failed")
    return Classification(True, tuple(ell), coeffs, annihilators, "")


def _fmt_vec(v) -> str:
    return "(" + ", ".join(str(c) for c in v) + ")"


def critical_values(cls: Classification) -> List[complex]:
    """Values P(c) at the critical points of P (the values excluded from triviality)."""
    P = list(cls.univariate)
    dP = upoly.deriv(P)
    if upoly.degree(dP) < 1:
        return []
    roots, residual = upoly.roots_in_qi(dP)
    out = [complex(upoly.evaluate(P, r)) for r, _ in roots]
    for fac, _ in residual:
        for z in upoly.numeric_roots(fac, numeric.MP):
            out.append(complex(upoly.evaluate([c.to_mpc(numeric.MP) for c in P], z)))
    out = sorted(out, key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    dedup: List[complex] = []
    for z in out:
        if not any(abs(z - w) <= 1e-12 * max(1.0, abs(z)) for w in dedup):
            dedup.append(z)
    return dedup


# -- per-point separation --------------------------------------------------------------------


@dataclass(frozen=True)
class BranchData:
    ramification: int
    beta: int
    b0: str
    kappa: Optional[Fraction]  # measured gap in u-units, beyond the leading exponent
    exponent: Optional[Fraction]  # decay exponent of the level distance along this branch
    kappa_by_sample: Tuple[Tuple[str, Optional[Fraction]], ...] = ()

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.beta, self.ramification)


@dataclass(frozen=True)
class SeparationReport:
    point: PointAtInfinity
    verdict: str
    m: int
    d: int
    tangent_to_infinity: bool
    cone_criterion: Optional[bool] = None
    beta: Optional[int] = None  # multiplicity of the top form at the point
    kappa: Optional[Fraction] = None  # (d - m) beta / m
    kappa_measured: Optional[Fraction] = None
    kappa_consistent: Optional[bool] = None
    exponent_e: Optional[Fraction] = None  # fastest measured decay exponent
    exponent_e_formula: Optional[Fraction] = None  # (beta - m)/beta + (m - d)/m
    branch_data: Tuple[BranchData, ...] = ()
    ratios_equal: Optional[bool] = None
    ordering_holds: Optional[bool] = None  # m < beta <= d
    order_used: Optional[int] = None
    reconstruction_min: Optional[Fraction] = None
    t_reference: Optional[str] = None
    t_used: Tuple[str, ...] = ()


@dataclass
class _Sample:
    t: GaussianRational
    branches: Optional[List[PuiseuxBranch]] = None
    reason: str = ""

    @property
    def signature(self):
        return tuple(sorted((b.ramification, b.beta) for b in self.branches))


def _expected_exponent(m: int, beta: int, d: int) -> Fraction:
    return Fraction(beta - m, beta) + Fraction(m - d, m)


def _decay_exponent(ratio: Fraction, kappa: Fraction) -> Fraction:
    """Exponent of |y_t(x) - y_s(x)| for a branch v ~ u**ratio whose levels differ at u**(ratio + kappa)."""
    return 1 - (1 + kappa) / ratio


def _screen_regular(f: MultiPoly, t: GaussianRational, rng: random.Random, lines: int = 2) -> bool:
    """False when f - t restricts to a polynomial with a repeated root on every test line."""
    n = f.nvars
    h = f - MultiPoly.constant(n, t)
    T = MultiPoly.variable(1, 0)
    for _ in range(lines):
        p0 = [GaussianRational(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(n)]
        dv = [GaussianRational(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(n)]
        r = substitute(h, [MultiPoly.constant(1, a) + T * b for a, b in zip(p0, dv)])
        coeffs = [r.coefficient((k,)) for k in range(max(r.degree, 0) + 1)]
        if upoly.degree(upoly.gcd_(coeffs, upoly.deriv(coeffs))) < 1:
            return True
    return False


def _run_samples(f, model: LocalModel, samples: Sequence[GaussianRational], order: int, rng, notes: List[str]):
    """Expand every sample, replacing exceptional ones; returns good samples with the majority signature."""
    pool = list(samples)
    extra = [x for x in map(_parse_t, REPLACEMENT_T) if x not in pool]
    good: List[_Sample] = []
    target = len(samples)
    pending = list(pool)
    while pending:
        t = pending.pop(0)
        s = _Sample(t)
        if not _screen_regular(f, t, rng):
            s.reason = "level is not reduced"
        else:
            try:
                s.branches = puiseux_roots(model.g_at(t), order)
            except PuiseuxError as exc:
                s.reason = f"expansion failed: {exc}"
            else:
                if any(b.multiplicity > 1 for b in s.branches):
                    s.reason = "repeated root at the truncation order"
        if s.reason:
            notes.append(f"{model.point}: t={t} exceptional ({s.reason})")
            if extra:
                pending.append(extra.pop(0))
            continue
        good.append(s)
        if not pending and len(good) >= 2:
            counts = Counter(x.signature for x in good)
            major = counts.most_common(1)[0][0]  # ties go to the earliest sample
            odd = [x for x in good if x.signature != major]
            for x in odd:
                notes.append(f"{model.point}: t={x.t} exceptional (branch signature {x.signature} != {major})")
                good.remove(x)
                if extra:
                    pending.append(extra.pop(0))
    return good[: max(target, 2)]


def _match_gap(branch: PuiseuxBranch, ref: Sequence[PuiseuxBranch]):
    """Largest valuation gap to any reference branch of the same type; None if one agrees to the order."""
    best = None
    for r in ref:
        if (r.ramification, r.beta) != (branch.ramification, branch.beta):
            continue
        g = valuation_gap(branch, r)
        if g is None:
            return None, True
        if best is None or g > best:
            best = g
    return best, False


def _tangent_report(f, model: LocalModel, samples, order: int, rng, notes) -> SeparationReport:
    m, d = model.m, model.d
    beta = model.f_top_valuation
    kappa_formula = Fraction((d - m) * beta, m)
    base = dict(
        point=model.point,
        m=m,
        d=d,
        tangent_to_infinity=True,
        beta=beta,
        kappa=kappa_formula,
        exponent_e_formula=_expected_exponent(m, beta, d),
        ordering_holds=m < beta <= d,
    )
    if m >= d:
        notes.append(f"{model.point}: multiplicity equals the degree; nothing separates the levels here")
        return SeparationReport(verdict=INCONCLUSIVE, **base)
    if not m < beta <= d:
        notes.append(f"{model.point}: expected m < beta <= d, got m={m}, beta={beta}, d={d}")
    N = max(order, math.floor(Fraction(beta, m) + kappa_formula) + 1)
    while True:
        good = _run_samples(f, model, samples, N, rng, notes)
        if len(good) < 2:
            notes.append(f"{model.point}: fewer than two usable t samples")
            return SeparationReport(verdict=INCONCLUSIVE, order_used=N, **base)
        ref = good[0]
        unresolved = False
        per_branch: List[List[Tuple[str, Optional[Fraction]]]] = [[] for _ in ref.branches]
        for s in good[1:]:
            # Measure against the reference, in the reference's branch order.
            for k, rb in enumerate(ref.branches):
                gap, agrees = _match_gap(rb, s.branches)
                if agrees:
                    unresolved = True
                    per_branch[k].append((str(s.t), None))
                elif gap is None:
                    per_branch[k].append((str(s.t), None))
                else:
                    per_branch[k].append((str(s.t), gap - rb.leading_exponent))
        if unresolved and N < MAX_ORDER:
            N = min(2 * N, MAX_ORDER)
            continue
        break
    recon = min(reconstruction_valuation(model.g_at(s.t), s.branches, N) for s in good)
    data = []
    for rb, ks in zip(ref.branches, per_branch):
        vals = [k for _, k in ks if k is not None]
        kappa = min(vals) if vals else None
        expo = _decay_exponent(rb.leading_exponent, kappa) if kappa is not None else None
        b0 = str(rb.b0) if isinstance(rb.b0, GaussianRational) else _complex_str(rb.b0)
        data.append(BranchData(rb.ramification, rb.beta, b0, kappa, expo, tuple(ks)))
    measured = [b.kappa for b in data if b.kappa is not None]
    all_samples = [k for b in data for _, k in b.kappa_by_sample]
    consistent = bool(all_samples) and all(k == kappa_formula for k in all_samples)
    kappa_measured = measured[0] if measured and all(k == measured[0] for k in measured) else None
    exps = [b.exponent for b in data if b.exponent is not None]
    e = min(exps) if exps else None
    ratios = {b.ratio for b in data}
    verdict = DISTANCE_ZERO if e is not None and e < 0 else INCONCLUSIVE
    if verdict == INCONCLUSIVE:
        notes.append(f"{model.point}: no branch with a negative decay exponent")
    return SeparationReport(
        verdict=verdict,
        kappa_measured=kappa_measured,
        kappa_consistent=consistent,
        exponent_e=e,
        branch_data=tuple(data),
        ratios_equal=len(ratios) == 1,
        order_used=N,
        reconstruction_min=recon,
        t_reference=str(ref.t),
        t_used=tuple(str(s.t) for s in good),
        **base,
    )


def _complex_str(c) -> str:
    z = numeric.to_complex(c)
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}*i"


def separation_analysis(
    f: MultiPoly,
    t_samples: Sequence = DEFAULT_T_SAMPLES,
    order: int = 12,
    seed: int = 0,
    notes: Optional[List[str]] = None,
) -> List[SeparationReport]:
    """One report per Q(i)-rational point at infinity, ordered by coordinates."""
    if f.nvars != 2:
        raise ValueError("separation analysis works on polynomials in two variables")
    if f.degree < 2:
        raise ValueError("degree must be at least 2")
    notes = notes if notes is not None else []
    samples = [as_gr(t) if not isinstance(t, str) else _parse_t(t) for t in t_samples]
    if len(set(samples)) < 2:
        raise ValueError("need at least two distinct t samples")
    rng = random.Random(seed)
    reports = []
    for p in points_at_infinity(f):
        model = local_model(f, p)
        if not model.tangent_to_infinity:
            pairs = [cone_criterion(model, s, t) for s, t in itertools.combinations(samples, 2) if s != t]
            shared = all(pairs)
            if not shared and any(pairs):
                notes.append(f"{p}: tangent cones share a line only for some sample pairs")
            reports.append(
                SeparationReport(
                    point=p,
                    verdict=CONE_CRITERION if shared else INCONCLUSIVE,
                    m=model.m,
                    d=model.d,
                    tangent_to_infinity=False,
                    cone_criterion=shared,
                )
            )
            continue
        reports.append(_tangent_report(f, model, samples, order, rng, notes))
    missing = infinity_residual_degree(f)
    if missing:
        notes.append(f"{missing} point(s) at infinity are not defined over Q(i) and were skipped")
    return reports


def _parse_t(text: str) -> GaussianRational:
    from .parser import parse_constant

    return parse_constant(text)


# -- reduction to the plane --------------------------------------------------------------------


@dataclass(frozen=True)
class PlaneRestriction:
    poly: MultiPoly
    matrix: Tuple[Tuple[GaussianRational, ...], ...]
    seed: int
    attempts: int
    log: Tuple[str, ...]


def _det(rows) -> GaussianRational:
    a = [list(r) for r in rows]
    n = len(a)
    det = GaussianRational(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return GaussianRational(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c]
        for r in range(c + 1, n):
            factor = a[r][c] / a[c][c]
            if factor:
                a[r] = [x - factor * y for x, y in zip(a[r], a[c])]
    return det


def restrict_to_plane(f: MultiPoly, seed: int, max_attempts: int = 20) -> PlaneRestriction:
    """Compose with a random invertible linear map and keep the first two coordinates.

    A restriction is rejected when the degree drops or when it turns into a
    polynomial in one linear form although f is not one.
    """
    n = f.nvars
    if n < 3:
        raise ValueError("plane restriction needs at least three variables")
    if f.is_constant():
        raise ValueError("constant polynomial")
    f_single = classify_single_variable(f).single_variable
    log = []
    X, Y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    for attempt in range(max_attempts):
        rng = random.Random(seed + attempt)
        A = tuple(
            tuple(GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(n)) for _ in range(n)
        )
        if not _det(A):
            log.append(f"seed {seed + attempt}: singular matrix")
            continue
        images = [X * row[0] + Y * row[1] for row in A]
        g = substitute(f, images)
        if g.degree != f.degree:
            log.append(f"seed {seed + attempt}: degree dropped to {g.degree}")
            continue
        if g.degree >= 2 and classify_single_variable(g).single_variable and not f_single:
            log.append(f"seed {seed + attempt}: restriction became a polynomial in one linear form")
            continue
        return PlaneRestriction(g, A, seed + attempt, attempt + 1, tuple(log))
    raise ArithmeticError(f"no admissible plane restriction in {max_attempts} attempts")


# -- the whole decision ----------------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisConfig:
    t_samples: Tuple[str, ...] = DEFAULT_T_SAMPLES
    order: int = 12
    seed: int = 0

    def __post_init__(self):
        if not 4 <= self.order <= MAX_ORDER:
            raise ValueError(f"truncation order must lie in [4, {MAX_ORDER}]")


@dataclass(frozen=True)
class AnalysisVerdict:
    classification: Classification
    per_point: Tuple[SeparationReport, ...]
    conclusion: str
    notes: Tuple[str, ...] = ()
    critical_values: Tuple[complex, ...] = ()
    restriction: Optional[PlaneRestriction] = None


def full_verdict(f: MultiPoly, config: AnalysisConfig = AnalysisConfig()) -> AnalysisVerdict:
    if f.is_constant():
        raise ValueError("constant polynomial")
    cls = classify_single_variable(f)
    if cls.single_variable:
        return AnalysisVerdict(cls, (), BILIPSCHITZ_TRIVIAL_VALUES_EXIST, (), tuple(critical_values(cls)))
    notes: List[str] = []
    restriction = None
    plane = f
    if f.nvars >= 3:
        restriction = restrict_to_plane(f, config.seed)
        notes.extend(restriction.log)
        plane = restriction.poly
    reports = separation_analysis(plane, config.t_samples, config.order, config.seed, notes)
    hit = any(r.verdict in (DISTANCE_ZERO, CONE_CRITERION) for r in reports)
    if not reports:
        notes.append("no point at infinity is defined over Q(i)")
    conclusion = GENERIC_FIBER_DISTANCE_ZERO if hit else INCOMPLETE
    return AnalysisVerdict(cls, tuple(reports), conclusion, tuple(notes), (), restriction)
