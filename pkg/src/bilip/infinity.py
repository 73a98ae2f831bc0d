"""Geometry of plane curves at infinity: trace at infinity, local charts, tangent cones."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import upoly
from .gaussian import GaussianRational, as_gr
from .poly import MultiPoly, homogenize, substitute

__all__ = [
    "PointAtInfinity",
    "Chart",
    "CoeffValuation",
    "LocalModel",
    "TangentCone",
    "binary_form_roots",
    "points_at_infinity",
    "infinity_residual_degree",
    "local_model",
    "tangent_cone",
    "cone_criterion",
    "binary_form_gcd",
]

U, V = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)


@dataclass(frozen=True)
class PointAtInfinity:
    """Root ``[a:b]`` of the top form f_d, normalized so the first nonzero coordinate is 1."""

    coords: Tuple[GaussianRational, GaussianRational]
    mult_a: int

    def __post_init__(self):
        a, b = self.coords
        if a.is_zero() and b.is_zero():
            raise ValueError("[0:0] is not a projective point")
        if (a != 1) if not a.is_zero() else (b != 1):
            raise ValueError("point must be normalized (first nonzero coordinate = 1)")
        if self.mult_a < 1:
            raise ValueError("multiplicity must be positive")

    @classmethod
    def parse(cls, text: str, mult_a: int = 1) -> "PointAtInfinity":
        """Read ``a:b`` (or ``[a:b]``) and normalize."""
        body = text.strip().strip("[]")
        a_txt, b_txt = body.split(":")
        from .parser import parse_constant

        a, b = parse_constant(a_txt), parse_constant(b_txt)
        if a:
            a, b = GaussianRational(1), b / a
        else:
            b = GaussianRational(1)
        return cls((a, b), mult_a)

    def sort_key(self):
        a, b = self.coords
        return (a.re, a.im, b.re, b.im)

    def __str__(self):
        return f"[{self.coords[0]}:{self.coords[1]}]"


@dataclass(frozen=True)
class Chart:
    """Linear change ``(x, y) = matrix @ (X, Y)`` sending the point to [1:0:0]."""

    matrix: Tuple[Tuple[GaussianRational, GaussianRational], Tuple[GaussianRational, GaussianRational]]

    @classmethod
    def for_point(cls, p: PointAtInfinity) -> "Chart":
        a, b = p.coords
        one, zero = GaussianRational(1), GaussianRational(0)
        if a.is_zero():
            return cls(((zero, one), (one, zero)))
        return cls(((one, zero), (b, one)))

    def pull_back(self, f: MultiPoly) -> MultiPoly:
        X, Y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        (a11, a12), (a21, a22) = self.matrix
        return substitute(f, [X * a11 + Y * a12, X * a21 + Y * a22])

    def describe(self) -> str:
        (a11, a12), (a21, a22) = self.matrix
        return f"x = {_lin(a11, a12)}, y = {_lin(a21, a22)}"


def _lin(cx: GaussianRational, cy: GaussianRational) -> str:
    parts = []
    for c, name in ((cx, "X"), (cy, "Y")):
        if c.is_zero():
            continue
        if c == 1:
            parts.append(name)
        elif c.is_real():
            parts.append(f"{c}*{name}")
        else:
            parts.append(f"({c})*{name}")
    return " + ".join(parts) or "0"


@dataclass(frozen=True)
class CoeffValuation:
    """``f_{d-m+k}(1, u) = u**(k + a_k) * h_k(1, u)``; ``a_k`` is None when h_k = 0."""

    k: int
    a_k: Optional[int]
    h_nonzero: bool


@dataclass(frozen=True)
class LocalModel:
    point: PointAtInfinity
    chart: Chart
    d: int
    g: MultiPoly  # F(1, u, v): the local equation at t = 0
    m: int
    lowest_form: MultiPoly
    lam: Optional[GaussianRational]  # set when the lowest form of g is lam * v**m
    coeff_valuations: Tuple[CoeffValuation, ...]

    def g_at(self, t) -> MultiPoly:
        """The local equation ``g_t = F(1, u, v) - t * v**d`` of the level f = t."""
        return self.g - (V**self.d) * as_gr(t)

    @property
    def tangent_to_infinity(self) -> bool:
        return self.lam is not None

    @property
    def f_top_valuation(self) -> int:
        """u-valuation of f_d(1, u); equals ``m + a_m`` in the tangent case."""
        return min(e[0] for e, _ in self.g.items() if e[1] == 0)


@dataclass(frozen=True)
class TangentCone:
    form: MultiPoly
    lines: Tuple[Tuple[Tuple[GaussianRational, GaussianRational], int], ...]  # ((a, b), mult): a*u + b*v = 0
    residual_degree: int

    @property
    def degree(self) -> int:
        return self.form.degree


def binary_form_roots(form: MultiPoly):
    """Roots of a homogeneous form in two variables on P^1, over Q(i).

    Returns ``(roots, residual)`` where ``roots`` lists ``((a, b), mult)`` with
    ``(a, b)`` normalized and ``residual`` lists the unsplit factors of the
    dehomogenized form ``form(1, y)`` with their multiplicities.
    """
    if form.nvars != 2 or not form.is_homogeneous() or form.is_zero():
        raise ValueError("expected a nonzero binary form")
    d = form.degree
    q = [GaussianRational(0)] * (d + 1)
    for (i, j), c in form.items():
        q[j] = c
    q = upoly.trim(q)
    roots = []
    one = GaussianRational(1)
    found, residual = upoly.roots_in_qi(q)
    for r, k in found:
        roots.append(((one, r), k))
    if upoly.degree(q) < d:
        roots.append(((GaussianRational(0), one), d - upoly.degree(q)))
    return roots, residual


def _top_form(f: MultiPoly) -> MultiPoly:
    if f.nvars != 2:
        raise ValueError("plane curves only: expected 2 variables")
    if f.is_constant():
        raise ValueError("constant polynomial has no points at infinity")
    return f.leading_form()


def points_at_infinity(f: MultiPoly) -> List[PointAtInfinity]:
    """Q(i)-rational points of the trace at infinity ``{f_d = 0}``, sorted."""
    roots, _ = binary_form_roots(_top_form(f))
    pts = [PointAtInfinity(coords, k) for coords, k in roots]
    return sorted(pts, key=PointAtInfinity.sort_key)


def infinity_residual_degree(f: MultiPoly) -> int:
    """Number of points at infinity (with multiplicity) not defined over Q(i)."""
    _, residual = binary_form_roots(_top_form(f))
    return sum(upoly.degree(g) * k for g, k in residual)


def _u_valuation(coeffs: dict) -> Optional[int]:
    return min(coeffs) if coeffs else None


def local_model(f: MultiPoly, p: PointAtInfinity) -> LocalModel:
    """Local equation of the closure of the levels of f at ``p`` in the chart where p = [1:0:0]."""
    top = _top_form(f)
    if top.evaluate(list(p.coords)):
        raise ValueError(f"{p} is not on the trace at infinity")
    chart = Chart.for_point(p)
    fc = chart.pull_back(f)
    d = fc.degree
    F = homogenize(fc)
    g = substitute(F, [MultiPoly.constant(2, 1), U, V])
    m = g.order
    low = g.lowest_form()
    lam = None
    if len(low) == 1:
        ((e, c),) = low.items()
        if e == (0, m):
            lam = c
    vals = []
    for k in range(1, m + 1):
        col = {e[0]: c for e, c in g.items() if e[1] == m - k}
        val = _u_valuation(col)
        vals.append(CoeffValuation(k, None if val is None else val - k, val is not None))
    return LocalModel(p, chart, d, g, m, low, lam, tuple(vals))


def _strip_v(form: MultiPoly) -> Tuple[int, list]:
    """Write ``form = v**alpha * A(u, v)`` with v not dividing A; return alpha, A(u, 1) ascending."""
    alpha = min(e[1] for e in form.terms)
    deg = form.degree
    coeffs = [GaussianRational(0)] * (deg - alpha + 1)
    for (i, j), c in form.items():
        coeffs[i] = c
    return alpha, upoly.trim(coeffs)


def tangent_cone(model: LocalModel, t) -> TangentCone:
    g_t = model.g_at(t)
    assert not g_t.is_zero(), "local equation vanishes identically"
    form = g_t.lowest_form()
    alpha, a = _strip_v(form)
    lines = []
    one = GaussianRational(1)
    if alpha:
        lines.append(((GaussianRational(0), one), alpha))
    roots, residual = upoly.roots_in_qi(a)
    for r, k in roots:
        lines.append(((one, -r), k))
    return TangentCone(form, tuple(lines), sum(upoly.degree(g) * k for g, k in residual))


def binary_form_gcd(A: MultiPoly, B: MultiPoly) -> Tuple[int, list]:
    """gcd of two binary forms as ``(power of v, monic gcd of the v-free parts at v = 1)``."""
    alpha, a = _strip_v(A)
    beta, b = _strip_v(B)
    return min(alpha, beta), upoly.gcd_(a, b)


def cone_criterion(model: LocalModel, s, t) -> bool:
    """True when the tangent cones of the levels s and t share a line other than T_pH = {v = 0}."""
    s, t = as_gr(s), as_gr(t)
    if s == t:
        raise ValueError("cone criterion needs two distinct values")
    A = model.g_at(s).lowest_form()
    B = model.g_at(t).lowest_form()
    _, common = binary_form_gcd(A, B)
    return upoly.degree(common) >= 1


def cone_criterion_samples(model: LocalModel, samples: Sequence) -> List[Tuple[object, object, bool]]:
    out = []
    for i, s in enumerate(samples):
        for t in samples[i + 1 :]:
            if as_gr(s) != as_gr(t):
                out.append((s, t, cone_criterion(model, s, t)))
    return out
