"""Dense univariate polynomials over Q(i) as ascending coefficient lists.

Only what the binary-form and edge-polynomial code needs: Euclidean
arithmetic, square-free decomposition and root extraction in Q(i).
"""

from __future__ import annotations

from math import gcd
from typing import List, Sequence, Tuple

import mpmath

from .gaussian import GaussianRational, as_gr

UPoly = List[GaussianRational]

ZERO = GaussianRational(0)
ONE = GaussianRational(1)


def trim(a: Sequence) -> UPoly:
    a = [as_gr(c) for c in a]
    while a and not a[-1]:
        a.pop()
    return a


def degree(a: UPoly) -> int:
    return len(a) - 1 if a else -1


def add(a: UPoly, b: UPoly) -> UPoly:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)])


def sub(a: UPoly, b: UPoly) -> UPoly:
    return add(a, [-c for c in b])


def mul(a: UPoly, b: UPoly) -> UPoly:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return trim(out)


def scale(a: UPoly, c) -> UPoly:
    return trim([x * c for x in a])


def monic(a: UPoly) -> UPoly:
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def divmod_(a: UPoly, b: UPoly) -> Tuple[UPoly, UPoly]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(trim(a))
    if len(r) < len(b):
        return [], r
    q = [ZERO] * (len(r) - len(b) + 1)
    lead = b[-1]
    for k in range(len(r) - len(b), -1, -1):
        c = r[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] = r[k + j] - c * y
    return trim(q), trim(r[: len(b) - 1])


def exact_div(a: UPoly, b: UPoly) -> UPoly:
    q, r = divmod_(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def gcd_(a: UPoly, b: UPoly) -> UPoly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a)


def deriv(a: UPoly) -> UPoly:
    return trim([a[k] * k for k in range(1, len(a))])


def evaluate(a: Sequence, x):
    acc = ZERO if isinstance(x, GaussianRational) else 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def squarefree_decomposition(a: UPoly) -> List[Tuple[UPoly, int]]:
    """Yun's algorithm: ``a = lc * prod f_k**k`` with each f_k monic square-free."""
    a = trim(a)
    if degree(a) < 1:
        return []
    out = []
    a_m = monic(a)
    da_m = deriv(a_m)
    g = gcd_(a_m, da_m)
    b = exact_div(a_m, g)
    c = exact_div(da_m, g)
    d = sub(c, deriv(b))
    k = 1
    while degree(b) > 0:
        f = gcd_(b, d)
        if degree(f) > 0:
            out.append((f, k))
        b = exact_div(b, f)
        c = exact_div(d, f)
        d = sub(c, deriv(b))
        k += 1
    return out


def _gaussian_integer_coeffs(a: UPoly) -> UPoly:
    den = 1
    for c in a:
        for q in (c.re, c.im):
            den = den * q.denominator // gcd(den, q.denominator)
    return [c * den for c in a]


def numeric_roots(a: Sequence, ctx=None, extra_digits: int = 0) -> list:
    """All complex roots of a polynomial (ascending coefficients) via mpmath."""
    ctx = ctx or mpmath.mp
    coeffs = [c.to_mpc(ctx) if isinstance(c, GaussianRational) else ctx.mpc(c) for c in a]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    if len(coeffs) == 2:
        return [-coeffs[0] / coeffs[1]]
    with ctx.workdps(ctx.dps + extra_digits):
        for steps, extra in ((100, 20), (400, 60), (2000, 150)):
            try:
                roots = ctx.polyroots(list(reversed(coeffs)), maxsteps=steps, extraprec=extra)
                break
            except ctx.NoConvergence:
                continue
        else:
            roots = ctx.polyroots(list(reversed(coeffs)), maxsteps=5000, extraprec=300, error=True)[0]
    return [ctx.mpc(r) for r in roots]


def _rational_roots_squarefree(f: UPoly) -> List[GaussianRational]:
    """Roots in Q(i) of a square-free polynomial."""
    n = degree(f)
    if n < 1:
        return []
    if n == 1:
        return [-f[0] / f[1]]
    if n == 2:
        c, b, a = f
        disc = b * b - a * c * 4
        s = disc.sqrt()
        if s is None:
            return []
        return [(-b + s) / (a * 2), (-b - s) / (a * 2)]
    g = _gaussian_integer_coeffs(f)
    lead = g[-1]
    digits = sum(len(str(abs(c.re.numerator))) + len(str(abs(c.im.numerator))) for c in g)
    ctx = mpmath.MPContext()
    ctx.dps = 30 + digits
    found = []
    for z in numeric_roots(g, ctx):
        s = lead.to_mpc(ctx) * z
        cand = GaussianRational(int(ctx.nint(s.real)), int(ctx.nint(s.imag))) / lead
        if cand not in found and not evaluate(f, cand):
            found.append(cand)
    return found


def roots_in_qi(a: UPoly) -> Tuple[List[Tuple[GaussianRational, int]], List[Tuple[UPoly, int]]]:
    """Roots of ``a`` lying in Q(i) with multiplicities, plus the leftover factors.

    The second component lists ``(g, k)`` where ``g`` is a monic square-free
    factor without roots in Q(i) occurring with multiplicity ``k``.
    """
    roots: List[Tuple[GaussianRational, int]] = []
    residual: List[Tuple[UPoly, int]] = []
    for f, k in squarefree_decomposition(a):
        rs = _rational_roots_squarefree(f)
        rest = f
        for r in rs:
            rest = exact_div(rest, [-r, ONE])
            roots.append((r, k))
        if degree(rest) > 0:
            residual.append((monic(rest), k))
    roots.sort(key=lambda rk: rk[0].sort_key())
    return roots, residual
