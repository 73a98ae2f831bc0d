"""Newton polygons and Newton–Puiseux roots of g(u, v) = 0 in v at the origin.

Coefficients stay in Q(i) as long as every edge polynomial splits and every
needed root extraction is exact; otherwise the affected branch continues in
50-digit mpmath arithmetic.  Branches are reported in a uniformizing
parameter ``sigma`` with ``u = sigma**ramification``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import numeric, series, upoly
from .gaussian import GaussianRational, root_of_unity
from .numeric import MP
from .poly import MultiPoly

__all__ = [
    "PuiseuxError",
    "Edge",
    "NewtonPolygon",
    "newton_polygon",
    "PuiseuxBranch",
    "puiseux_roots",
    "reconstruction_valuation",
    "WeierstrassProfile",
    "weierstrass_profile",
    "valuation_gap",
]

Bivariate = Dict[Tuple[int, int], object]  # (u-exponent, v-exponent) -> coefficient

MAX_DEPTH = 200


class PuiseuxError(ArithmeticError):
    """The expansion could not be carried out (degenerate input or lifting failure)."""


def _as_dict(g) -> Bivariate:
    if isinstance(g, MultiPoly):
        if g.nvars != 2:
            raise ValueError("expected a polynomial in (u, v)")
        return dict(g.items())
    return {e: c for e, c in g.items() if not numeric.is_zero(c)}


# -- Newton polygon -----------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    """Hull segment from ``start`` (nearer the v-axis) to ``end``.

    All points (i, j) on the edge satisfy ``i + slope * j = const``; the leading
    term of a root generated by the edge is ``c * u**slope``.
    """

    start: Tuple[int, int]
    end: Tuple[int, int]
    slope: Fraction
    polynomial: Tuple  # ascending in Z, Z standing for c**q

    @property
    def height(self) -> int:
        return self.start[1] - self.end[1]


@dataclass(frozen=True)
class NewtonPolygon:
    support: frozenset
    edges: Tuple[Edge, ...]
    v_order: int  # ord g(0, v)
    v_adic: int  # largest power of v dividing g

    def lies_above(self, point: Tuple[int, int]) -> bool:
        i, j = point
        for e in self.edges:
            c = e.start[0] + e.slope * e.start[1]
            if i + e.slope * j < c:
                return False
        return True


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(g) -> NewtonPolygon:
    """Lower hull of the support of ``g`` between the lowest v-power and the v-axis."""
    G = _as_dict(g)
    if not G:
        raise ValueError("g is identically zero")
    if (0, 0) in G:
        raise ValueError("g is a unit at the origin (nonzero constant term)")
    pure_v = [j for (i, j) in G if i == 0]
    if not pure_v:
        raise ValueError("g(0, v) vanishes identically; not v-regular")
    mv = min(pure_v)
    j0 = min(j for (_, j) in G)
    # Points in the (j, i) plane, lowest i per column, restricted to j <= mv.
    best: Dict[int, int] = {}
    for i, j in G:
        if j <= mv and (j not in best or i < best[j]):
            best[j] = i
    pts = sorted((j, i) for j, i in best.items())
    hull: List[Tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    edges = []
    for (ja, ia), (jb, ib) in zip(hull, hull[1:]):
        slope = Fraction(ia - ib, jb - ja)
        q = slope.denominator
        level = ib + slope * jb
        phi_len = (jb - ja) // q + 1
        zero = next(iter(G.values())) * 0
        phi = [zero] * phi_len
        for (i, j), c in G.items():
            if ja <= j <= jb and i + slope * j == level:
                phi[(j - ja) // q] = c
        edges.append(Edge((ib, jb), (ia, ja), slope, tuple(phi)))
    edges.sort(key=lambda e: e.slope)
    return NewtonPolygon(frozenset(G), tuple(edges), mv, j0)


# -- branches -------------------------------------------------------------------------


@dataclass(frozen=True)
class PuiseuxBranch:
    """Truncated root ``v = psi(sigma) = sum coeffs[k] sigma**k`` with ``u = sigma**ramification``.

    ``coeffs`` holds the expansion modulo ``u**truncation_order``; ``beta`` is
    the index of the first nonzero coefficient ``b0``.
    """

    ramification: int
    beta: int
    b0: object
    coeffs: Tuple
    truncation_order: int
    multiplicity: int = 1

    def __post_init__(self):
        if self.ramification < 1 or self.beta < 1:
            raise ValueError("ramification and beta must be positive")
        if numeric.is_zero(self.b0):
            raise ValueError("leading coefficient must be nonzero")

    @property
    def exact(self) -> bool:
        return series.is_exact(self.coeffs)

    @property
    def leading_exponent(self) -> Fraction:
        return Fraction(self.beta, self.ramification)

    def conjugate(self, k: int) -> list:
        """Coefficients of ``psi(omega**k * sigma)``, omega a primitive r-th root of unity."""
        r = self.ramification
        if k % r == 0:
            return list(self.coeffs)
        exact = self.exact and 4 % r == 0
        coeffs = self.coeffs if exact else series.to_numeric(self.coeffs)
        return [c * root_of_unity(r, k * n, None if exact else MP) if not numeric.is_zero(c) else c
                for n, c in enumerate(coeffs)]

    def at_u(self, u: complex) -> complex:
        """Evaluate the truncated series at a complex u (principal branch of the root)."""
        s = complex(u) ** (1.0 / self.ramification) if u else 0j
        return sum(numeric.to_complex(c) * s**n for n, c in enumerate(self.coeffs))

    def coefficient_strings(self) -> List[Tuple[int, str]]:
        out = []
        for n, c in enumerate(self.coeffs):
            if not numeric.is_zero(c):
                out.append((n, str(c) if isinstance(c, GaussianRational) else _mpc_str(c)))
        return out


def _mpc_str(c) -> str:
    z = complex(c)
    return repr(z.real) if z.imag == 0 else f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}*i"


@dataclass
class _Raw:
    ramification: int
    terms: Dict[int, object]
    multiplicity: int


def _edge_roots(phi: Sequence) -> List[Tuple[object, int]]:
    """Nonzero roots of the edge polynomial with multiplicities, exact where possible."""
    if series.is_exact(phi):
        roots, residual = upoly.roots_in_qi(list(phi))
        out: List[Tuple[object, int]] = list(roots)
        for fac, k in residual:
            for z in upoly.numeric_roots(fac, MP):
                out.append((z, k))
        return [(z, k) for z, k in out if not numeric.is_zero(z)]
    zs = upoly.numeric_roots(list(phi), MP)
    clusters: List[List] = []
    for z in zs:
        for cl in clusters:
            if abs(cl[0] - z) <= MP.mpf("1e-12") * max(1, abs(z)):
                cl.append(z)
                break
        else:
            clusters.append([z])
    return [(sum(cl) / len(cl), len(cl)) for cl in clusters]


def _qth_root(z, q: int):
    if isinstance(z, GaussianRational):
        r = z.nth_root(q)
        if r is not None:
            return r
    return MP.root(numeric.to_mpc(z), q)


def _transform(G: Bivariate, p: int, q: int, c0) -> Bivariate:
    """``s**(-e) * G(s**q, s**p * (c0 + v1))`` with e the minimal weighted degree."""
    numeric_mode = not isinstance(c0, GaussianRational) or not series.is_exact(G.values())
    if numeric_mode:
        c0 = numeric.to_mpc(c0)
    e = min(q * i + p * j for i, j in G)
    jmax = max(j for _, j in G)
    pw = [c0**0]
    for _ in range(jmax):
        pw.append(pw[-1] * c0)
    out: Bivariate = {}
    scale = 0.0
    for (i, j), a in G.items():
        if numeric_mode:
            a = numeric.to_mpc(a)
        E = q * i + p * j - e
        for k in range(j + 1):
            term = a * math.comb(j, k) * pw[j - k]
            key = (E, k)
            out[key] = out[key] + term if key in out else term
        scale = max(scale, numeric.magnitude(a) * max(1.0, numeric.magnitude(c0)) ** j)
    return {key: c for key, c in out.items() if not numeric.is_zero(c, scale)}


def _lift(G: Bivariate, M: int) -> list:
    """Simple root ``w(s)`` with ``w(0) = 0`` of ``G(s, w) = 0`` modulo ``s**M``."""
    exact = series.is_exact(G.values())
    zero = GaussianRational(0) if exact else MP.mpc(0)
    jmax = max(j for _, j in G)
    A = [[zero] * M for _ in range(jmax + 1)]
    for (i, j), c in G.items():
        if i < M:
            A[j][i] = A[j][i] + (c if exact else numeric.to_mpc(c))
    dA = [[c * (j + 1) for c in A[j + 1]] for j in range(jmax)]
    if numeric.is_zero(dA[0][0] if dA else zero):
        raise PuiseuxError("lifting requires a simple root")
    w = [zero] * M
    prec = 1
    while prec < M:
        prec = min(2 * prec, M)
        val = _horner(A, w, prec, zero)
        der = _horner(dA, w, prec, zero)
        corr = series.mul(val, series.inverse(der, prec, zero), prec, zero)
        w = series.sub(w[:prec], corr, prec, zero) + [zero] * (M - prec)
    return w


def _horner(A, w, n, zero) -> list:
    acc = [zero] * n
    for row in reversed(A):
        acc = series.add(series.mul(acc, w, n, zero), row[:n], n, zero)
    return acc


def _expand(G: Bivariate, R: int, N: int, base: Fraction, depth: int) -> List[_Raw]:
    if depth > MAX_DEPTH:
        raise PuiseuxError("Newton–Puiseux recursion did not terminate")
    out: List[_Raw] = []
    poly = newton_polygon(G)
    if base >= N:
        # Anything further contributes beyond the truncation order.
        return [_Raw(R, {}, poly.v_order)]
    if poly.v_adic:
        out.append(_Raw(R, {}, poly.v_adic))
    for edge in poly.edges:
        p, q = edge.slope.numerator, edge.slope.denominator
        for Z, mu in _edge_roots(edge.polynomial):
            for c0 in _distinct_qth_roots(Z, q):
                G1 = _transform(G, p, q, c0)
                R1 = R * q
                base1 = base + Fraction(p, R1)
                if mu == 1 and base1 < N:
                    w = _lift(G1, N * R1)
                    terms = {p: c0}
                    for k, c in enumerate(w):
                        if not numeric.is_zero(c):
                            terms[p + k] = terms.get(p + k, 0 * c) + c
                    out.append(_Raw(R1, terms, 1))
                    continue
                for sub in _expand(G1, R1, N, base1, depth + 1):
                    f = sub.ramification // R1
                    terms = {p * f: c0}
                    for k, c in sub.terms.items():
                        terms[p * f + k] = terms.get(p * f + k, 0 * c) + c
                    out.append(_Raw(sub.ramification, terms, sub.multiplicity))
    return out


def _distinct_qth_roots(Z, q: int) -> list:
    """One q-th root of Z per conjugacy class under sigma -> omega*sigma.

    The q roots of c**q = Z are permuted by the ramification itself, so a
    single representative generates the whole cycle of conjugate branches.
    """
    return [_qth_root(Z, q)]


def _finish(raw: _Raw, N: int) -> Optional[PuiseuxBranch]:
    r = raw.ramification
    terms = {k: c for k, c in raw.terms.items() if not numeric.is_zero(c)}
    if not terms:
        return None
    g = r
    for k in terms:
        g = math.gcd(g, k)
    mult = raw.multiplicity
    if g > 1:
        r //= g
        terms = {k // g: c for k, c in terms.items()}
        mult *= g
    length = N * r
    exact = series.is_exact(terms.values())
    zero = GaussianRational(0) if exact else MP.mpc(0)
    coeffs = [zero] * length
    for k, c in terms.items():
        if k < length:
            coeffs[k] = c if exact else numeric.to_mpc(c)
    beta = min(terms)
    if beta >= length:
        return None
    return PuiseuxBranch(r, beta, coeffs[beta], tuple(coeffs), N, mult)


def puiseux_roots(g, order: int = 12) -> List[PuiseuxBranch]:
    """All roots ``v = psi(u**(1/r))`` of ``g(u, v) = 0`` through the origin, modulo ``u**order``.

    Each branch stands for its ``ramification`` conjugates; ``multiplicity``
    greater than one marks a root that is still repeated at the truncation
    order (a non-reduced equation, or one whose branches separate later).
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    G = _as_dict(g)
    poly = newton_polygon(G)
    if poly.v_adic:
        raise PuiseuxError("g vanishes on v = 0; that component is not a graph over u")
    raws = _expand(G, 1, order, Fraction(0), 0)
    branches = []
    for raw in raws:
        b = _finish(raw, order)
        if b is None:
            # The whole root lies beyond the truncation order.
            raise PuiseuxError(f"order {order} too small to separate a root from v = 0")
        branches.append(b)
    total = sum(b.ramification * b.multiplicity for b in branches)
    if total != poly.v_order:
        raise PuiseuxError(f"found {total} roots, expected {poly.v_order}")
    return sorted(branches, key=_branch_key)


def _branch_key(b: PuiseuxBranch):
    z = numeric.to_complex(b.b0)
    return (Fraction(b.beta, b.ramification), b.ramification, round(z.real, 12), round(z.imag, 12))


# -- verification -----------------------------------------------------------------------


def _conjugate_roots(branches: Sequence[PuiseuxBranch], L: int) -> List[list]:
    """Series in ``tau`` (u = tau**L) of every conjugate root, repeated by multiplicity."""
    roots = []
    for b in branches:
        step = L // b.ramification
        for k in range(b.ramification):
            c = b.conjugate(k)
            zero = series.zero_like(c[0])
            s = [zero] * (len(c) * step)
            for n, x in enumerate(c):
                s[n * step] = x
            roots.extend([s] * b.multiplicity)
    return roots


def _elementary(roots: Sequence[list], n: int, zero) -> List[list]:
    """Coefficients (descending v-powers, leading 1) of prod (v - root) mod tau**n."""
    one = [zero + 1] + [zero] * (n - 1)
    P = [one]
    for r in roots:
        neg = [-x for x in series.pad(r, n, zero)]
        nxt = [series.pad(c, n, zero) for c in P] + [[zero] * n]
        for k, c in enumerate(P):
            nxt[k + 1] = series.add(nxt[k + 1], series.mul(c, neg, n, zero), n, zero)
        P = nxt
    return P


def reconstruction_valuation(g, branches: Sequence[PuiseuxBranch], order: int) -> Fraction:
    """u-valuation of ``g mod prod(v - psi_i)`` over all conjugates, computed modulo ``u**order``.

    A value of ``order`` means the remainder vanishes to the working precision.
    """
    G = _as_dict(g)
    L = 1
    for b in branches:
        L = L * b.ramification // math.gcd(L, b.ramification)
    n = order * L
    roots = _conjugate_roots(branches, L)
    exact = all(series.is_exact(r) for r in roots) and series.is_exact(G.values())
    zero = GaussianRational(0) if exact else MP.mpc(0)
    conv = (lambda c: c) if exact else numeric.to_mpc
    roots = [[conv(c) for c in r] for r in roots]
    P = _elementary(roots, n, zero)  # descending
    deg = len(P) - 1
    jmax = max(j for _, j in G)
    rows = [[zero] * n for _ in range(jmax + 1)]  # ascending in v
    scale = 1.0
    for (i, j), c in G.items():
        if i * L < n:
            rows[j][i * L] = rows[j][i * L] + conv(c)
        scale = max(scale, numeric.magnitude(c))
    for c in P:
        scale = max(scale, series.max_magnitude(c))
    # Division by the monic P, highest v-power first.
    for top in range(jmax, deg - 1, -1):
        lead = rows[top]
        if series.valuation(lead, scale) is None:
            continue
        for k in range(1, deg + 1):
            rows[top - k] = series.sub(rows[top - k], series.mul(lead, P[k], n, zero), n, zero)
        rows[top] = [zero] * n
    best = n
    tol_scale = scale ** 2
    for j in range(min(deg, jmax + 1)):
        v = series.valuation(rows[j], tol_scale)
        if v is not None:
            best = min(best, v)
    return Fraction(best, L)


# -- symmetric functions of one branch ------------------------------------------------------


@dataclass(frozen=True)
class WeierstrassProfile:
    """``prod_k (v - psi(omega**k sigma)) = v**m + sum_j v**(m-j) sigma**(j*beta) s_j(sigma)``.

    ``sigma_series[j-1]`` is ``s_j`` known modulo ``sigma**precision[j-1]``;
    ``eta[j-1]`` its valuation (None when it vanishes to that precision).
    """

    m: int
    beta: int
    sigma_series: Tuple[Tuple, ...]
    eta: Tuple[Optional[int], ...]
    precision: Tuple[int, ...]
    sigma_m0: object
    expected_sigma_m0: object
    integral_exponents: bool
    exact: bool

    @property
    def key_pattern(self) -> bool:
        """``s_j(0) = 0`` for j < m and ``s_m(0) != 0``."""
        inner = all(e is None or e >= 1 for e in self.eta[:-1])
        return inner and self.eta[-1] == 0

    @property
    def sigma_m0_matches(self) -> bool:
        return numeric.close(self.sigma_m0, self.expected_sigma_m0, MP.mpf("1e-10"))


def weierstrass_profile(branch: PuiseuxBranch) -> WeierstrassProfile:
    m, beta = branch.ramification, branch.beta
    n = len(branch.coeffs)
    exact = branch.exact and 4 % m == 0
    zero = GaussianRational(0) if exact else MP.mpc(0)
    roots = []
    for k in range(1, m + 1):
        c = branch.conjugate(k)
        roots.append(c if exact else [numeric.to_mpc(x) for x in c])
    P = _elementary(roots, n, zero)
    scale = max(1.0, max(series.max_magnitude(c) for c in P))
    integral = all(
        numeric.is_zero(x, scale) for c in P for idx, x in enumerate(c) if idx % m
    )
    sig, eta, prec = [], [], []
    for j in range(1, m + 1):
        s = list(P[j][j * beta :])
        sig.append(tuple(s))
        prec.append(len(s))
        eta.append(series.valuation(s, scale))
    sm0 = sig[-1][0] if sig[-1] else zero
    omega_pow = root_of_unity(m, beta * m * (m + 1) // 2, None if exact else MP)
    b0 = branch.b0 if exact else numeric.to_mpc(branch.b0)
    expected = (-b0) ** m * omega_pow
    return WeierstrassProfile(m, beta, tuple(sig), tuple(eta), tuple(prec), sm0, expected, integral, exact)


# -- comparing branches of different levels -----------------------------------------------------


def valuation_gap(a: PuiseuxBranch, b: PuiseuxBranch) -> Optional[Fraction]:
    """Smallest u-valuation of ``psi_a - psi_b(omega**k .)`` over the conjugates of b.

    Requires equal ramification; returns None when some conjugate agrees with
    ``a`` to the common truncation order.
    """
    if a.ramification != b.ramification:
        raise ValueError("branches with different ramification cannot be compared termwise")
    r = a.ramification
    n = min(len(a.coeffs), len(b.coeffs))
    best: Optional[int] = -1
    for k in range(r):
        c = b.conjugate(k)
        diff = [_sub(a.coeffs[i], c[i]) for i in range(n)]
        scale = max(1.0, series.max_magnitude(a.coeffs[:n]), series.max_magnitude(c[:n]))
        v = _gap_valuation(diff, scale, a.exact and b.exact)
        if v is None:
            return None
        best = max(best, v)
    return Fraction(best, r)


def _sub(x, y):
    if isinstance(x, GaussianRational) and isinstance(y, GaussianRational):
        return x - y
    return numeric.to_mpc(x) - numeric.to_mpc(y)


def _gap_valuation(diff, scale, exact) -> Optional[int]:
    tol = None if exact else numeric.MATCH_TOL * scale
    for i, d in enumerate(diff):
        if exact:
            if not numeric.is_zero(d):
                return i
        elif abs(numeric.to_mpc(d)) > tol:
            return i
    return None
