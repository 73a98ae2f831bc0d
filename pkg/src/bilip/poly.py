"""Sparse multivariate polynomials over Q(i)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .gaussian import GaussianRational, as_gr

__all__ = [
    "NEG_INF",
    "MultiPoly",
    "HomogeneousDecomposition",
    "add",
    "mul",
    "homogeneous_parts",
    "homogenize",
    "dehomogenize",
    "substitute",
    "partial_derivative",
]

NEG_INF = float("-inf")

Exponent = Tuple[int, ...]


class MultiPoly:
    """Immutable polynomial in ``nvars`` variables with Gaussian-rational coefficients.

    ``terms`` maps dense exponent vectors to nonzero coefficients.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean: Dict[Exponent, GaussianRational] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
            c = as_gr(c)
            if c:
                clean[exps] = clean.get(exps, GaussianRational(0)) + c
                if not clean[exps]:
                    del clean[exps]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exponent, GaussianRational]) -> "MultiPoly":
        p = cls.__new__(cls)
        object.__setattr__(p, "nvars", nvars)
        object.__setattr__(p, "_terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, j: int) -> "MultiPoly":
        if not 0 <= j < nvars:
            raise IndexError(f"variable index {j} out of range")
        e = [0] * nvars
        e[j] = 1
        return cls._raw(nvars, {tuple(e): GaussianRational(1)})

    @classmethod
    def linear_form(cls, coeffs: Sequence, constant=0) -> "MultiPoly":
        n = len(coeffs)
        terms = {}
        for j, c in enumerate(coeffs):
            e = [0] * n
            e[j] = 1
            terms[tuple(e)] = c
        terms[(0,) * n] = constant
        return cls(n, terms)

    # -- inspection -------------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, GaussianRational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, exps: Exponent) -> GaussianRational:
        return self._terms.get(tuple(exps), GaussianRational(0))

    @property
    def degree(self):
        """Total degree; ``NEG_INF`` for the zero polynomial."""
        if not self._terms:
            return NEG_INF
        return max(sum(e) for e in self._terms)

    @property
    def order(self):
        """Lowest total degree of a term (multiplicity at the origin)."""
        if not self._terms:
            return NEG_INF
        return min(sum(e) for e in self._terms)

    def degree_in(self, j: int):
        if not self._terms:
            return NEG_INF
        return max(e[j] for e in self._terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def constant_term(self) -> GaussianRational:
        return self.coefficient((0,) * self.nvars)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def homogeneous_part(self, k: int) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == k})

    def lowest_form(self) -> "MultiPoly":
        if not self._terms:
            return self
        return self.homogeneous_part(self.order)

    def leading_form(self) -> "MultiPoly":
        if not self._terms:
            return self
        return self.homogeneous_part(self.degree)

    # -- arithmetic ---------------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable-count mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = as_gr(other)
            if not c:
                return MultiPoly.zero(self.nvars)
            return MultiPoly._raw(self.nvars, {e: v * c for e, v in self._terms.items()})
        self._check(other)
        out: Dict[Exponent, GaussianRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        try:
            return self == MultiPoly.constant(self.nvars, other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.nvars, frozenset(self._terms.items()))))
        return self._hash

    # -- evaluation -----------------------------------------------------------------

    def evaluate(self, point: Sequence) -> GaussianRational:
        """Exact evaluation at a point of Q(i)^n."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        point = [as_gr(p) for p in point]
        total = GaussianRational(0)
        for e, c in self._terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    def evaluate_complex(self, point: Sequence[complex]) -> complex:
        total = 0j
        for e, c in self._terms.items():
            term = complex(c)
            for x, k in zip(point, e):
                if k:
                    term *= x**k
            total += term
        return total

    def univariate_coeffs(self, j: int) -> list:
        """Coefficients (ascending) in variable ``j`` when the other variables are absent."""
        deg = self.degree_in(j)
        if deg == NEG_INF:
            return []
        coeffs = [GaussianRational(0)] * (deg + 1)
        for e, c in self._terms.items():
            if any(k for i, k in enumerate(e) if i != j):
                raise ValueError("polynomial involves other variables")
            coeffs[e[j]] = c
        return coeffs

    def sorted_terms(self):
        """Terms by decreasing total degree, then decreasing lexicographic exponent."""
        return sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    # -- printing ---------------------------------------------------------------------

    def to_expr(self, names: Sequence[str]) -> str:
        """Render in the input grammar so that ``parse(p.to_expr(v), v) == p``."""
        if len(names) != self.nvars:
            raise ValueError("need one name per variable")
        if not self._terms:
            return "0"
        out = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(names, e) if k
            )
            if c.is_real():
                negative = c.re < 0
                mag = abs(c.re)
                coef = "" if (mag == 1 and mono) else str(mag)
            else:
                negative = False
                if not c.re:
                    coef = f"({c.im}*i)"
                else:
                    coef = f"({c})"
            body = "*".join(p for p in (coef, mono) if p)
            if idx == 0:
                out.append(f"-{body}" if negative else body)
            else:
                out.append(f" - {body}" if negative else f" + {body}")
        return "".join(out)

    def __repr__(self):
        names = [f"x{j + 1}" for j in range(self.nvars)]
        return f"MultiPoly({self.nvars}, {self.to_expr(names)!r})"


@dataclass(frozen=True)
class HomogeneousDecomposition:
    """``parts[k]`` is the degree-k homogeneous component."""

    parts: Tuple[MultiPoly, ...]

    @property
    def degree(self):
        for k in range(len(self.parts) - 1, -1, -1):
            if self.parts[k]:
                return k
        return NEG_INF

    def total(self, nvars: int) -> MultiPoly:
        acc = MultiPoly.zero(nvars)
        for p in self.parts:
            acc = acc + p
        return acc


def add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    return p + q


def mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    return p * q


def homogeneous_parts(p: MultiPoly) -> HomogeneousDecomposition:
    if p.is_zero():
        return HomogeneousDecomposition(())
    d = p.degree
    buckets: list = [dict() for _ in range(d + 1)]
    for e, c in p.items():
        buckets[sum(e)][e] = c
    return HomogeneousDecomposition(tuple(MultiPoly._raw(p.nvars, b) for b in buckets))


def homogenize(p: MultiPoly) -> MultiPoly:
    """Homogenize with a new last variable z, so that ``F(x, 1) == p``."""
    if p.is_zero():
        raise ValueError("cannot homogenize the zero polynomial")
    d = p.degree
    return MultiPoly._raw(p.nvars + 1, {e + (d - sum(e),): c for e, c in p.items()})


def dehomogenize(F: MultiPoly) -> MultiPoly:
    """Set the last variable to 1."""
    if F.nvars < 1:
        raise ValueError("nothing to dehomogenize")
    return MultiPoly(F.nvars - 1, _merge((e[:-1], c) for e, c in F.items()))


def _merge(pairs: Iterable) -> Dict[Exponent, GaussianRational]:
    out: Dict[Exponent, GaussianRational] = {}
    for e, c in pairs:
        out[e] = out[e] + c if e in out else c
    return out


def substitute(p: MultiPoly, images: Sequence[MultiPoly]) -> MultiPoly:
    """Replace variable j of ``p`` by ``images[j]`` and expand."""
    if len(images) != p.nvars:
        raise ValueError(f"arity mismatch: {len(images)} images for {p.nvars} variables")
    if not images:
        raise ValueError("need at least one image to fix the target ring")
    n = images[0].nvars
    if any(img.nvars != n for img in images):
        raise ValueError("images must share a common number of variables")
    powers: Dict[Tuple[int, int], MultiPoly] = {}

    def power(j, k):
        key = (j, k)
        if key not in powers:
            powers[key] = images[j] ** k if k <= 1 else power(j, k - 1) * images[j]
        return powers[key]

    acc = MultiPoly.zero(n)
    for e, c in p.items():
        term = MultiPoly.constant(n, c)
        for j, k in enumerate(e):
            if k:
                term = term * power(j, k)
        acc = acc + term
    return acc


def partial_derivative(p: MultiPoly, direction: Sequence) -> MultiPoly:
    """Directional derivative ``sum_j direction[j] * dp/dx_j``."""
    if len(direction) != p.nvars:
        raise ValueError("direction has wrong length")
    direction = [as_gr(c) for c in direction]
    if all(not c for c in direction):
        raise ValueError("zero direction")
    out: Dict[Exponent, GaussianRational] = {}
    for e, c in p.items():
        for j, k in enumerate(e):
            if k and direction[j]:
                e2 = e[:j] + (k - 1,) + e[j + 1 :]
                v = c * k * direction[j]
                out[e2] = out[e2] + v if e2 in out else v
    return MultiPoly(p.nvars, out)

