"""Dense truncated power series with exact or mpc coefficients.

A series is a list ``a`` with ``a[k]`` the coefficient of ``s**k``; every
operation takes the truncation length explicitly.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from . import numeric
from .gaussian import GaussianRational


def zero_like(c):
    if isinstance(c, GaussianRational):
        return GaussianRational(0)
    return numeric.MP.mpc(0)


def is_exact(values) -> bool:
    return all(isinstance(c, (GaussianRational, int)) for c in values)


def to_numeric(a: Sequence) -> list:
    return [numeric.to_mpc(c) for c in a]


def pad(a: Sequence, n: int, zero) -> list:
    a = list(a[:n])
    return a + [zero] * (n - len(a))


def mul(a: Sequence, b: Sequence, n: int, zero) -> list:
    out = [zero] * n
    for i, x in enumerate(a[:n]):
        if numeric.is_zero(x):
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            out[i + j] = out[i + j] + x * y
    return out


def add(a: Sequence, b: Sequence, n: int, zero) -> list:
    return [(a[k] if k < len(a) else zero) + (b[k] if k < len(b) else zero) for k in range(n)]


def sub(a: Sequence, b: Sequence, n: int, zero) -> list:
    return [(a[k] if k < len(a) else zero) - (b[k] if k < len(b) else zero) for k in range(n)]


def inverse(a: Sequence, n: int, zero) -> list:
    """``1/a`` mod ``s**n``; requires a nonzero constant term."""
    if numeric.is_zero(a[0]):
        raise ZeroDivisionError("series with zero constant term is not invertible")
    inv0 = 1 / a[0]
    out = [zero] * n
    out[0] = inv0
    for k in range(1, n):
        acc = zero
        for j in range(1, min(k, len(a) - 1) + 1):
            acc = acc + a[j] * out[k - j]
        out[k] = -acc * inv0
    return out


def valuation(a: Sequence, scale: float = 1.0) -> Optional[int]:
    """Index of the first nonzero coefficient (numeric zeros relative to ``scale``)."""
    for k, c in enumerate(a):
        if not numeric.is_zero(c, scale):
            return k
    return None


def max_magnitude(a: Sequence) -> float:
    return max((numeric.magnitude(c) for c in a), default=0.0)


def shift(a: Sequence, k: int, zero) -> List:
    return [zero] * k + list(a)
