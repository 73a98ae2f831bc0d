"""High-precision complex fallback used when a computation leaves Q(i)."""

from __future__ import annotations

import mpmath

from .gaussian import GaussianRational

MP = mpmath.MPContext()
MP.dps = 50

# Relative threshold under which an mpc value counts as a cancellation zero.
ZERO_TOL = MP.mpf("1e-30")
# Agreement threshold for comparing numerically computed coefficients.
MATCH_TOL = MP.mpf("1e-20")


def is_numeric(c) -> bool:
    return isinstance(c, MP.mpc) or isinstance(c, MP.mpf)


def to_mpc(c):
    if isinstance(c, GaussianRational):
        return c.to_mpc(MP)
    return MP.mpc(c)


def is_zero(c, scale=1) -> bool:
    if isinstance(c, GaussianRational):
        return c.is_zero()
    if isinstance(c, int):
        return c == 0
    return abs(c) <= ZERO_TOL * max(1, scale)


def magnitude(c) -> float:
    if isinstance(c, GaussianRational):
        return abs(complex(c))
    return float(abs(c))


def to_complex(c) -> complex:
    if isinstance(c, GaussianRational):
        return complex(c)
    return complex(c)


def close(a, b, tol=None) -> bool:
    """Exact equality for exact operands, relative closeness otherwise."""
    if isinstance(a, GaussianRational) and isinstance(b, GaussianRational):
        return a == b
    tol = MATCH_TOL if tol is None else tol
    a, b = to_mpc(a), to_mpc(b)
    return abs(a - b) <= tol * max(1, abs(a), abs(b))
