"""Numerical fiber sampling: how close do two levels of f get far from the origin?

Everything here runs in double precision with numpy and only produces upper
bounds on distances (points of the two fibers over the same x).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .poly import MultiPoly

__all__ = [
    "RootFindingError",
    "DegenerateSliceError",
    "roots_univariate",
    "fiber_slice",
    "DistanceProbeReport",
    "distance_probe",
    "write_csv",
    "DEFAULT_RADII",
]

DEFAULT_RADII = (10.0, 100.0, 1000.0, 10000.0)
RESIDUAL_TOL = 1e-9
CLUSTER_TOL = 1e-6
REFINE_STEPS = 40


class RootFindingError(ArithmeticError):
    pass


class DegenerateSliceError(ArithmeticError):
    pass


def _check_finite(values, what: str) -> None:
    if not np.all(np.isfinite(values)):
        raise RootFindingError(f"non-finite {what}")


def roots_univariate(coeffs: Sequence[complex], max_iter: int = 500) -> List[complex]:
    """All roots of ``coeffs[0]*z**n + ... + coeffs[n]`` by Aberth iteration.

    Starting points sit on a circle scaled to the root bound, with a fixed
    angular offset so the result is deterministic.  Roots agreeing to the
    cluster tolerance are replaced by their mean.
    """
    c = np.asarray(coeffs, dtype=complex)
    _check_finite(c, "coefficient")
    if len(c) < 2:
        raise ValueError("degree must be at least 1")
    if c[0] == 0:
        raise ValueError("leading coefficient must be nonzero")
    n = len(c) - 1
    a = c / c[0]
    if n == 1:
        return [complex(-a[1])]
    dc = a[:-1] * np.arange(n, 0, -1)
    bound = 2 * max(abs(a[k]) ** (1.0 / k) for k in range(1, n + 1))
    bound = bound if bound > 0 else 1.0
    z = bound * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    prev = math.inf
    for it in range(max_iter):
        p = np.polyval(a, z)
        dp = np.polyval(dc, z)
        done = np.abs(p) == 0
        ratio = np.where(done, 0, p / np.where(dp == 0, 1e-300, dp))
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1)
        inv = 1 / diff
        np.fill_diagonal(inv, 0)
        w = ratio / (1 - ratio * inv.sum(axis=1))
        z = z - w
        _check_finite(z, "iterate")
        step = float(np.max(np.abs(w) / np.maximum(1, np.abs(z))))
        if step <= 1e-15:
            break
        # Rounding noise keeps clustered roots moving; stop once steps stall.
        if it > 10 and step <= 1e-9 and step > 0.5 * prev:
            break
        prev = step
    scale = np.max(np.abs(c))
    resid = np.abs(np.polyval(c, z))
    allowed = RESIDUAL_TOL * scale * np.maximum(1, np.abs(z)) ** n
    if np.any(resid > allowed):
        raise RootFindingError("root iteration did not converge")
    return _merge_clusters(list(z))


def _merge_clusters(roots: List[complex]) -> List[complex]:
    out = list(roots)
    used = [False] * len(out)
    for i in range(len(out)):
        if used[i]:
            continue
        group = [j for j in range(i, len(out)) if not used[j]
                 and abs(out[j] - out[i]) <= CLUSTER_TOL * max(1.0, abs(out[i]))]
        if len(group) > 1:
            mean = sum(out[j] for j in group) / len(group)
            for j in group:
                out[j] = mean
                used[j] = True
    return [complex(r) for r in out]


class _Slicer:
    """Fast evaluation of the y-coefficients of f(x, y) - value at complex x."""

    def __init__(self, f: MultiPoly):
        if f.nvars != 2:
            raise ValueError("fiber slices need a polynomial in two variables")
        dy = f.degree_in(1)
        if dy < 1:
            raise DegenerateSliceError("f does not depend on y")
        self.dy = dy
        self.rows: List[List[Tuple[int, complex]]] = [[] for _ in range(dy + 1)]
        for (i, j), c in f.items():
            self.rows[j].append((i, complex(c)))

    def coeffs(self, x: complex, value: complex) -> np.ndarray:
        out = np.zeros(self.dy + 1, dtype=complex)
        for j, row in enumerate(self.rows):
            out[self.dy - j] = sum(c * x**i for i, c in row)
        out[self.dy] -= value
        return out

    def solve(self, x: complex, value: complex) -> List[complex]:
        for attempt in range(2):
            c = self.coeffs(x, value)
            if abs(c[0]) > 1e-14 * max(np.max(np.abs(c)), 1e-300):
                return roots_univariate(c)
            x = x * (1 + 1e-6)
        raise DegenerateSliceError(f"leading y-coefficient vanishes near x = {x!r}")


def fiber_slice(f: MultiPoly, value: complex, x: complex) -> List[complex]:
    """All y with f(x, y) = value."""
    return _Slicer(f).solve(complex(x), complex(value))


@dataclass(frozen=True)
class DistanceProbeReport:
    s: complex
    t: complex
    radii: Tuple[float, ...]  # radii that produced at least one slice
    min_distance_per_radius: Tuple[float, ...]
    best_angle_per_radius: Tuple[float, ...]
    fitted_exponent: Optional[float]
    fitted_stderr: Optional[float]
    ratio_to_value_gap: Optional[float]
    angles_per_radius: int
    seed: int
    skipped: Tuple[str, ...] = ()
    samples: Tuple[Tuple[float, float, float], ...] = ()  # (R, theta, distance)

    @property
    def variation(self) -> Optional[float]:
        """Relative spread (max - min) / max of the per-radius minima."""
        if not self.min_distance_per_radius:
            return None
        hi, lo = max(self.min_distance_per_radius), min(self.min_distance_per_radius)
        return (hi - lo) / hi if hi > 0 else 0.0


def _pair_distance(ys: Sequence[complex], yt: Sequence[complex]) -> float:
    return min(abs(a - b) for a in ys for b in yt)


def _fit(radii: Sequence[float], dists: Sequence[float]):
    x = np.log(np.asarray(radii))
    y = np.log(np.asarray(dists))
    n = len(x)
    A = np.vstack([x, np.ones(n)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + icpt)
    sxx = np.sum((x - x.mean()) ** 2)
    stderr = math.sqrt(np.sum(resid**2) / (n - 2) / sxx) if n > 2 and sxx > 0 else float("nan")
    return float(slope), float(stderr)


def distance_probe(
    f: MultiPoly,
    s: complex,
    t: complex,
    radii: Sequence[float] = DEFAULT_RADII,
    angles_per_radius: int = 64,
    seed: int = 0,
) -> DistanceProbeReport:
    s, t = complex(s), complex(t)
    if s == t:
        raise ValueError("s and t must differ")
    radii = [float(r) for r in radii]
    if len(radii) < 2 or any(b <= a for a, b in zip(radii, radii[1:])) or radii[0] <= 0:
        raise ValueError("radii must be positive, strictly increasing, at least two")
    if angles_per_radius < 1:
        raise ValueError("need at least one angle per radius")
    slicer = _Slicer(f)
    rng = np.random.default_rng(seed)
    offset = float(rng.uniform(0, 2 * np.pi / angles_per_radius))
    used, dists, best_angles, skipped, samples = [], [], [], [], []

    def measure(R: float, theta: float) -> Optional[float]:
        x = R * complex(math.cos(theta), math.sin(theta))
        try:
            return _pair_distance(slicer.solve(x, s), slicer.solve(x, t))
        except (DegenerateSliceError, RootFindingError):
            return None

    for R in radii:
        best, best_theta = None, None
        for k in range(angles_per_radius):
            theta = offset + 2 * np.pi * k / angles_per_radius
            dist = measure(R, theta)
            if dist is None:
                skipped.append(f"R={R!r} theta={theta!r}: slice failed")
                continue
            samples.append((R, float(theta), dist))
            if best is None or dist < best:
                best, best_theta = dist, theta
        if best is None:
            skipped.append(f"R={R!r}: every slice failed; radius skipped")
            continue
        step = 2 * np.pi / angles_per_radius
        for _ in range(REFINE_STEPS):
            for cand in (best_theta - step, best_theta + step):
                dist = measure(R, cand)
                if dist is not None and dist < best:
                    best, best_theta = dist, cand
            step *= 0.5
        used.append(R)
        dists.append(best)
        best_angles.append(float(best_theta) % (2 * np.pi))
    fitted = stderr = None
    positive = [(R, d) for R, d in zip(used, dists) if d > 0]
    if len(positive) >= 4:
        fitted, stderr = _fit([R for R, _ in positive], [d for _, d in positive])
    ratio = min(d / abs(s - t) for d in dists) if dists else None
    return DistanceProbeReport(
        s, t, tuple(used), tuple(dists), tuple(best_angles), fitted, stderr, ratio,
        angles_per_radius, seed, tuple(skipped), tuple(samples),
    )


def write_csv(report: DistanceProbeReport, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["radius", "theta", "distance"])
        for R, theta, dist in report.samples:
            w.writerow([repr(R), repr(theta), repr(dist)])
