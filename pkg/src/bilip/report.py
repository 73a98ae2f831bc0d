"""Run configuration and the JSON report document."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from . import __version__
from .fibers import AnalysisVerdict, BranchData, Classification, PlaneRestriction, SeparationReport, MAX_ORDER
from .gaussian import GaussianRational
from .probe import DEFAULT_RADII, DistanceProbeReport
from .puiseux import PuiseuxBranch

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "RunConfig",
    "ReportDocument",
    "classification_dict",
    "separation_dict",
    "verdict_dict",
    "probe_dict",
    "branch_dict",
    "complex_dict",
]


@dataclass(frozen=True)
class RunConfig:
    variables: Tuple[str, ...] = ("x", "y")
    t_samples: Tuple[str, ...] = ("0", "1", "2", "1+i", "-3")
    truncation_order: int = 12
    radii: Tuple[float, ...] = DEFAULT_RADII
    angles_per_radius: int = 64
    seed: int = 0
    output_format: str = "json"
    csv_dump_path: Optional[str] = None

    def __post_init__(self):
        if not 4 <= self.truncation_order <= MAX_ORDER:
            raise ValueError(f"--order must lie in [4, {MAX_ORDER}]")
        if len(self.radii) < 2 or any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly increasing with at least two entries")
        if self.radii[0] <= 0:
            raise ValueError("radii must be positive")
        if self.angles_per_radius < 1:
            raise ValueError("--angles must be positive")
        if self.output_format not in ("json", "text"):
            raise ValueError("--format must be json or text")
        if len(self.t_samples) < 2:
            raise ValueError("need at least two t samples")

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["variables"] = list(self.variables)
        d["t_samples"] = list(self.t_samples)
        d["radii"] = list(self.radii)
        return d


@dataclass
class ReportDocument:
    """Everything a command produced, as JSON-ready values."""

    command: str
    input_expression: str
    variables: List[str]
    nvars: int
    parsed_degree: Optional[int] = None
    classification: Optional[Dict[str, Any]] = None
    points_at_infinity: List[Dict[str, Any]] = field(default_factory=list)
    verdict: Optional[Dict[str, Any]] = None
    probe: Optional[Dict[str, Any]] = None
    puiseux: Optional[Dict[str, Any]] = None
    exceptional_log: List[str] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        data = json.loads(text)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {data.get('schema_version')!r}")
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown report fields: {sorted(unknown)}")
        return cls(**data)

    def without_timing(self) -> Dict[str, Any]:
        d = self.to_dict()
        d.pop("timing")
        return d


# -- converters ----------------------------------------------------------------------------------


def _q(x) -> Optional[str]:
    """Exact value as a string, or None."""
    if x is None:
        return None
    if isinstance(x, (Fraction, GaussianRational, int)):
        return str(x)
    raise TypeError(f"not an exact value: {x!r}")


def complex_dict(z) -> Dict[str, float]:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def classification_dict(c: Classification) -> Dict[str, Any]:
    return {
        "single_variable": c.single_variable,
        "direction": [str(a) for a in c.direction] if c.direction else None,
        "univariate": [str(a) for a in c.univariate] if c.univariate else None,
        "annihilators": [[str(a) for a in xi] for xi in c.annihilators],
        "witness": c.witness or None,
    }


def _branch_data_dict(b: BranchData) -> Dict[str, Any]:
    return {
        "ramification": b.ramification,
        "beta": b.beta,
        "b0": b.b0,
        "kappa": _q(b.kappa),
        "exponent": _q(b.exponent),
        "kappa_by_sample": [{"t": t, "kappa": _q(k)} for t, k in b.kappa_by_sample],
    }


def separation_dict(r: SeparationReport) -> Dict[str, Any]:
    return {
        "point": str(r.point),
        "coords": [str(c) for c in r.point.coords],
        "multiplicity": r.point.mult_a,
        "verdict": r.verdict,
        "m": r.m,
        "d": r.d,
        "tangent_to_infinity": r.tangent_to_infinity,
        "cone_criterion": r.cone_criterion,
        "beta": r.beta,
        "kappa": _q(r.kappa),
        "kappa_measured": _q(r.kappa_measured),
        "kappa_consistent": r.kappa_consistent,
        "exponent_e": _q(r.exponent_e),
        "exponent_e_formula": _q(r.exponent_e_formula),
        "ratios_equal": r.ratios_equal,
        "ordering_holds": r.ordering_holds,
        "order_used": r.order_used,
        "reconstruction_min": _q(r.reconstruction_min),
        "t_reference": r.t_reference,
        "t_used": list(r.t_used),
        "branches": [_branch_data_dict(b) for b in r.branch_data],
    }


def restriction_dict(p: PlaneRestriction, names) -> Dict[str, Any]:
    return {
        "plane_polynomial": p.poly.to_expr(list(names)),
        "seed": p.seed,
        "attempts": p.attempts,
        "matrix": [[str(a) for a in row] for row in p.matrix],
        "log": list(p.log),
    }


def verdict_dict(v: AnalysisVerdict, names=("x", "y")) -> Dict[str, Any]:
    return {
        "conclusion": v.conclusion,
        "critical_values": [complex_dict(z) for z in v.critical_values],
        "restriction": restriction_dict(v.restriction, names) if v.restriction else None,
        "notes": list(v.notes),
    }


def probe_dict(p: DistanceProbeReport) -> Dict[str, Any]:
    return {
        "s": complex_dict(p.s),
        "t": complex_dict(p.t),
        "radii": list(p.radii),
        "min_distance_per_radius": list(p.min_distance_per_radius),
        "best_angle_per_radius": list(p.best_angle_per_radius),
        "fitted_exponent": p.fitted_exponent,
        "fitted_stderr": p.fitted_stderr if p.fitted_stderr == p.fitted_stderr else None,
        "ratio_to_value_gap": p.ratio_to_value_gap,
        "variation": p.variation,
        "angles_per_radius": p.angles_per_radius,
        "seed": p.seed,
        "skipped": list(p.skipped),
    }


def branch_dict(b: PuiseuxBranch) -> Dict[str, Any]:
    return {
        "ramification": b.ramification,
        "beta": b.beta,
        "leading_exponent": str(b.leading_exponent),
        "b0": b.coefficient_strings()[0][1],
        "multiplicity": b.multiplicity,
        "exact": b.exact,
        "truncation_order": b.truncation_order,
        "coefficients": [{"k": k, "c": c} for k, c in b.coefficient_strings()],
    }
