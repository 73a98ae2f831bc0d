import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bilip.parser import parse
from bilip.probe import DegenerateSliceError, distance_probe, fiber_slice, roots_univariate, write_csv

XY = ["x", "y"]


def test_quadratic_roots():
    assert sorted(roots_univariate([1, 0, 1]), key=lambda z: z.imag) == pytest.approx([-1j, 1j])


def test_double_root_is_clustered():
    r = roots_univariate([1, -2, 1])
    assert r[0] == r[1] and abs(r[0] - 1) < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=5, max_size=5))
def test_recovers_constructed_roots(roots):
    # keep the roots well separated so the problem is well conditioned
    for i, a in enumerate(roots):
        for b in roots[:i]:
            if abs(a - b) < 0.2:
                return
    got = roots_univariate(np.poly(roots))
    for z in roots:
        assert min(abs(z - w) for w in got) < 1e-8


def test_bad_input():
    with pytest.raises(ValueError):
        roots_univariate([0, 1, 1])
    with pytest.raises(ValueError):
        roots_univariate([3])


def test_slices():
    assert fiber_slice(parse("x*y", XY), 1, 100) == pytest.approx([0.01])
    ys = sorted(fiber_slice(parse("x+y^2", XY), 1, -10000), key=lambda z: z.real)
    assert ys == pytest.approx([-(10001**0.5), 10001**0.5])


def test_degenerate_slice_after_retry():
    with pytest.raises(DegenerateSliceError):
        fiber_slice(parse("x*y", XY), 1, 0)


def test_xy_distance_is_gap_over_radius():
    rep = distance_probe(parse("x*y", XY), 1, 2)
    for R, dist in zip(rep.radii, rep.min_distance_per_radius):
        assert dist <= 1.1 / R
    assert rep.fitted_exponent == pytest.approx(-1, abs=0.1)


def test_parabola_exponent():
    rep = distance_probe(parse("x+y^2", XY), 1, 2)
    assert rep.fitted_exponent == pytest.approx(-0.5, abs=0.05)


def test_cubic_branch_exponent_matches_measured_decay():
    rep = distance_probe(parse("x+y^3", XY), 1, 2)
    assert rep.fitted_exponent == pytest.approx(-2 / 3, abs=0.1)


def test_parallel_lines_do_not_approach():
    rep = distance_probe(parse("(x+2*y)^2", XY), 1, 4)
    assert rep.fitted_exponent == pytest.approx(0, abs=0.05)
    # fibers are x+2y = +-1 and +-2: same-x gap is 1/2
    assert min(rep.min_distance_per_radius) == pytest.approx(0.5, rel=1e-6)


def test_fit_needs_four_radii():
    rep = distance_probe(parse("x*y", XY), 1, 2, radii=[10, 100, 1000])
    assert rep.fitted_exponent is None and len(rep.radii) == 3


def test_deterministic(tmp_path):
    a = distance_probe(parse("x+y^2", XY), 1, 2, angles_per_radius=16, seed=4)
    b = distance_probe(parse("x+y^2", XY), 1, 2, angles_per_radius=16, seed=4)
    assert a == b
    path = tmp_path / "d.csv"
    write_csv(a, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "radius,theta,distance" and len(lines) == 1 + 4 * 16


def test_rejects_equal_values_and_bad_radii():
    f = parse("x*y", XY)
    with pytest.raises(ValueError):
        distance_probe(f, 1, 1)
    with pytest.raises(ValueError):
        distance_probe(f, 1, 2, radii=[100, 10])
