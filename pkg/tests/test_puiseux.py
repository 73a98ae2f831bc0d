from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from bilip.gaussian import GR, I
from bilip.parser import parse
from bilip.poly import MultiPoly
from bilip.puiseux import (
    PuiseuxBranch,
    PuiseuxError,
    newton_polygon,
    puiseux_roots,
    reconstruction_valuation,
    valuation_gap,
    weierstrass_profile,
)

UV = ["u", "v"]
u, v = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)


def g(expr):
    return parse(expr, UV)


def test_cusp_polygon():
    poly = newton_polygon(g("v^2-u^3"))
    (edge,) = poly.edges
    assert edge.slope == Fraction(3, 2)
    assert {edge.start, edge.end} == {(0, 2), (3, 0)}


def test_polygon_of_parabola_level():
    poly = newton_polygon(g("v+u^2-v^2"))
    assert poly.support == {(0, 1), (2, 0), (0, 2)}
    (edge,) = poly.edges
    assert (edge.start, edge.end, edge.slope) == ((0, 1), (2, 0), 2)


def test_polygon_of_xy_level_solved_for_v():
    (edge,) = newton_polygon(g("u-v^2")).edges
    assert edge.slope == Fraction(1, 2)


def test_polygon_slopes_increase_and_support_lies_above():
    poly = newton_polygon(g("v^5+u*v^3+u^3*v+u^7"))
    slopes = [e.slope for e in poly.edges]
    assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)
    assert all(poly.lies_above(p) for p in poly.support)


def test_unit_has_no_polygon():
    with pytest.raises(ValueError):
        newton_polygon(g("1+u+v"))


def test_cusp_branch():
    (b,) = puiseux_roots(g("v^2-u^3"), 12)
    assert (b.ramification, b.beta, b.b0) == (2, 3, 1)
    assert all(c == 0 for k, c in enumerate(b.coeffs) if k != 3)


def test_parabola_branch_matches_closed_form():
    # v = (1 - sqrt(1 + 4u^2)) / 2: signed Catalan numbers in u^2
    (b,) = puiseux_roots(g("v+u^2-v^2"), 12)
    assert (b.ramification, b.beta, b.b0) == (1, 2, -1)
    for n in range(1, 6):
        catalan = comb(2 * n - 2, n - 1) // n
        assert b.coeffs[2 * n] == (-1) ** n * catalan
        assert b.coeffs[2 * n - 1] == 0


def test_branches_agree_with_numeric_roots():
    # oracle: mpmath roots of g(u0, v) for a small u0
    G = g("v^3-u^2+v*u+u^3*v^2")
    branches = puiseux_roots(G, 20)
    u0 = mpmath.mpf("0.001")
    deg = G.degree_in(1)
    poly = [sum(complex(c) * complex(u0) ** i for (i, j), c in G.items() if j == k) for k in range(deg, -1, -1)]
    roots = [complex(r) for r in mpmath.polyroots(poly, maxsteps=200, extraprec=60)]
    values = []
    for b in branches:
        r = b.ramification
        for k in range(r):
            s = complex(u0) ** (1 / r) * complex(mpmath.expjpi(2 * k / r))
            values.append(sum(complex(c) * s**n for n, c in enumerate(b.coeffs)))
    small = [z for z in roots if abs(z) < 0.5]
    assert len(small) == len(values) == 3
    for z in small:
        assert min(abs(z - w) for w in values) < 1e-12


def test_numeric_leading_coefficient():
    (b,) = puiseux_roots(g("v^2-2*u^3+v*u^5"), 12)
    assert not b.exact
    assert abs(complex(b.b0) ** 2 - 2) < 1e-12
    assert reconstruction_valuation(g("v^2-2*u^3+v*u^5"), [b], 12) >= 12


def test_repeated_root_is_reported():
    (b,) = puiseux_roots(g("(v-u^2)^2"), 8)
    assert b.multiplicity == 2


def test_non_v_regular_input_fails():
    with pytest.raises(ValueError):
        puiseux_roots(g("u*v+u^2"), 8)


def test_root_on_the_line_v_zero_fails():
    with pytest.raises(PuiseuxError):
        puiseux_roots(g("v*(v-u)"), 8)


poly_coef = st.builds(GR, st.integers(-3, 3), st.integers(-2, 2))


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 3), poly_coef.filter(bool), poly_coef), min_size=1, max_size=3),
    poly_coef,
)
def test_recovers_polynomial_roots_times_unit(roots, w):
    # g = (1 + u + w v) * prod (v - c u^a - e u^(a+1)) has exactly these roots
    factors = []
    G = MultiPoly.constant(2, 1) + u + v * w
    for a, c, e in roots:
        phi = u**a * c + u ** (a + 1) * e
        factors.append(phi)
        G = G * (v - phi)
    branches = puiseux_roots(G, 10)
    got = sorted(((b.beta, str(b.coeffs[b.beta]), str(b.coeffs[b.beta + 1]), b.multiplicity)
                  for b in branches))
    want = {}
    for a, c, e in roots:
        key = (a, str(c), str(e))
        want[key] = want.get(key, 0) + 1
    assert sorted(k + (n,) for k, n in want.items()) == got
    assert reconstruction_valuation(G, branches, 10) >= 10 or any(b.multiplicity > 1 for b in branches)


@pytest.mark.parametrize("expr, r, beta", [("v^2-u^3", 2, 3), ("v^3-u^5", 3, 5), ("v^4-u", 4, 1), ("v-u^3", 1, 3)])
def test_edge_slope_is_first_pair_ratio(expr, r, beta):
    (b,) = puiseux_roots(g(expr), 8)
    (edge,) = newton_polygon(g(expr)).edges
    assert (b.ramification, b.beta) == (r, beta)
    assert edge.slope == b.leading_exponent


def _branch(r, coeffs, N=6):
    beta = next(k for k, c in enumerate(coeffs) if c)
    coeffs = list(coeffs) + [GR(0)] * (N * r - len(coeffs))
    return PuiseuxBranch(r, beta, coeffs[beta], tuple(coeffs), N)


def test_profile_linear():
    w = weierstrass_profile(_branch(1, [GR(0), GR(1)]))
    assert w.sigma_m0 == -1 == w.expected_sigma_m0


def test_profile_square_root_with_correction():
    # psi(s) = s + s^2 with u = s^2:  P = v^2 - 2u v - u + u^2
    w = weierstrass_profile(_branch(2, [GR(0), GR(1), GR(1)]))
    assert w.sigma_series[0][:3] == (0, -2, 0)
    assert w.eta == (1, 0)
    assert w.sigma_m0 == -1 == w.expected_sigma_m0
    assert w.integral_exponents and w.key_pattern


def test_profile_cusp():
    w = weierstrass_profile(_branch(2, [GR(0), GR(0), GR(0), GR(1)]))
    assert w.eta[0] is None
    assert w.sigma_m0 == -1


def test_profile_cube_roots_fall_back_to_floats():
    w = weierstrass_profile(_branch(3, [GR(0), GR(0), GR(2), GR(1)]))
    assert not w.exact
    assert w.key_pattern and w.sigma_m0_matches


def test_valuation_gap_between_levels():
    a = _branch(1, [GR(0), GR(0), GR(-1), GR(0), GR(1)])
    b = _branch(1, [GR(0), GR(0), GR(-1), GR(0), GR(3)])
    assert valuation_gap(a, b) == 4
    assert valuation_gap(a, a) is None
