import pytest
from hypothesis import given, settings, strategies as st

from bilip.gaussian import GR, I
from bilip.poly import (
    MultiPoly,
    dehomogenize,
    homogeneous_parts,
    homogenize,
    partial_derivative,
    substitute,
)
from bilip import upoly

x, y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)

coef = st.builds(GR, st.integers(-4, 4), st.integers(-4, 4))
polys = st.builds(
    lambda t: MultiPoly(2, t),
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coef, max_size=5),
)


def test_degree_order_and_forms():
    f = x * y + x + 1
    assert f.degree == 2 and f.order == 0
    assert f.leading_form() == x * y
    assert f.lowest_form() == MultiPoly.constant(2, 1)


def test_homogenize_round_trip():
    f = x**3 + x * y + 1
    F = homogenize(f)
    assert F.is_homogeneous() and F.degree == 3
    assert dehomogenize(F) == f


def test_homogenize_zero_fails():
    with pytest.raises(ValueError):
        homogenize(MultiPoly.zero(2))


def test_substitute_checks_arity():
    with pytest.raises(ValueError):
        substitute(x, [x])


def test_directional_derivative():
    f = (x + y * 2) ** 3
    assert partial_derivative(f, [2, -1]).is_zero()
    with pytest.raises(ValueError):
        partial_derivative(f, [0, 0])


@settings(max_examples=50)
@given(polys, polys)
def test_ring_laws(p, q):
    assert p * q == q * p
    assert (p + q) - q == p
    assert homogeneous_parts(p).total(2) == p


@settings(max_examples=40)
@given(polys, coef, coef)
def test_evaluation_is_a_homomorphism(p, a, b):
    q = p * p + x
    assert q.evaluate([a, b]) == p.evaluate([a, b]) ** 2 + a


def test_roots_in_qi_with_residual():
    # (z + 3/2 + i/2)^2 (z + 1 + i) (z^2 - 2)
    a = upoly.mul(upoly.mul([GR("3/2") + I / 2, 1], [GR("3/2") + I / 2, 1]), [1 + I, 1])
    a = upoly.mul(a, [-2, 0, 1])
    roots, residual = upoly.roots_in_qi(a)
    assert dict(roots) == {-GR("3/2") - I / 2: 2, -1 - I: 1}
    assert residual == [([GR(-2), GR(0), GR(1)], 1)]
