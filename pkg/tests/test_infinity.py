import pytest

from bilip.gaussian import GR, I
from bilip.infinity import (
    PointAtInfinity,
    cone_criterion,
    infinity_residual_degree,
    local_model,
    points_at_infinity,
    tangent_cone,
)
from bilip.parser import parse
from bilip.poly import MultiPoly

XY = ["x", "y"]
UV = ["u", "v"]


def pts(expr):
    return [(str(p), p.mult_a) for p in points_at_infinity(parse(expr, XY))]


def test_points_of_xy_and_parabola():
    assert pts("x*y") == [("[0:1]", 1), ("[1:0]", 1)]
    assert pts("x+y^2") == [("[1:0]", 2)]
    assert pts("x^2+y^2") == [("[1:-1*i]", 1), ("[1:1*i]", 1)]


def test_irrational_points_are_counted_not_listed():
    f = parse("x^2-2*y^2+x", XY)
    assert points_at_infinity(f) == []
    assert infinity_residual_degree(f) == 2


def test_point_parsing_normalizes():
    assert PointAtInfinity.parse("2:4").coords == (GR(1), GR(2))
    assert PointAtInfinity.parse("[0:5]").coords == (GR(0), GR(1))
    with pytest.raises(ValueError):
        PointAtInfinity((GR(2), GR(1)), 1)


def test_local_model_of_xy():
    m = local_model(parse("x*y", XY), PointAtInfinity.parse("1:0"))
    assert m.g == parse("u", UV)
    assert m.m == 1 and m.lam is None
    assert cone_criterion(m, 0, 1)


def test_local_model_of_parabola_is_tangent_to_infinity():
    m = local_model(parse("x+y^2", XY), PointAtInfinity.parse("1:0"))
    assert m.g == parse("v+u^2", UV)
    assert m.m == 1 and m.lam == 1
    assert m.g_at(1) == parse("v+u^2-v^2", UV)
    assert not cone_criterion(m, 0, 1)
    cone = tangent_cone(m, 1)
    assert cone.lines == (((GR(0), GR(1)), 1),)


def test_point_off_the_curve_is_rejected():
    with pytest.raises(ValueError):
        local_model(parse("x*y", XY), PointAtInfinity.parse("1:1"))


def test_cone_criterion_needs_distinct_values():
    m = local_model(parse("x*y", XY), PointAtInfinity.parse("0:1"))
    with pytest.raises(ValueError):
        cone_criterion(m, 2, 2)


def test_top_valuation_bounds_multiplicity():
    # m < beta <= d at a point where the levels are tangent to the line at infinity
    for expr in ["x+y^3", "x^2+y^5", "x^3+y^4", "y^2+x*y-x^3"]:
        f = parse(expr, XY)
        for p in points_at_infinity(f):
            m = local_model(f, p)
            if m.tangent_to_infinity:
                assert m.m < m.f_top_valuation <= m.d
