import random
from fractions import Fraction

import pytest

from plectic.errors import ChartMismatchError, DegreeError
from plectic.exterior import Chart, CoordinateMap, Form, VectorField, interior_multi

from conftest import random_form, random_poly_expr, random_vector_field, scalar_field_form

F = Fraction

CHART3 = Chart("c3", ("x", "y", "z"))


def dx(chart, name):
    return Form.d_coord(chart, name)


# -- wedge -------------------------------------------------------------------


def test_wedge_repeated_index_vanishes():
    a = dx(CHART3, "x")
    assert a.wedge(a).is_zero()


def test_wedge_antisymmetry():
    a, b = dx(CHART3, "x"), dx(CHART3, "y")
    assert a.wedge(b) == -(b.wedge(a))


def test_wedge_builds_scalar_field_summand(chart4):
    built = (
        dx(chart4, "rho_x").wedge(dx(chart4, "u")).wedge(dx(chart4, "t"))
    )
    expected = Form.from_terms(chart4, 3, [(("rho_x", "u", "t"), "1")])
    assert built == expected


# -- interior ----------------------------------------------------------------


def test_interior_dual_pairing():
    chart = Chart("c2", ("t", "x"))
    dt_dx = dx(chart, "t").wedge(dx(chart, "x"))
    contracted = dt_dx.interior(VectorField.coordinate(chart, "t"))
    assert contracted == dx(chart, "x")


def test_interior_kernel_fields_annihilate_scalar_field_form(chart4):
    omega = scalar_field_form(chart4)
    v1 = VectorField.from_mapping(chart4, {"x": "1", "u": "rho_x"})
    v2 = VectorField.from_mapping(chart4, {"rho_t": "1"})
    assert omega.interior(v1).is_zero()
    assert omega.interior(v2).is_zero()


def test_interior_misses_absent_coordinate():
    chart = Chart("r4", ("x1", "x2", "x3", "x4"))
    omega = Form.from_terms(chart, 3, [(("x1", "x2", "x3"), "1")])
    assert omega.interior(VectorField.coordinate(chart, "x4")).is_zero()


def test_interior_of_zero_form_rejected():
    with pytest.raises(DegreeError):
        Form.scalar(CHART3, 1).interior(VectorField.coordinate(CHART3, "x"))


def test_interior_chart_mismatch():
    other = Chart("other", ("x", "y", "z"))
    with pytest.raises(ChartMismatchError):
        dx(CHART3, "x").interior(VectorField.coordinate(other, "x"))


def test_wedge_chart_mismatch():
    other = Chart("other", ("x", "y", "z"))
    with pytest.raises(ChartMismatchError):
        dx(CHART3, "x").wedge(dx(other, "y"))


def test_addition_requires_matching_degree():
    with pytest.raises(DegreeError):
        dx(CHART3, "x") + Form.scalar(CHART3, 1)


# -- iterated interior -------------------------------------------------------


def test_interior_multi_matches_nested_single_contractions():
    chart = Chart("c3b", ("t", "x", "u"))
    alpha = dx(chart, "t").wedge(dx(chart, "x")).wedge(dx(chart, "u"))
    et = VectorField.coordinate(chart, "t")
    ex = VectorField.coordinate(chart, "x")
    # oracle: nested single contractions in the documented order
    nested = alpha.interior(et).interior(ex)
    assert interior_multi([et, ex], alpha) == nested
    assert nested == dx(chart, "u")


def test_interior_multi_alternates():
    rng = random.Random(23)
    for _ in range(20):
        alpha = random_form(rng, CHART3, 2)
        v, w = random_vector_field(rng, CHART3), random_vector_field(rng, CHART3)
        assert interior_multi([v, w], alpha) == -interior_multi([w, v], alpha)


def test_interior_multi_kernel_pair_kills_scalar_field_form(chart4):
    omega = scalar_field_form(chart4)
    v1 = VectorField.from_mapping(chart4, {"x": "1", "u": "rho_x"})
    et = VectorField.coordinate(chart4, "t")
    assert interior_multi([v1, et], omega).is_zero()


def test_interior_multi_too_many_fields():
    with pytest.raises(DegreeError):
        interior_multi(
            [VectorField.coordinate(CHART3, "x")] * 2, dx(CHART3, "x")
        )


# -- exterior derivative -----------------------------------------------------


def test_scalar_field_form_is_closed(chart4):
    assert scalar_field_form(chart4).d().is_zero()


def test_d_single_term():
    chart = Chart("c2", ("x", "t"))
    xdt = Form.from_terms(chart, 1, [(("t",), "x")])
    assert xdt.d() == dx(chart, "x").wedge(dx(chart, "t"))


def test_dd_zero_on_random_forms():
    rng = random.Random(17)
    for _ in range(30):
        degree = rng.randint(0, 2)
        alpha = random_form(rng, CHART3, degree, rational=True)
        assert alpha.d().d().is_zero()


# -- pullback ----------------------------------------------------------------


def test_pullback_along_identity():
    rng = random.Random(29)
    ident = CoordinateMap.identity(CHART3)
    for _ in range(10):
        alpha = random_form(rng, CHART3, rng.randint(0, 3))
        assert ident.pullback(alpha) == alpha


def test_pullback_is_algebra_homomorphism():
    rng = random.Random(31)
    src = Chart("src", ("a", "b"))
    for _ in range(15):
        phi = CoordinateMap(
            src, CHART3, [random_poly_expr(rng, src.coords) for _ in range(3)]
        )
        alpha = random_form(rng, CHART3, 1)
        beta = random_form(rng, CHART3, 1)
        assert phi.pullback(alpha.wedge(beta)) == phi.pullback(alpha).wedge(
            phi.pullback(beta)
        )


def test_pullback_functoriality():
    rng = random.Random(37)
    a_chart = Chart("a", ("s",))
    b_chart = Chart("b", ("p", "q"))
    for _ in range(15):
        psi = CoordinateMap(
            a_chart, b_chart, [random_poly_expr(rng, a_chart.coords) for _ in range(2)]
        )
        phi = CoordinateMap(
            b_chart, CHART3, [random_poly_expr(rng, b_chart.coords) for _ in range(3)]
        )
        alpha = random_form(rng, CHART3, rng.randint(0, 1))
        composed = phi.after(psi)
        assert composed.pullback(alpha) == psi.pullback(phi.pullback(alpha))


def test_pullback_commutes_with_d():
    rng = random.Random(41)
    src = Chart("src", ("a", "b"))
    for _ in range(15):
        phi = CoordinateMap(
            src, CHART3, [random_poly_expr(rng, src.coords) for _ in range(3)]
        )
        alpha = random_form(rng, CHART3, rng.randint(0, 2))
        assert phi.pullback(alpha.d()) == phi.pullback(alpha).d()


# -- evaluation --------------------------------------------------------------


def test_eval_form_orientation():
    chart = Chart("c2", ("x", "t"))
    dxdt = dx(chart, "x").wedge(dx(chart, "t"))
    ex, et = [F(1), F(0)], [F(0), F(1)]
    assert dxdt.evaluate([0, 0], [ex, et]) == 1
    assert dxdt.evaluate([0, 0], [et, ex]) == -1


def test_eval_scalar_field_form(chart4):
    # determinant-expansion oracle: only the drho_x^du^dt term survives on
    # (e_rho_x, e_u, e_t), giving +1 regardless of rho_x
    omega = scalar_field_form(chart4)
    e_rho_x = [F(0), F(0), F(0), F(1), F(0)]
    e_u = [F(0), F(0), F(1), F(0), F(0)]
    e_t = [F(0), F(1), F(0), F(0), F(0)]
    assert omega.evaluate([0, 0, 0, 2, 0], [e_rho_x, e_u, e_t]) == 1


def test_eval_form_alternating_random():
    rng = random.Random(43)
    for _ in range(20):
        alpha = random_form(rng, CHART3, 2)
        point = [F(rng.randint(-3, 3)) for _ in range(3)]
        v = [F(rng.randint(-3, 3)) for _ in range(3)]
        w = [F(rng.randint(-3, 3)) for _ in range(3)]
        assert alpha.evaluate(point, [v, w]) == -alpha.evaluate(point, [w, v])


def test_eval_arity_mismatch():
    with pytest.raises(DegreeError):
        dx(CHART3, "x").evaluate([0, 0, 0], [])


# -- graded algebra properties ------------------------------------------------


def test_wedge_graded_commutativity_and_associativity():
    rng = random.Random(47)
    for _ in range(25):
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        alpha = random_form(rng, CHART3, p)
        beta = random_form(rng, CHART3, q)
        sign = (-1) ** (p * q)
        assert alpha.wedge(beta) == beta.wedge(alpha) * sign
        gamma = random_form(rng, CHART3, rng.randint(0, 3 - min(3, p + q)))
        assert alpha.wedge(beta).wedge(gamma) == alpha.wedge(beta.wedge(gamma))


def test_interior_is_graded_derivation():
    rng = random.Random(53)
    for _ in range(25):
        p = rng.randint(1, 2)
        q = rng.randint(1, 3 - p)
        alpha = random_form(rng, CHART3, p)
        beta = random_form(rng, CHART3, q)
        x = random_vector_field(rng, CHART3)
        lhs = alpha.wedge(beta).interior(x)
        rhs = alpha.interior(x).wedge(beta) + alpha.wedge(beta.interior(x)) * (
            (-1) ** p
        )
        assert lhs == rhs


def test_double_interior_vanishes():
    rng = random.Random(59)
    for _ in range(20):
        alpha = random_form(rng, CHART3, 2)
        x = random_vector_field(rng, CHART3)
        assert alpha.interior(x).interior(x).is_zero()
