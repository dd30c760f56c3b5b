import math

import pytest

from common.errors import TriangleError, UnsupportedParameterError
from modules.moebius.MoebiusMap import axis_complex_distance
from modules.moebius.ParameterSpace import TraceParams, realize
from modules.triangle.FreeProduct import (parseOrder, order_from_beta, free_product_ellipse, is_free_product,
                                          trivial_free_bound, isometric_circle_free_test, gamma_from_omega,
                                          omega_from_gamma)
from modules.triangle.TriangleTrig import (EllipticOrders, TriangleAngles, triangle_edge_lengths, inscribed_radius,
                                           admissible_222_angles, delta_infinity, delta_zero_high_order,
                                           elliptic_displacement, orbifold_area)
from modules.triangle.Margulis import (margulis_general, margulis_triangle, margulis_ideal, margulis_222,
                                       numeric_margulis_oracle, margulis_printed)
from modules.triangle import ReferenceTables
from modules.triangle.ReferenceTables import (spherical_axis_angles, elementary_gammas,
                                              spherical_point_distance_lookup, margulis_table, nontriangle_table)

PI = math.pi


def test_parse_order():
    assert parseOrder("inf") == math.inf
    assert parseOrder("∞") == math.inf
    assert parseOrder(7) == 7
    with pytest.raises(UnsupportedParameterError):
        parseOrder(1)
    assert not EllipticOrders(2, 3, "inf").isFinite()


def test_order_from_beta():
    assert order_from_beta(-3) == 3
    assert order_from_beta(-4) == 2
    assert order_from_beta(0) == math.inf
    assert order_from_beta(-4*math.sin(PI/7)**2) == 7
    assert order_from_beta(1 + 1j) is None


def test_free_product_ellipse_is_a_disk_for_order_two_and_parabolic():
    lam, focus = free_product_ellipse(2, "inf")
    assert lam == pytest.approx(8)
    assert focus == 0
    assert is_free_product(4, 2, "inf")
    assert not is_free_product(3.9j, 2, "inf")
    assert trivial_free_bound(2, "inf") == pytest.approx(4)
    with pytest.raises(UnsupportedParameterError):
        free_product_ellipse(2, 2)


def test_isometric_circle_test():
    assert not isometric_circle_free_test(3, 3, 0.99)
    assert isometric_circle_free_test(3, 3, 0)


def test_omega_round_trip():
    gam = 1 + 2j
    omega = omega_from_gamma(gam, 3, 4)
    assert abs(omega) <= 1
    assert gamma_from_omega(omega, 3, 4) == pytest.approx(gam)


def test_delta_infinity():
    assert delta_infinity(2, 3) == pytest.approx(0.549306144, abs=1e-9)
    assert delta_infinity(5, 7) == pytest.approx(delta_infinity(7, 5))
    with pytest.raises(UnsupportedParameterError):
        delta_infinity(2, 2)


def test_delta_zero_high_order():
    assert delta_zero_high_order(7, 7) == pytest.approx(1.632469596, abs=1e-9)
    values = [delta_zero_high_order(p, 7) for p in range(7, 30)]
    assert all(a < b for a, b in zip(values, values[1:]))
    assert values[1] == pytest.approx(math.acosh(1/(2*math.sin(math.pi/8)*math.sin(math.pi/7))))
    with pytest.raises(UnsupportedParameterError):
        delta_zero_high_order(6, 7)


def test_free_product_distance_exceeds_collar_distance():
    for p in range(7, 51):
        for q in range(p, 51, 7):
            assert delta_infinity(p, q) > delta_zero_high_order(p, q)


def test_triangle_angles_validation():
    with pytest.raises(TriangleError):
        TriangleAngles(PI/2, PI/2, PI/2)
    with pytest.raises(TriangleError):
        TriangleAngles(-0.1, 0.1, 0.1)


def test_edge_lengths():
    lengths = triangle_edge_lengths(TriangleAngles(PI/2, PI/3, 0))
    assert lengths[0] == pytest.approx(math.acosh(1/math.sin(PI/3)))
    assert math.isinf(lengths[1]) and math.isinf(lengths[2])
    equal = triangle_edge_lengths(TriangleAngles(PI/4, PI/4, PI/4))
    assert equal[0] == pytest.approx(equal[1]) == pytest.approx(equal[2])


def test_inscribed_radius():
    assert 2*inscribed_radius(TriangleAngles(PI/2, PI/3, PI/7)) == pytest.approx(0.208860914, abs=1e-9)
    # ideal triangle
    assert inscribed_radius(TriangleAngles(0, 0, 0)) == pytest.approx(math.log(3)/2)


@pytest.mark.parametrize("angles, expected", [
    ((PI/2, PI/3, PI/7), True),
    ((2*PI/7, PI/2, PI/7), True),
    ((2*PI/7, PI/3, PI/7), True),
    ((PI/5, PI/5, 3*PI/5), False),
    ((PI/2, PI/2, PI/2), False),
    ((0.3, 0.4, 0.5), False),
])
def test_admissible_222_angles(angles, expected):
    assert admissible_222_angles(angles) == expected


def test_margulis_222():
    result = margulis_222((PI/2, PI/3, PI/7))
    assert result.method == "inscribed_disk"
    assert result.value == pytest.approx(0.208860914, abs=1e-9)
    with pytest.raises(TriangleError):
        margulis_222((PI/5, PI/4, PI/2.5))


def test_margulis_ideal():
    assert margulis_ideal((3, 3, 3)).value == pytest.approx(0.962423650, abs=1e-9)
    assert margulis_ideal((4, 4, 4)).value == pytest.approx(0.795365461, abs=1e-9)
    with pytest.raises(UnsupportedParameterError):
        margulis_ideal((3, 3, "inf"))


def test_general_formula_matches_ideal_formula():
    result = margulis_triangle((3, 3, 3), (0, 0, 0))
    assert result.method == "general_formula"
    assert result.value == pytest.approx(0.962423650, abs=1e-9)
    eps = 1e-6
    assert margulis_triangle((3, 4, 5), (eps, eps, eps)).value == pytest.approx(
        margulis_ideal((3, 4, 5)).value, abs=1e-6)


def test_general_formula_for_half_turns_is_twice_the_inradius():
    assert margulis_general((2, 2, 2), (PI/2, PI/3, PI/7)) == pytest.approx(0.208860914, abs=1e-9)


@pytest.mark.parametrize("orders, angles, printed, gram", [
    ((3, 3, 3), (PI/4, PI/4, PI/4), 2.21191, 0.63297),
    ((3, 4, 5), (PI/5, PI/4, PI/3), 1.74603, 0.48444),
])
def test_printed_formula_disagreement_is_an_erratum(orders, angles, printed, gram):
    for vertex in range(3):
        assert margulis_printed(orders, angles, vertex) == pytest.approx(printed, abs=1e-5)
    result = margulis_triangle(orders, angles)
    assert result.value == pytest.approx(gram, abs=1e-5)
    assert result.value == pytest.approx(numeric_margulis_oracle(orders, angles).value, abs=1e-6)
    assert result.printed == pytest.approx(printed, abs=1e-5)
    assert result.erratum["kind"] == "one_vertex_formula"
    assert result.erratum["labelings_agree"]
    assert result.toDict()["erratum"]["gram_form"] == result.value


def test_printed_formula_needs_finite_vertices():
    with pytest.raises(TriangleError):
        margulis_printed((3, 3, 3), (0, 0, 0))
    with pytest.raises(UnsupportedParameterError):
        margulis_printed((3, 3, 3), (PI/4, PI/4, PI/4), vertex=3)
    assert margulis_triangle((3, 3, 3), (0, 0, 0)).erratum is None


@pytest.mark.parametrize("orders, angles", [
    ((3, 3, 3), (0, 0, 0)),
    ((2, 2, 2), (PI/2, PI/3, PI/7)),
])
def test_numeric_oracle(orders, angles):
    oracle = numeric_margulis_oracle(orders, angles)
    assert oracle.method == "numeric_oracle"
    assert oracle.value == pytest.approx(margulis_general(orders, angles), abs=1e-6)
    assert oracle.residual < 1e-6


def test_elliptic_displacement():
    assert elliptic_displacement(5, 0) == 0
    assert elliptic_displacement(2, 0.7) == pytest.approx(1.4)
    with pytest.raises(TriangleError):
        elliptic_displacement(3, -1)


def test_orbifold_area():
    assert orbifold_area(0, 0, [2, 3, 7]) == pytest.approx(PI/21)
    assert orbifold_area(1, 1, []) == pytest.approx(2*PI)
    with pytest.raises(TriangleError):
        orbifold_area(1, 0, [])


def test_spherical_axis_angles():
    a4 = spherical_axis_angles((2, 3), "A4")
    thetas = sorted(e.theta for e in a4)
    assert thetas[0] == pytest.approx(0.955317, abs=1e-6)
    assert thetas[1] == pytest.approx(2.186276, abs=1e-6)
    assert all(math.sin(e.theta) == pytest.approx(e.sin_theta, abs=1e-12) for e in a4)
    corrected = [e for e in a4 if e.erratum]
    assert len(corrected) == 1 and corrected[0].theta_printed == "2.1462"

    (a4_33,) = [e for e in spherical_axis_angles((3, 3), "A4") if e.theta < PI/2]
    assert a4_33.theta == pytest.approx(1.2309, abs=1e-4)
    assert a4_33.psi == pytest.approx(PI/2)
    a5 = spherical_axis_angles((5, 2), "A5")
    assert min(e.theta for e in a5) == pytest.approx(0.5535, abs=1e-4)
    with pytest.raises(UnsupportedParameterError):
        spherical_axis_angles((2, 7), "A5")


def test_half_turn_angles():
    entries = spherical_axis_angles((2, 2), m=4)
    assert sorted(round(e.theta, 9) for e in entries if e.source == "remark" and e.theta > 0) == \
        [round(k*PI/4, 9) for k in (1, 2, 3)]


def test_elementary_gammas():
    values = elementary_gammas(2, 3)
    gammas = [g.real for g, _ in values]
    assert gammas == pytest.approx([-3, -(3 + math.sqrt(5))/2, -2, -1, -(3 - math.sqrt(5))/2])
    assert dict((round(g.real, 6), name) for g, name in values)[-2.0] == "A4"
    assert [g for g, _ in elementary_gammas(2, 2)] == [pytest.approx(-4)]


@pytest.mark.parametrize("gam, sin2", [(-2, 2/3), (-1, 1/3)])
def test_elementary_gammas_have_intersecting_axes(gam, sin2):
    f, g = realize(TraceParams(gam, -3, -4))
    dist = axis_complex_distance(f, g)
    assert dist.delta == pytest.approx(0, abs=1e-7)
    assert math.sin(dist.theta)**2 == pytest.approx(sin2, abs=1e-7)


def test_spherical_point_distances():
    assert spherical_point_distance_lookup("A4-A4", 1) == (3, pytest.approx(0.69314))
    assert spherical_point_distance_lookup(("A5", "A5"), 7) == (2, pytest.approx(2.82643))
    assert spherical_point_distance_lookup("S4-S4", 3) == ((3, 4), pytest.approx(1.31696))
    assert spherical_point_distance_lookup(("A5", "A4"), 1) == spherical_point_distance_lookup("A4-A5", 1)
    with pytest.raises(UnsupportedParameterError):
        spherical_point_distance_lookup("A4-A4", 99)
    with pytest.raises(UnsupportedParameterError):
        spherical_point_distance_lookup("A4-D3", 1)


def test_margulis_table_mismatches_are_errata():
    df = margulis_table()
    flagged = df[df.mismatch]
    assert (flagged.erratum != "").all()
    assert not flagged.erratum.str.startswith("unexplained").any()
    keys = set(zip(flagged.family, flagged['index']))
    assert {("pqr", "9"), ("pqr", "10"), ("234", "1")} <= keys
    assert {("pqr", "6"), ("pqr", "8"), ("233", "15")} <= keys
    assert {("236", str(i)) for i in range(2, 10)} <= keys
    assert len(flagged) == 14
    row1 = df[(df.family == "pqr") & (df['index'] == "1")].iloc[0]
    assert row1.computed == pytest.approx(0.962424, abs=1e-6)
    with pytest.raises(UnsupportedParameterError):
        margulis_table("999")


def test_margulis_table_flags_unexplained_mismatches(monkeypatch, table):
    frame = table('margulis_triangles').copy()
    frame.loc[frame.index[0], "m_printed"] = "0.5000"
    monkeypatch.setattr(ReferenceTables, "readTable", lambda name: frame)
    df = margulis_table("pqr")
    assert df.iloc[0].mismatch
    assert df.iloc[0].erratum == "unexplained mismatch (computed 0.9624)"


def test_nontriangle_table():
    df = nontriangle_table()
    assert df.constant_value.between(0, 1).all()
    assert (df.erratum != "").sum() == 1
