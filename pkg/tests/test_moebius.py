import cmath
import math

import numpy as np
import pytest

from common.errors import DegenerateParameterError, UnsupportedParameterError
from modules.moebius.MoebiusMap import (MoebiusMap, beta, gamma, classify, fixed_points, beta_of_order,
                                        holonomy_from_beta, beta_from_holonomy, axis_complex_distance,
                                        gamma_from_geometry, mapping_triple)
from modules.moebius.ParameterSpace import (TraceParams, realize, extract_params, parameter_symmetries,
                                            realize_symmetries, project_to_two_generator_subgroup,
                                            chebyshev_action)


def randomMap(rng):
    m = rng.normal(size=(2, 2)) + 1j*rng.normal(size=(2, 2))
    return MoebiusMap.fromMatrix(m)


def randomParams(rng, beta_prime=-4):
    gam = complex(*rng.uniform(-2, 2, 2))
    b = complex(*rng.uniform(-2, 2, 2))
    return TraceParams(gam, b, beta_prime)


RANDOM_PAIRS = 10000


def close(a, b, rel=1e-9):
    return abs(a - b) <= rel*max(1.0, abs(a), abs(b))


def test_fricke_identity(rng):
    for _ in range(RANDOM_PAIRS):
        f, g = randomMap(rng), randomMap(rng)
        fg = f.compose(g)
        tf, tg, tfg = f.trace(), g.trace(), fg.trace()
        expected = tf**2 + tg**2 + tfg**2 - tf*tg*tfg - 2
        assert close(gamma(f, g) + 2, expected, rel=1e-8)


def test_gamma_sum_identity(rng):
    for _ in range(RANDOM_PAIRS):
        f, g = randomMap(rng), randomMap(rng)
        fg = f.compose(g)
        expected = beta(f) + beta(g) + beta(fg) - f.trace()*g.trace()*fg.trace() + 8
        assert close(gamma(f, g), expected, rel=1e-8)


def test_matrix_is_normalized(rng):
    f = randomMap(rng)
    assert f.det() == pytest.approx(1)
    assert f.compose(f.inverse()).isIdentity()


def test_sign_of_matrix_is_ignored():
    f = MoebiusMap(2, 1, 1, 1)
    g = MoebiusMap(-f.a, -f.b, -f.c, -f.d, normalize=False)
    assert f == g


def test_beta_of_order():
    assert beta_of_order(2) == pytest.approx(-4)
    assert beta_of_order(3) == pytest.approx(-3)
    assert beta_of_order(4) == pytest.approx(-2)
    assert beta_of_order(6) == pytest.approx(-1)
    assert beta_of_order(math.inf) == 0.0


def test_classify():
    assert classify(MoebiusMap.identity()).tag == "identity"
    assert classify(MoebiusMap.translation(1)).tag == "parabolic"
    assert classify(MoebiusMap.dilation(4)).tag == "loxodromic"
    rot = classify(MoebiusMap.rotation(5))
    assert rot.tag == "elliptic"
    assert rot.order == 5
    assert rot.rotation == pytest.approx(2*math.pi/5)
    assert classify(MoebiusMap.dilation(cmath.exp(4j*math.pi/7))).order == 7


def test_fixed_points():
    pts = fixed_points(MoebiusMap.rotation(3))
    assert any(cmath.isinf(p) for p in pts)
    assert any(abs(p) < 1e-12 for p in pts)
    assert len(fixed_points(MoebiusMap.translation(2))) == 1
    with pytest.raises(DegenerateParameterError):
        fixed_points(MoebiusMap.identity())


def test_mapping_triple():
    src = [0, 1, complex('inf')]
    dst = [2j, -1, 3]
    m = mapping_triple(src, dst)
    for s, d in zip(src, dst):
        assert close(m.apply(s), d)


def test_holonomy_round_trip(rng):
    for _ in range(50):
        b = complex(*rng.uniform(-5, 5, 2))
        tau, eta = holonomy_from_beta(b)
        assert tau >= 0
        assert close(beta_from_holonomy(tau, eta), b)
    with pytest.raises(DegenerateParameterError):
        holonomy_from_beta(0)


def test_realize_round_trip(rng):
    for bp in (-4, -3, complex(0.5, 1.5)):
        for _ in range(50):
            params = randomParams(rng, bp)
            f, g = realize(params)
            assert extract_params(f, g).isClose(params, tol=1e-8)


def test_realize_branch_without_lower_left_root():
    # gamma + beta beta'/4 = 0
    params = TraceParams(1 + 1j, 1 + 1j, -4)
    f, g = realize(params)
    assert extract_params(f, g).isClose(params, tol=1e-9)


def test_realize_rejects_zero_gamma():
    with pytest.raises(DegenerateParameterError):
        realize(TraceParams(0, -3, -4))


def test_axis_distance_reproduces_gamma(rng):
    for _ in range(50):
        params = randomParams(rng)
        f, g = realize(params)
        dist = axis_complex_distance(f, g)
        assert dist.delta >= 0
        assert 0 <= dist.theta < math.pi
        assert close(gamma_from_geometry(beta(f), beta(g), dist), params.gamma, rel=1e-7)


def test_axis_distance_needs_non_parabolic():
    f, g = realize(TraceParams(1 + 1j, 0, -4))
    with pytest.raises(DegenerateParameterError):
        axis_complex_distance(f, g)


def test_parameter_symmetries_are_realized(rng):
    for _ in range(20):
        params = randomParams(rng)
        expected = parameter_symmetries(params)
        for (f, g), target in zip(realize_symmetries(params), expected):
            assert extract_params(f, g).isClose(target, tol=1e-7)
    assert parameter_symmetries(TraceParams(1, -3))[1].gamma == -4


def test_symmetries_need_an_involution():
    with pytest.raises(UnsupportedParameterError):
        parameter_symmetries(TraceParams(1, -3, -3))


def test_projection_to_conjugate_subgroup(rng):
    for _ in range(20):
        params = randomParams(rng)
        f, g = realize(params)
        conj = g.compose(f).compose(g.inverse())
        sub, _ = project_to_two_generator_subgroup(params)
        assert close(gamma(f, conj), sub.gamma, rel=1e-8)
        assert close(beta(conj), sub.beta, rel=1e-8)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_chebyshev_action_matches_matrix_power(rng, n):
    for _ in range(20):
        params = randomParams(rng)
        f, g = realize(params)
        fn = f.power(n)
        moved = chebyshev_action(params, n)
        assert close(gamma(fn, g), moved.gamma, rel=1e-7)
        assert close(beta(fn), moved.beta, rel=1e-7)


def test_chebyshev_action_errors():
    with pytest.raises(DegenerateParameterError):
        chebyshev_action(TraceParams(1, 0), 2)
    with pytest.raises(UnsupportedParameterError):
        chebyshev_action(TraceParams(1, -3), 0)
