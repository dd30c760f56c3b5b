import math

import pytest

from common.errors import HolonomyBoundError, UnsupportedParameterError
from modules.triangle.TriangleTrig import delta_zero_high_order
from modules.volume.VolumeBounds import (TubeSpec, tube_volume, ball_volume_bound, c_p, holonomy_beta_bound,
                                         kill_holonomy, sharpness_witness, collar_bound_from_beta,
                                         high_order_collar, vest1, vest2, vest2_sl6, volume_bound_high_torsion,
                                         high_torsion_report)


def test_tube_volume():
    assert tube_volume(TubeSpec(1, 1, 1)) == pytest.approx(2.169423, abs=1e-6)
    assert tube_volume(TubeSpec(1, 1, 1, has_involution=True)) == pytest.approx(2.169423/2, abs=1e-6)
    assert tube_volume(TubeSpec(3, 2, 0)) == 0
    with pytest.raises(UnsupportedParameterError):
        TubeSpec(0, 1, 1)
    with pytest.raises(UnsupportedParameterError):
        TubeSpec(2, 0, 1)
    with pytest.raises(UnsupportedParameterError):
        TubeSpec(2, 1, math.inf)


def test_ball_volume_bound():
    assert ball_volume_bound(1.413, 60) == pytest.approx(0.29234, abs=1e-5)
    assert ball_volume_bound(0, 12) == 0
    with pytest.raises(UnsupportedParameterError):
        ball_volume_bound(-1, 12)
    with pytest.raises(UnsupportedParameterError):
        ball_volume_bound(1, 0)


def test_c_p():
    assert c_p(1) == 2.97
    assert c_p(2) == 1.91
    assert c_p(6) == pytest.approx(math.sqrt(3)*math.pi/6)
    with pytest.raises(UnsupportedParameterError):
        c_p(0)


@pytest.mark.parametrize("p", range(1, 13))
def test_kill_holonomy_meets_bound(rng, p):
    for _ in range(25):
        tau = rng.uniform(0.01, 0.35)*c_p(p)
        theta = rng.uniform(0, 2*math.pi)
        kill = kill_holonomy(tau, theta, p)
        assert kill.satisfied()
        assert kill.bound == pytest.approx(holonomy_beta_bound(tau, p))
        assert kill.m >= 1
        assert 0 <= kill.n < 2*p


@pytest.mark.parametrize("p", range(1, 13))
def test_holonomy_grid_has_no_violation_below_two_fifths(p):
    # 71 translation lengths times 142 angles
    witness = sharpness_witness(p, samples=71, tau_fraction=0.4)
    assert witness.ratio <= 1


@pytest.mark.parametrize("p", range(1, 13))
def test_holonomy_grid_near_c_p(p):
    witness = sharpness_witness(p, samples=71)
    if p <= 2:
        assert witness.ratio <= 1
    else:
        assert witness.ratio > 1


def test_kill_holonomy_without_holonomy():
    kill = kill_holonomy(0.1, 0, 2)
    assert kill.m == 1
    # n and n + p give the same element up to sign
    assert kill.n % 2 == 0
    assert kill.value == pytest.approx(4*math.sinh(0.05)**2)


def test_kill_holonomy_failure_reports_diagnostics():
    with pytest.raises(HolonomyBoundError) as err:
        kill_holonomy(c_p(3), math.pi/3, 3)
    assert err.value.diagnostics["p"] == 3
    assert err.value.diagnostics["value"] > err.value.diagnostics["bound"]


def test_kill_holonomy_rejects_long_translations():
    with pytest.raises(UnsupportedParameterError):
        kill_holonomy(1.1*c_p(5), 0.3, 5)
    with pytest.raises(UnsupportedParameterError):
        kill_holonomy(0.5, 0.3, 1, m_max=0)


def test_sharpness_witness_finds_the_failure():
    witness = sharpness_witness(3, samples=24)
    assert witness.ratio > 1.2


def test_collar_bound():
    assert collar_bound_from_beta(0.5) == pytest.approx(math.sqrt(8))
    with pytest.raises(UnsupportedParameterError):
        collar_bound_from_beta(1)


def test_high_order_collar():
    assert high_order_collar(6) == pytest.approx(math.acosh(2))
    assert high_order_collar(9) == delta_zero_high_order(9, 9)
    with pytest.raises(UnsupportedParameterError):
        high_order_collar(5)


def test_vest1():
    assert vest1(7, c_p(7)) == pytest.approx(0.144430, abs=1e-6)
    p, tau = 11, 0.3
    closed = math.pi*tau*math.cos(2*math.pi/p)/(8*p*math.sin(math.pi/p)**2)
    assert vest1(p, tau) == pytest.approx(closed)


def test_vest2():
    assert vest2(9, c_p(9)) == pytest.approx(0.102251, abs=1e-6)
    p, tau = 9, 0.5
    b = holonomy_beta_bound(tau, p)
    closed = math.sqrt(3)/8*math.sqrt(1 - b) - math.pi*tau/(4*p)
    assert vest2(p, tau) == pytest.approx(closed)


def test_vest2_sl6_is_at_least_the_plain_estimate():
    for tau in (0.3, 0.6):
        assert vest2_sl6(tau) >= vest2(6, tau) - 1e-12


def test_balanced_bound_order_seven():
    bound, tau = volume_bound_high_torsion(7)
    assert bound == pytest.approx(0.093416, abs=1e-5)
    assert tau/c_p(7) == pytest.approx(0.6468, abs=1e-3)
    assert vest1(7, tau) == pytest.approx(vest2(7, tau), abs=1e-10)


def test_balanced_bound_increases_with_order():
    bounds = [volume_bound_high_torsion(p)[0] for p in range(7, 51)]
    assert all(a < b for a, b in zip(bounds, bounds[1:]))
    assert bounds[-1] == pytest.approx(0.213112, abs=1e-5)


def test_high_torsion_report():
    report = high_torsion_report(6)
    assert report["method"] == "sl6"
    assert report["caveat"] is not None
    assert report["bound"] == pytest.approx(0.108253, abs=1e-5)
    assert high_torsion_report(8)["caveat"] is None
    with pytest.raises(UnsupportedParameterError):
        volume_bound_high_torsion(5)
