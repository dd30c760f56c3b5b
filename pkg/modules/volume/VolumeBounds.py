import logging
import math
import numpy as np
from scipy.optimize import brentq
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import HolonomyBoundError, UnsupportedParameterError
from modules.triangle.TriangleTrig import delta_zero_high_order

LOGGER = logging.getLogger('kleinian')

C_LOW_ORDER = {1: 2.97, 2: 1.91}
BOUND_RTOL = 1e-12
SL6_COSH = 2.0
PARABOLIC_CAVEAT = "inconclusive: parabolic case"


class TubeSpec:
    """
    Embedded tube about a simple axis: translation length tau, elliptic order p on the axis,
    collar radius r and whether an involution swaps the ends of the axis
    """

    def __init__(self, order, tau, collar_radius, has_involution=False):
        if int(order) != order or order < 1:
            raise UnsupportedParameterError("Axis order must be an integer >= 1, got {0}".format(order))
        if not tau > 0:
            raise UnsupportedParameterError("Translation length must be positive, got {0}".format(tau))
        if not collar_radius >= 0 or math.isinf(collar_radius):
            raise UnsupportedParameterError("Collar radius must be finite and non-negative, got {0}".format(collar_radius))
        self.order = int(order)
        self.tau = float(tau)
        self.collar_radius = float(collar_radius)
        self.has_involution = bool(has_involution)

    def toDict(self):
        return {"order": self.order, "tau": self.tau, "collar_radius": self.collar_radius,
                "has_involution": self.has_involution}


def tube_volume(spec):
    """
    pi tau sinh^2(r) / (2p), halved once more when an involution reverses the axis
    """
    vol = math.pi*spec.tau*math.sinh(spec.collar_radius)**2/(2*spec.order)
    if spec.has_involution:
        vol /= 2
    return vol


def ball_volume_bound(r, stabilizer_order):
    """
    Covolume bound pi (sinh(2r) - 2r) / |G| from an embedded ball of radius r with stabilizer G

    Input:
        r: ball radius, r >= 0
        stabilizer_order: order of the point stabilizer (12, 24 or 60 for A4, S4, A5)

    Output:
        volume: lower bound for the covolume
    """
    if r < 0:
        raise UnsupportedParameterError("Ball radius must be non-negative, got {0}".format(r))
    if int(stabilizer_order) != stabilizer_order or stabilizer_order < 1:
        raise UnsupportedParameterError("Stabilizer order must be an integer >= 1, got {0}".format(stabilizer_order))
    return math.pi*(math.sinh(2*r) - 2*r)/stabilizer_order


def _order(p, minimum=1):
    if int(p) != p or p < minimum:
        raise UnsupportedParameterError("Order must be an integer >= {0}, got {1}".format(minimum, p))
    return int(p)


def c_p(p):
    """
    Largest translation length for which powers of the loxodromic kill the holonomy
    """
    p = _order(p)
    if p in C_LOW_ORDER:
        return C_LOW_ORDER[p]
    return math.sqrt(3)*math.pi/p


def holonomy_beta_bound(tau, p):
    return 4*math.pi*tau/(math.sqrt(3)*p)


class HolonomyKill:
    """
    Exponents (m, n) of h = f^m g^n with |beta(h)| = |4 sinh^2(m(tau + i theta)/2 + i n pi/p)| small
    """

    def __init__(self, m, n, value, bound, tau=None, theta=None, p=None):
        self.m = int(m)
        self.n = int(n)
        self.value = float(value)
        self.bound = float(bound)
        self.tau = tau
        self.theta = theta
        self.p = p

    @property
    def ratio(self):
        return self.value/self.bound

    def satisfied(self):
        return self.value <= self.bound*(1 + BOUND_RTOL)

    def __repr__(self):
        return "HolonomyKill(m={0}, n={1}, value={2:.6g}, bound={3:.6g})".format(self.m, self.n, self.value, self.bound)

    def toDict(self):
        return {"m": self.m, "n": self.n, "value": self.value, "bound": self.bound, "ratio": self.ratio,
                "tau": self.tau, "theta": self.theta, "p": self.p}


def _betaGrid(tau, theta, p, m_max):
    """
    |4 sinh^2(m(tau + i theta)/2 + i n pi/p)| for m = 1..m_max (rows), n = 0..2p-1 (columns)

    theta may be an array, in which case the grid gains a leading axis.
    """
    m = np.arange(1, m_max + 1)[:, None]
    n = np.arange(2*p)[None, :]
    theta = np.asarray(theta, dtype=float)[..., None, None]
    w = m*(tau + 1j*theta)/2 + 1j*n*np.pi/p
    with np.errstate(over='ignore', invalid='ignore'):
        return np.abs(4*np.sinh(w)**2)


def _defaultMmax(tau, p):
    return int(math.ceil(c_p(p)/tau)) + 8


def kill_holonomy(tau, theta, p, m_max=None):
    """
    Search for a power of the loxodromic, corrected by a rotation about its axis, with small beta

    Scans m = 1..m_max and n = 0..2p-1, which covers every rotation since sinh^2 has
    period i pi. Ties go to the smallest m, then the smallest n.

    Input:
        tau: translation length, 0 < tau <= c_p(p)
        theta: holonomy angle
        p: order of the elliptic sharing the axis, 1 when there is none
        m_max: largest power, ceil(c_p / tau) + 8 by default

    Output:
        kill: HolonomyKill whose value is at most 4 pi tau / (sqrt(3) p)
    """
    p = _order(p)
    if not 0 < tau <= c_p(p)*(1 + BOUND_RTOL):
        raise UnsupportedParameterError("kill_holonomy needs 0 < tau <= c_p = {0:.6g}, got {1}".format(c_p(p), tau))
    if m_max is None:
        m_max = _defaultMmax(tau, p)
    if m_max < 1:
        raise UnsupportedParameterError("m_max must be at least 1, got {0}".format(m_max))

    grid = _betaGrid(tau, theta, p, int(m_max))
    i, j = np.unravel_index(np.nanargmin(grid), grid.shape)
    kill = HolonomyKill(i + 1, j, grid[i, j], holonomy_beta_bound(tau, p), tau, theta, p)
    if not kill.satisfied():
        raise HolonomyBoundError(
            "No power up to m={0} brings |beta| under {1:.6g} (best {2:.6g})".format(m_max, kill.bound, kill.value),
            {"tau": tau, "theta": theta, "p": p, "m_max": int(m_max), "m": kill.m, "n": kill.n,
             "value": kill.value, "bound": kill.bound})
    return kill


def sharpness_witness(p, samples=48, tau_fraction=1.0):
    """
    Grid point (tau, theta) where the best |beta| comes closest to, or furthest past, the bound

    Input:
        p: elliptic order on the axis
        samples: number of tau values, theta gets twice as many on [0, 2 pi)
        tau_fraction: scan tau over (0, tau_fraction * c_p]

    Output:
        witness: HolonomyKill with the largest value / bound ratio
    """
    p = _order(p)
    taus = np.linspace(c_p(p)*tau_fraction/samples, c_p(p)*tau_fraction, samples)
    thetas = np.linspace(0, 2*np.pi, 2*samples, endpoint=False)
    best = None
    for tau in taus:
        grid = _betaGrid(tau, thetas, p, _defaultMmax(tau, p))
        flat = grid.reshape(len(thetas), -1)
        idx = np.nanargmin(flat, axis=1)
        values = flat[np.arange(len(thetas)), idx]
        k = int(np.argmax(values))
        m, n = np.unravel_index(idx[k], grid.shape[1:])
        cand = HolonomyKill(m + 1, n, values[k], holonomy_beta_bound(tau, p), float(tau), float(thetas[k]), p)
        if best is None or cand.ratio > best.ratio:
            best = cand
    if best.ratio > 1:
        LOGGER.warning("p={0}: bound exceeded by a factor {1:.4f} at tau={2:.6g}, theta={3:.6g}".format(
            p, best.ratio, best.tau, best.theta))
    else:
        LOGGER.info("p={0}: closest approach {1:.4f} of the bound".format(p, best.ratio))
    return best


def collar_bound_from_beta(beta_abs):
    """
    Lower bound sqrt(4(1 - |beta|)/|beta|^2) for cosh of the distance between an axis and its nearest translate

    Input:
        beta_abs: |beta(h)| of an element stabilizing the axis, 0 < beta_abs < 1

    Output:
        cosh_delta: lower bound for cosh(delta)
    """
    if not 0 < beta_abs < 1:
        raise UnsupportedParameterError("collar bound needs 0 < |beta| < 1, got {0}".format(beta_abs))
    return math.sqrt(4*(1 - beta_abs)/beta_abs**2)


def _collarFromCosh(coshDelta):
    # half the axis separation, zero when the bound carries no information
    return math.acosh(max(coshDelta, 1.0))/2


def high_order_collar(p):
    """
    Lower bound for the distance between a simple axis of order p >= 6 and its nearest translate

    For p >= 7 this is delta_0(p, p); for p = 6 the bound |gamma| >= 1 gives cosh(delta) >= 2,
    which agrees with the same closed form.
    """
    p = _order(p, 6)
    if p == 6:
        return math.acosh(SL6_COSH)
    return delta_zero_high_order(p, p)


def vest1(p, tau):
    """
    Tube volume with the collar delta_0(p, p)/2, equal to pi tau cos(2 pi/p) / (8 p sin^2(pi/p))
    """
    return tube_volume(TubeSpec(p, tau, high_order_collar(p)/2))


def vest2(p, tau):
    """
    Tube volume when a holonomy killing element h has |beta(h)| <= 4 pi tau / (sqrt(3) p)

    Jorgensen's inequality for h and its nearest translate bounds the collar; the
    closed form is sqrt(3)/8 sqrt(1 - 4 pi tau/(sqrt(3) p)) - pi tau/(4p).
    """
    p = _order(p)
    coshDelta = collar_bound_from_beta(holonomy_beta_bound(tau, p))
    return tube_volume(TubeSpec(p, tau, _collarFromCosh(coshDelta)))


def vest2_sl6(tau):
    """
    Order six variant of vest2: |gamma(f, h')| >= 1 for the order six elliptic f and the
    translate h' adds |sinh(delta + i theta)|^2 >= 4/|beta(h)| to Jorgensen's bound,
    which stays informative for |beta(h)| >= 1

    When f and its nearest translate share a fixed point the inequality does not apply;
    that branch forces a parabolic and is reported, not resolved (see PARABOLIC_CAVEAT).
    """
    b = holonomy_beta_bound(tau, 6)
    sinhSq = 4/b
    if b < 1:
        sinhSq = max(sinhSq, collar_bound_from_beta(b)**2)
    return tube_volume(TubeSpec(6, tau, _collarFromCosh(math.sqrt(sinhSq))))


def _secondEstimate(p):
    if p == 6:
        return vest2_sl6
    return lambda tau: vest2(p, tau)


def volume_bound_high_torsion(p):
    """
    Covolume lower bound for a Kleinian group with a simple elliptic axis of order p >= 6

    For tau >= c_p the collar estimate vest1 applies; below c_p both vest1 and vest2 hold.
    vest1 increases and vest2 decreases in tau, so the worst case sits where they cross.
    When they do not cross below c_p the bound is vest1(c_p).

    Input:
        p: elliptic order, p >= 6

    Output:
        bound: the certified lower bound
        balance_tau: translation length where the bound is attained
    """
    p = _order(p, 6)
    cp = c_p(p)
    second = _secondEstimate(p)

    def gap(tau):
        return vest1(p, tau) - second(tau)

    if gap(cp) <= 0:
        LOGGER.info("p={0}: estimates do not cross below c_p".format(p))
        return vest1(p, cp), cp
    tau = brentq(gap, cp*1e-9, cp, xtol=1e-15, rtol=1e-14)
    return vest1(p, tau), tau


def high_torsion_report(p):
    """
    Both estimates at c_p and the balanced bound, as a dict
    """
    p = _order(p, 6)
    cp = c_p(p)
    bound, tau = volume_bound_high_torsion(p)
    second = _secondEstimate(p)
    return {"p": p, "c_p": cp, "vest1_at_c_p": vest1(p, cp), "vest2_at_c_p": second(cp),
            "bound": bound, "balance_tau": tau, "method": "sl6" if p == 6 else "jorgensen",
            "caveat": PARABOLIC_CAVEAT if p == 6 else None}
