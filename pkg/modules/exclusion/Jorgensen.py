import numpy as np
from scipy.optimize import brentq
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import UnsupportedParameterError
from modules.moebius.ParameterSpace import TraceParams
from modules.words.TracePolynomial import polynomial_of

ZERO_TOL = 1e-12


def riley_r0():
    """
    Real root of r^3 + r^2 - 1, the radius of the disks about +-1 in the Riley slice
    """
    return brentq(lambda r: r**3 + r**2 - 1, 0.5, 1.0, xtol=1e-15)


def order3_r0():
    """
    Real root of r^2 (r+3) (r+2)^2 = 1, equal to 2cos(2 pi/7) - 1
    """
    return brentq(lambda r: r*r*(r + 3)*(r + 2)**2 - 1, 0.1, 0.5, xtol=1e-15)


def order3_r1():
    """
    Radius of the disk about -2 for beta = -3, root of (2 + r) r^4 = 2cos(2 pi/7) - 1
    """
    r0 = order3_r0()
    return brentq(lambda r: (2 + r)*r**4 - r0, 0.1, 1.0, xtol=1e-15)


def _split(params):
    if isinstance(params, TraceParams):
        return params.gamma, params.beta
    return params[0], params[1]


def jorgensen_margin(params):
    """
    |gamma| + |beta| - 1, negative values certify that <f, g> is not a Kleinian group
    """
    gam, b = _split(params)
    return np.abs(gam) + np.abs(b) - 1


def modified_jorgensen_margin(params):
    """
    |gamma| + |1 + beta| - 1 for g of order two

    Output:
        margin: real
        exception: True when gamma = 1 + beta, where the inequality is not conclusive
    """
    gam, b = _split(params)
    margin = np.abs(gam) + np.abs(1 + b) - 1
    exception = np.abs(gam - (1 + b)) < 1e-9
    return margin, exception


def word_inequality(w, params):
    """
    Jorgensen's inequality applied to <f, w(g, f)>

    Input:
        w: good word or compiled TracePolynomial
        params: TraceParams or (gamma, beta)

    Output:
        margin: |p_w(gamma, beta)| + |beta| - 1
        zero_locus: True when p_w(gamma, beta) vanishes
    """
    gam, b = _split(params)
    poly = polynomial_of(w)
    value = poly.evaluate(gam, b)
    margin = np.abs(value) + np.abs(b) - 1
    zero_locus = np.abs(value) < ZERO_TOL*np.maximum(1.0, poly.evaluate_abs(gam, b))
    if np.ndim(margin) == 0:
        return float(margin), bool(zero_locus)
    return margin, zero_locus


def order_p_minimum_gamma(p):
    """
    Smallest |gamma| of a Kleinian group with f of order p

    Input:
        p: 3 or 6

    Output:
        bound: 2cos(2 pi/7) - 1 for p = 3, 1 for p = 6
    """
    if p == 3:
        return order3_r0()
    if p == 6:
        return 1.0
    raise UnsupportedParameterError("Minimum |gamma| is only available for orders 3 and 6, got {0}".format(p))
