import math
import cmath
import numpy as np
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import UnsupportedParameterError

INF_NAMES = ('inf', 'infinity', 'oo', '∞')


def parseOrder(p):
    """
    Elliptic order as an int >= 2 or math.inf for a parabolic vertex
    """
    if isinstance(p, str):
        if p.strip().lower() in INF_NAMES:
            return math.inf
        try:
            p = int(p)
        except ValueError:
            raise UnsupportedParameterError("Order must be an integer >= 2 or inf, got {0}".format(p))
    if isinstance(p, float) and math.isinf(p):
        return math.inf
    if int(p) != p or p < 2:
        raise UnsupportedParameterError("Order must be an integer >= 2 or inf, got {0}".format(p))
    return int(p)


def orderTrig(p):
    """
    (sin(pi/p), cos(pi/p)) with the limits (0, 1) at p = inf
    """
    p = parseOrder(p)
    if math.isinf(p):
        return 0.0, 1.0
    return math.sin(math.pi/p), math.cos(math.pi/p)


def order_from_beta(beta, tol=1e-9):
    """
    The order p with beta = -4 sin^2(pi/p), inf for beta = 0, None when beta is not of that form
    """
    beta = complex(beta)
    if abs(beta) < tol:
        return math.inf
    if abs(beta.imag) > tol or not -4 - tol <= beta.real < 0:
        return None
    p = math.pi/math.asin(min(1.0, math.sqrt(-beta.real)/2))
    n = round(p)
    if n >= 2 and abs(-4*math.sin(math.pi/n)**2 - beta.real) < 1e-7:
        return n
    return None


def free_product_ellipse(p, q):
    """
    The ellipse outside of which <f, g> is the free product Z_p * Z_q

    Input:
        p, q: orders of f and g, integers >= 2 or inf, not both 2

    Output:
        lam: sum of focal distances on the boundary
        focus: the second focus -4 sin^2(pi/p) sin^2(pi/q), the first focus is 0
    """
    p, q = parseOrder(p), parseOrder(q)
    if p == 2 and q == 2:
        raise UnsupportedParameterError("Groups generated by two involutions are never free products Z_2 * Z_2 of this form")
    sp, cp = orderTrig(p)
    sq, cq = orderTrig(q)
    lam = 4*(cp + cq)**2 + 4*(cp*cq + 1)**2
    focus = -4*sp**2*sq**2
    return lam, complex(focus)


def is_free_product(gamma, p, q):
    """
    True where gamma lies on or outside the free-product ellipse, works on arrays
    """
    lam, focus = free_product_ellipse(p, q)
    gamma = np.asarray(gamma, dtype=complex)
    return np.abs(gamma) + np.abs(gamma - focus) >= lam


def trivial_free_bound(p, q):
    """
    4(1 + cos(pi/p) cos(pi/q))^2, the far vertex of the ellipse
    """
    _, cp = orderTrig(p)
    _, cq = orderTrig(q)
    return 4*(1 + cp*cq)**2


def isometric_circle_free_test(p, q, omega):
    """
    Klein combination test: |s_q c_p +- omega c_q s_p| + |omega| s_p <= s_q for both signs

    Input:
        p, q: finite orders
        omega: complex with |omega| < 1

    Output:
        free: True when the isometric circles certify Z_p * Z_q
    """
    sp, cp = orderTrig(p)
    sq, cq = orderTrig(q)
    omega = complex(omega)
    return all(abs(sq*cp + sign*omega*cq*sp) + abs(omega)*sp <= sq + 1e-15 for sign in (1, -1))


def gamma_from_omega(omega, p, q):
    """
    gamma = (omega - 1/omega)^2 sin^2(pi/p) sin^2(pi/q)
    """
    sp, _ = orderTrig(p)
    sq, _ = orderTrig(q)
    omega = complex(omega)
    return (omega - 1/omega)**2*sp**2*sq**2


def omega_from_gamma(gamma, p, q):
    """
    A root omega of gamma_from_omega with |omega| <= 1
    """
    sp, _ = orderTrig(p)
    sq, _ = orderTrig(q)
    u = cmath.sqrt(complex(gamma))/(sp*sq)
    # omega - 1/omega = u
    omega = (u + cmath.sqrt(u*u + 4))/2
    if abs(omega) > 1:
        omega = (u - cmath.sqrt(u*u + 4))/2
    return omega
