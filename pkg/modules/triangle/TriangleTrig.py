import math
from fractions import Fraction
import numpy as np
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import TriangleError, UnsupportedParameterError
from modules.triangle.FreeProduct import parseOrder, orderTrig

ANGLE_TOL = 1e-12
MAX_DENOMINATOR = 1000


class EllipticOrders:
    """
    Orders (p, q, r) of the three elliptic generators, math.inf for a parabolic limit
    """

    def __init__(self, p, q, r):
        self.p, self.q, self.r = parseOrder(p), parseOrder(q), parseOrder(r)

    def astuple(self):
        return (self.p, self.q, self.r)

    def isFinite(self):
        return all(not math.isinf(n) for n in self.astuple())

    def __iter__(self):
        return iter(self.astuple())

    def __repr__(self):
        return "EllipticOrders{0}".format(self.astuple())

    def toDict(self):
        return {"orders": [n if not math.isinf(n) else "inf" for n in self.astuple()]}


class TriangleAngles:
    """
    Angles of a hyperbolic triangle formed by three coplanar axes

    alpha is the angle where axes 1 and 2 meet, beta_angle where axes 1 and 3 meet
    and gamma_angle where axes 2 and 3 meet. A zero angle is an ideal vertex.
    """

    def __init__(self, alpha, beta_angle, gamma_angle):
        angles = [float(alpha), float(beta_angle), float(gamma_angle)]
        if any(a < -ANGLE_TOL or a >= math.pi for a in angles):
            raise TriangleError("Triangle angles must lie in [0, pi), got {0}".format(angles))
        if sum(angles) >= math.pi - ANGLE_TOL:
            raise TriangleError("Angle sum {0:.6g} is not hyperbolic".format(sum(angles)))
        self.alpha, self.beta_angle, self.gamma_angle = [max(0.0, a) for a in angles]

    @classmethod
    def fromPiFractions(cls, a, b, c):
        return cls(a*math.pi, b*math.pi, c*math.pi)

    def astuple(self):
        return (self.alpha, self.beta_angle, self.gamma_angle)

    def pairAngles(self):
        """
        Angles keyed by the unordered pair of axes meeting there
        """
        return {(0, 1): self.alpha, (0, 2): self.beta_angle, (1, 2): self.gamma_angle}

    def __repr__(self):
        return "TriangleAngles({0:.9g}, {1:.9g}, {2:.9g})".format(*self.astuple())

    def toDict(self):
        return {"alpha": self.alpha, "beta": self.beta_angle, "gamma": self.gamma_angle}


def gram_matrix(angles):
    """
    Gram matrix of the unit normals to the three axes, G_ij = -cos(angle between axes i and j)
    """
    G = np.eye(3)
    for (i, j), a in angles.pairAngles().items():
        G[i, j] = G[j, i] = -math.cos(a)
    return G


def hyperboloid_normals(angles):
    """
    Spacelike unit normals n_i of the three axes in the hyperboloid model

    Input:
        angles: TriangleAngles

    Output:
        N: 3x3 array whose columns are the normals, with N^T J N = G and J = diag(1, 1, -1)
    """
    G = gram_matrix(angles)
    e, V = np.linalg.eigh(G)
    if np.sum(e < 0) != 1:
        raise TriangleError("Gram matrix of {0} does not have hyperbolic signature".format(angles))
    idx = np.argsort(-e)
    return np.sqrt(np.abs(e[idx]))[:, None]*V[:, idx].T


def minkowski(x, y):
    return x[0]*y[0] + x[1]*y[1] - x[2]*y[2]


def triangle_edge_lengths(angles):
    """
    Lengths of the edges lying on axes 1, 2 and 3 by the hyperbolic law of cosines

    Input:
        angles: TriangleAngles

    Output:
        lengths: list of three reals, math.inf for an edge ending in an ideal vertex
    """
    pa = angles.pairAngles()
    lengths = []
    for i in range(3):
        j, k = [n for n in range(3) if n != i]
        a_ij = pa[tuple(sorted((i, j)))]
        a_ik = pa[tuple(sorted((i, k)))]
        a_jk = pa[(j, k)]
        if a_ij < ANGLE_TOL or a_ik < ANGLE_TOL:
            lengths.append(math.inf)
            continue
        c = (math.cos(a_ij)*math.cos(a_ik) + math.cos(a_jk))/(math.sin(a_ij)*math.sin(a_ik))
        lengths.append(math.acosh(max(1.0, c)))
    return lengths


def inscribed_radius(angles):
    """
    Radius r of the inscribed disk

    tanh^2 r = (cos^2 a + cos^2 b + cos^2 c + 2 cos a cos b cos c - 1) / (2 (1 + cos a)(1 + cos b)(1 + cos c))
    """
    ca, cb, cc = [math.cos(a) for a in angles.astuple()]
    num = ca*ca + cb*cb + cc*cc + 2*ca*cb*cc - 1
    if num <= ANGLE_TOL:
        raise TriangleError("Triangle {0} is not hyperbolic, inscribed radius undefined".format(angles))
    den = 2*(1 + ca)*(1 + cb)*(1 + cc)
    return math.atanh(math.sqrt(num/den))


def _piFraction(a):
    ratio = a/math.pi
    frac = Fraction(ratio).limit_denominator(MAX_DENOMINATOR)
    if abs(float(frac) - ratio) > 1e-9:
        return None
    return frac


def _isUnit(frac):
    # 1/n with n >= 2, or 0 for an ideal vertex
    return frac == 0 or (frac.numerator == 1 and frac.denominator >= 2)


def _matchFamily(f1, f2, f3):
    if all(_isUnit(f) for f in (f1, f2, f3)) and f1 + f2 + f3 < 1:
        return True
    if f1 == 0:
        return False
    # 2pi/l, pi/m, pi/m with 1/l + 1/m < 1/2
    l = 2/f1
    if l.denominator == 1 and f2 == f3 and f2 != 0 and f2.numerator == 1 and 1/l + f2 < Fraction(1, 2):
        return True
    # 2pi/l, pi/2, pi/l with l >= 7
    if l.denominator == 1 and l >= 7 and f2 == Fraction(1, 2) and f3 == 1/l:
        return True
    # 3pi/l, pi/3, pi/l with l >= 7
    l = 3/f1
    if l.denominator == 1 and l >= 7 and f2 == Fraction(1, 3) and f3 == 1/l:
        return True
    # 4pi/l, pi/l, pi/l with l >= 7
    l = 4/f1
    if l.denominator == 1 and l >= 7 and f2 == f3 == 1/l:
        return True
    return (f1, f2, f3) == (Fraction(2, 7), Fraction(1, 3), Fraction(1, 7))


def admissible_222_angles(angles):
    """
    True when the angles of intersection belong to one of the families a group
    generated by three coplanar half turns can realize
    """
    if not isinstance(angles, TriangleAngles):
        try:
            angles = TriangleAngles(*angles)
        except TriangleError:
            return False
    fracs = [_piFraction(a) for a in angles.astuple()]
    if any(f is None for f in fracs):
        return False
    f = fracs
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    return any(_matchFamily(f[i], f[j], f[k]) for i, j, k in perms)


def delta_infinity(p, q):
    """
    arccosh((cos(pi/p) cos(pi/q) + 1) / (sin(pi/p) sin(pi/q))), the axis distance of the (p, q, inf) triangle group
    """
    p, q = parseOrder(p), parseOrder(q)
    if p == 2 and q == 2:
        raise UnsupportedParameterError("delta_infinity is undefined for two involutions")
    if math.isinf(p) or math.isinf(q):
        raise UnsupportedParameterError("delta_infinity needs finite orders, got ({0}, {1})".format(p, q))
    sp, cp = orderTrig(p)
    sq, cq = orderTrig(q)
    return math.acosh((cp*cq + 1)/(sp*sq))


def delta_zero_high_order(p, q):
    """
    Lower bound arccosh(1/(2 sin(pi/p) sin(pi/q))) for the distance between axes of orders p, q >= 7
    """
    p, q = parseOrder(p), parseOrder(q)
    if p < 7 or q < 7:
        raise UnsupportedParameterError("delta_zero_high_order needs both orders >= 7, got ({0}, {1})".format(p, q))
    sp, _ = orderTrig(p)
    sq, _ = orderTrig(q)
    if sp == 0 or sq == 0:
        raise UnsupportedParameterError("delta_zero_high_order needs finite orders")
    return math.acosh(1/(2*sp*sq))


def elliptic_displacement(n, d):
    """
    Distance a point at distance d from the axis is moved by a primitive elliptic of order n
    """
    n = parseOrder(n)
    if d < 0:
        raise TriangleError("Distance to the axis must be non-negative, got {0}".format(d))
    s, _ = orderTrig(n)
    return 2*math.asinh(s*math.sinh(d))


def orbifold_area(genus, cusps, cone_orders):
    """
    Hyperbolic area 2 pi (2g - 2 + N + sum(1 - 1/m_j)) of an orbifold

    Input:
        genus: genus g >= 0
        cusps: number of cusps N >= 0
        cone_orders: orders m_j >= 2 of the cone points

    Output:
        area: positive real
    """
    if genus < 0 or cusps < 0:
        raise TriangleError("Genus and cusp count must be non-negative")
    chi = Fraction(2*genus - 2 + cusps)
    for m in cone_orders:
        m = parseOrder(m)
        chi += 1 if math.isinf(m) else 1 - Fraction(1, m)
    if chi <= 0:
        raise TriangleError("Signature ({0}, {1}, {2}) is not hyperbolic".format(genus, cusps, list(cone_orders)))
    return 2*math.pi*float(chi)
