import cmath
import math
from fractions import Fraction
import numpy as np
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import DegenerateParameterError

TOL = 1e-9
ORDER_TOL = 1e-7
MAX_ORDER = 2000
INF = complex(math.inf, 0.0)


def isInfinite(z):
    return cmath.isinf(complex(z))


class MoebiusMap:
    """
    An element of PSL(2,C) stored as a normalized 2x2 complex matrix

    The matrix is rescaled on construction so that ad - bc = 1. M and -M are
    treated as the same transformation by __eq__.
    """

    def __init__(self, a, b, c, d, normalize=True):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        if normalize:
            det = a*d - b*c
            if abs(det) < 1e-300:
                raise DegenerateParameterError("Singular matrix cannot define a Moebius map")
            s = cmath.sqrt(det)
            a, b, c, d = a/s, b/s, c/s, d/s
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1, normalize=False)

    @classmethod
    def fromMatrix(cls, m):
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def rotation(cls, n):
        """
        Primitive elliptic of order n fixing 0 and infinity, z -> exp(2 pi i/n) z
        """
        u = cmath.exp(1j*math.pi/n)
        return cls(u, 0, 0, 1/u, normalize=False)

    @classmethod
    def dilation(cls, k):
        """
        z -> k z
        """
        s = cmath.sqrt(complex(k))
        return cls(s, 0, 0, 1/s, normalize=False)

    @classmethod
    def translation(cls, t=1):
        return cls(1, t, 0, 1, normalize=False)

    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def trace(self):
        return self.a + self.d

    def det(self):
        return self.a*self.d - self.b*self.c

    def inverse(self):
        return MoebiusMap(self.d, -self.b, -self.c, self.a, normalize=False)

    def compose(self, other):
        """
        Returns self o other, i.e. the matrix product self * other renormalized
        """
        a = self.a*other.a + self.b*other.c
        b = self.a*other.b + self.b*other.d
        c = self.c*other.a + self.d*other.c
        d = self.c*other.b + self.d*other.d
        return MoebiusMap(a, b, c, d)

    def __mul__(self, other):
        return self.compose(other)

    def power(self, n):
        result = MoebiusMap.identity()
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(int(n))):
            result = result.compose(base)
        return result

    def apply(self, z):
        """
        Evaluates the map at a point of the Riemann sphere, infinity given as complex('inf')
        """
        if isInfinite(z):
            if abs(self.c) < TOL:
                return INF
            return self.a/self.c
        z = complex(z)
        den = self.c*z + self.d
        if abs(den) < 1e-300:
            return INF
        return (self.a*z + self.b)/den

    def isIdentity(self, tol=TOL):
        m = self.matrix()
        eye = np.eye(2)
        return bool(np.allclose(m, eye, atol=tol, rtol=0) or np.allclose(m, -eye, atol=tol, rtol=0))

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        m1 = self.matrix()
        m2 = other.matrix()
        return bool(np.allclose(m1, m2, atol=TOL, rtol=0) or np.allclose(m1, -m2, atol=TOL, rtol=0))

    __hash__ = None

    def __repr__(self):
        return "MoebiusMap(a={0}, b={1}, c={2}, d={3})".format(self.a, self.b, self.c, self.d)

    def toDict(self):
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


class IsometryClass:
    """
    Conjugacy type of an isometry: identity, elliptic, parabolic or loxodromic

    Elliptic classes carry the rotation angle in (0, pi] and, when that angle is
    2 pi k/n with n <= 2000, the detected order n.
    """

    def __init__(self, tag, rotation=None, order=None):
        self.tag = tag
        self.rotation = rotation
        self.order = order

    def __repr__(self):
        return "IsometryClass({0}, rotation={1}, order={2})".format(self.tag, self.rotation, self.order)

    def toDict(self):
        d = {"tag": self.tag}
        if self.tag == "elliptic":
            d["rotation"] = self.rotation
            d["order"] = self.order
            d["irrational_rotation"] = self.order is None
        return d


class ComplexDistance:
    """
    Complex distance delta + i theta between two axes, delta >= 0 and theta in [0, pi)
    """

    def __init__(self, delta, theta, coaxial=False):
        self.delta = float(delta)
        self.theta = float(theta)
        self.coaxial = coaxial

    def asComplex(self):
        return complex(self.delta, self.theta)

    def __repr__(self):
        return "ComplexDistance(delta={0}, theta={1}, coaxial={2})".format(self.delta, self.theta, self.coaxial)

    def toDict(self):
        return {"delta": self.delta, "theta": self.theta, "coaxial": self.coaxial}


def beta_of_order(p):
    """
    beta of a primitive elliptic of order p, -4 sin^2(pi/p). Order infinity is parabolic and gives 0
    """
    if p is None or (isinstance(p, float) and math.isinf(p)):
        return 0.0
    return -4.0*math.sin(math.pi/p)**2


def compose(f, g):
    return f.compose(g)


def beta(f):
    """
    beta(f) = tr^2(f) - 4, independent of the sign of the matrix
    """
    return f.trace()**2 - 4


def gamma(f, g):
    """
    Commutator parameter gamma(f,g) = tr[f,g] - 2

    Input:
        f, g: MoebiusMap

    Output:
        gamma: complex
    """
    comm = f.compose(g).compose(f.inverse()).compose(g.inverse())
    return comm.trace() - 2


def classify(f):
    """
    Classifies f by beta(f) using the tolerance bands of the library

    Input:
        f: MoebiusMap

    Output:
        cls: IsometryClass
    """
    if f.isIdentity():
        return IsometryClass("identity")
    b = beta(f)
    if abs(b) < TOL:
        return IsometryClass("parabolic")
    if abs(b.imag) < TOL and -4 - TOL <= b.real <= -1e-12:
        s = math.sqrt(max(0.0, -b.real))
        c = math.sqrt(max(0.0, b.real + 4))
        rotation = 2*math.atan2(s, c)
        ratio = rotation/(2*math.pi)
        frac = Fraction(ratio).limit_denominator(MAX_ORDER)
        order = frac.denominator if abs(float(frac) - ratio) < ORDER_TOL else None
        return IsometryClass("elliptic", rotation, order)
    return IsometryClass("loxodromic")


def fixed_points(f):
    """
    Fixed points of f on the Riemann sphere, roots of c z^2 + (d-a) z - b

    Input:
        f: MoebiusMap, not the identity

    Output:
        points: list with one (parabolic) or two points, infinity as complex('inf')
    """
    if f.isIdentity():
        raise DegenerateParameterError("The identity fixes every point")
    a, b, c, d = f.a, f.b, f.c, f.d
    if abs(c) < TOL:
        points = [INF]
        if abs(a - d) > TOL:
            points.append(b/(d - a))
        return points
    root = cmath.sqrt(beta(f))
    if abs(root) < math.sqrt(TOL):
        return [(a - d)/(2*c)]
    return [(a - d + root)/(2*c), (a - d - root)/(2*c)]


def holonomy_from_beta(b):
    """
    Translation length and holonomy (tau, eta) with beta = 4 sinh^2((tau + i eta)/2), tau >= 0
    """
    b = complex(b)
    if abs(b) < TOL:
        raise DegenerateParameterError("Parabolic or identity element has no translation length")
    w = 2*cmath.asinh(cmath.sqrt(b)/2)
    if w.real < 0 or (w.real == 0 and w.imag < 0):
        w = -w
    return w.real, w.imag


def translation_holonomy(f):
    return holonomy_from_beta(beta(f))


def beta_from_holonomy(tau, eta):
    return 4*cmath.sinh(complex(tau, eta)/2)**2


def axis_complex_distance(f, g):
    """
    Complex distance between the axes of f and g, from cosh(2D) = 1 + 8 gamma/(beta_f beta_g)

    Input:
        f, g: non-parabolic MoebiusMap

    Output:
        dist: ComplexDistance, coaxial flag set when gamma vanishes
    """
    bf = beta(f)
    bg = beta(g)
    if abs(bf) < TOL or abs(bg) < TOL:
        raise DegenerateParameterError("Axis distance undefined for parabolic or identity elements")
    gam = gamma(f, g)
    if abs(gam) < TOL:
        return ComplexDistance(0.0, 0.0, coaxial=True)
    u = cmath.acosh(1 + 8*gam/(bf*bg))/2
    theta = u.imag % math.pi
    if theta > math.pi - 1e-12:
        theta = 0.0
    return ComplexDistance(abs(u.real), theta)


def gamma_from_geometry(beta_f, beta_g, dist):
    """
    gamma = beta_f beta_g / 4 * sinh^2(delta + i theta)
    """
    if isinstance(dist, ComplexDistance):
        dist = dist.asComplex()
    return complex(beta_f)*complex(beta_g)/4*cmath.sinh(complex(dist))**2


def mapping_triple(src, dst):
    """
    The unique Moebius map sending the three points src to the three points dst

    Input:
        src, dst: sequences of three distinct points, infinity allowed

    Output:
        m: MoebiusMap
    """
    return _toStandard(dst).inverse().compose(_toStandard(src))


def _toStandard(pts):
    # sends (z1, z2, z3) to (0, inf, 1)
    z1, z2, z3 = [complex(z) for z in pts]
    if isInfinite(z1):
        return MoebiusMap(0, z3 - z2, 1, -z2)
    if isInfinite(z2):
        return MoebiusMap(1, -z1, 0, z3 - z1)
    if isInfinite(z3):
        return MoebiusMap(1, -z1, 1, -z2)
    return MoebiusMap(z3 - z2, -z1*(z3 - z2), z3 - z1, -z2*(z3 - z1))
