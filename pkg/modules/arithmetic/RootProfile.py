import logging
import math
from fractions import Fraction
import numpy as np
from numpy.polynomial import Polynomial, legendre
from scipy.optimize import minimize
import sympy
from sympy.parsing.sympy_parser import (parse_expr, standard_transformations,
                                        implicit_multiplication, convert_xor)
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import RootCertificationError, UnsupportedParameterError

LOGGER = logging.getLogger('kleinian')

Z = sympy.Symbol('z')
TRANSFORMS = standard_transformations + (implicit_multiplication, convert_xor)
REAL_TOL = 1e-9
RESIDUAL_TOL = 1e-9
NEWTON_STEPS = 3


class IntPolynomial:
    """
    Integer polynomial in z, coefficients stored from the leading term down

    Example: IntPolynomial([1, 6, 12, 9, 1]) is z^4+6z^3+12z^2+9z+1
    """

    def __init__(self, coefficients):
        coef = [int(c) for c in coefficients]
        while len(coef) > 1 and coef[0] == 0:
            coef = coef[1:]
        if len(coef) < 2:
            raise UnsupportedParameterError("Polynomial must have degree >= 1, got {0}".format(coefficients))
        self.coefficients = tuple(coef)

    @classmethod
    def parse(cls, text):
        """
        Reads "z^4+6z^3+12*z^2+9z+1" or any sympy expression in z
        """
        try:
            expr = parse_expr(str(text), local_dict={'z': Z}, transformations=TRANSFORMS)
        except Exception as e:
            raise UnsupportedParameterError("Cannot parse polynomial {0}: {1}".format(text, e))
        return cls.fromSympy(expr)

    @classmethod
    def fromSympy(cls, expr):
        try:
            poly = sympy.Poly(sympy.expand(expr), Z)
        except sympy.PolynomialError as e:
            raise UnsupportedParameterError("Not a polynomial in z: {0}".format(e))
        coef = poly.all_coeffs()
        if any(not c.is_integer for c in coef):
            raise UnsupportedParameterError("Polynomial {0} has non-integer coefficients".format(expr))
        return cls(coef)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    @property
    def leading(self):
        return self.coefficients[0]

    def isMonic(self):
        return self.leading == 1

    def toSympy(self):
        return sympy.Poly(list(self.coefficients), Z)

    def toNumpy(self):
        # numpy Polynomial wants the constant term first
        return Polynomial(np.array(self.coefficients[::-1], dtype=float))

    def __call__(self, z):
        return self.toNumpy()(z)

    def __eq__(self, other):
        return isinstance(other, IntPolynomial) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __lt__(self, other):
        return (self.degree, self.coefficients) < (other.degree, other.coefficients)

    def __str__(self):
        return str(self.toSympy().as_expr()).replace('**', '^').replace(' ', '')

    def __repr__(self):
        return "IntPolynomial({0})".format(self)

    def toDict(self):
        return {"polynomial": str(self), "coefficients": list(self.coefficients), "degree": self.degree}


def asPolynomial(P):
    if isinstance(P, IntPolynomial):
        return P
    if isinstance(P, (list, tuple, np.ndarray)):
        return IntPolynomial(P)
    return IntPolynomial.parse(P)


class RootProfile:
    """
    Certified split of the roots of an integer polynomial into real roots and conjugate pairs

    complex_pairs holds the member of each pair with positive imaginary part.
    """

    def __init__(self, polynomial, real_roots, complex_pairs, min_separation, max_residual, newton_radius):
        self.polynomial = polynomial
        self.real_roots = sorted(float(x) for x in real_roots)
        self.complex_pairs = sorted((complex(z) for z in complex_pairs), key=lambda z: (z.real, z.imag))
        self.min_separation = float(min_separation)
        self.max_residual = float(max_residual)
        self.newton_radius = float(newton_radius)
        if len(self.real_roots) + 2*len(self.complex_pairs) != polynomial.degree:
            raise RootCertificationError("Root count does not match degree of {0}".format(polynomial))

    @property
    def nComplexPairs(self):
        return len(self.complex_pairs)

    def allRoots(self):
        roots = [complex(x) for x in self.real_roots]
        for z in self.complex_pairs:
            roots += [z, z.conjugate()]
        return roots

    def toDict(self):
        return {"polynomial": str(self.polynomial), "real_roots": self.real_roots,
                "complex_pairs": self.complex_pairs,
                "certificate": {"min_separation": self.min_separation,
                                "max_residual": self.max_residual,
                                "newton_radius": self.newton_radius}}


def _polish(p, dp, roots):
    for _ in range(NEWTON_STEPS):
        d = dp(roots)
        step = np.where(np.abs(d) > 0, p(roots)/np.where(np.abs(d) > 0, d, 1), 0)
        roots = roots - step
    return roots


def root_profile(P):
    """
    Roots of P from the companion matrix, Newton polished and certified

    The number of real roots comes from sympy's exact count. Each root carries a
    Newton inclusion radius |P/P'|; the profile is rejected when two of these disks
    could overlap or when a residual is too large.

    Input:
        P: IntPolynomial, coefficient list or polynomial string

    Output:
        profile: RootProfile
    """
    P = asPolynomial(P)
    sp = P.toSympy()
    if sympy.gcd(sp, sp.diff(Z)).degree() > 0:
        raise RootCertificationError("{0} has repeated roots".format(P))

    p = P.toNumpy()
    dp = p.deriv()
    roots = _polish(p, dp, np.roots(np.array(P.coefficients, dtype=float)).astype(complex))
    nReal = int(sp.count_roots())

    order = np.argsort(np.abs(roots.imag), kind='stable')
    real = roots[order[:nReal]].real
    rest = roots[order[nReal:]]
    upper = rest[rest.imag > 0]
    if 2*len(upper) != len(rest):
        raise RootCertificationError("Cannot pair the complex roots of {0}".format(P))

    allRoots = np.concatenate([real.astype(complex), upper, upper.conj()])
    scale = max(abs(c) for c in P.coefficients)
    residuals = np.abs(p(allRoots))
    limits = RESIDUAL_TOL*scale*np.maximum(1, np.abs(allRoots))**P.degree
    if np.any(residuals > limits):
        raise RootCertificationError("Root residual {0:.3g} too large for {1}".format(residuals.max(), P))

    radius = float(np.max(P.degree*residuals/np.maximum(np.abs(dp(allRoots)), 1e-300)))
    if len(allRoots) > 1:
        diff = np.abs(allRoots[:, None] - allRoots[None, :])
        sep = float(diff[~np.eye(len(allRoots), dtype=bool)].min())
    else:
        sep = math.inf
    if 2*radius >= sep:
        raise RootCertificationError("Inclusion disks of {0} overlap (radius {1:.3g}, separation {2:.3g})".format(P, radius, sep))
    return RootProfile(P, real, upper, sep, float(residuals.max()), radius)


def poly_discriminant(P):
    """
    Exact integer discriminant of P
    """
    P = asPolynomial(P)
    return int(sympy.discriminant(P.toSympy().as_expr(), Z))


def square_cofactor(disc, fundamental):
    """
    The integer f with disc = f^2 * fundamental, None when there is none
    """
    disc, fundamental = int(disc), int(fundamental)
    if fundamental == 0 or disc % fundamental != 0:
        return None
    q = disc//fundamental
    if q < 0:
        return None
    f = math.isqrt(q)
    return f if f*f == q else None


def root_discriminant(profile):
    """
    prod over i < j of |r_i - r_j|^2 computed from the certified roots
    """
    roots = np.array(profile.allRoots())
    total = 1.0
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            total *= abs(roots[i] - roots[j])**2
    return total


class SchurBound:
    """
    M_r, the largest value of prod over i < j of (x_i - x_j)^2 for r points of [-1, 1]
    """

    def __init__(self, r, value):
        self.r = int(r)
        self.value = Fraction(value)

    def root(self):
        """
        M_r^(1/(r(r-1))), the geometric mean of the pairwise distances
        """
        if self.r < 2:
            return float(self.value)
        # M_r underflows a float for r above 30
        logM = math.log(self.value.numerator) - math.log(self.value.denominator)
        return math.exp(logM/(self.r*(self.r - 1)))

    def __repr__(self):
        return "SchurBound(r={0}, M={1})".format(self.r, self.value)

    def toDict(self):
        return {"r": self.r, "M": str(self.value), "M_float": float(self.value), "normalized": self.root()}


def _selfPowers(start, stop, step=1):
    out = 1
    for k in range(start, stop + 1, step):
        out *= k**k
    return out


def schur_bound(r):
    """
    M_r = (2^2 3^3 ... r^r)(2^2 3^3 ... (r-2)^(r-2)) / (3^3 5^5 ... (2r-3)^(2r-3)), with M_1 = 1

    Input:
        r: number of points, r >= 1

    Output:
        bound: SchurBound holding the exact rational
    """
    r = int(r)
    if r < 1:
        raise UnsupportedParameterError("Schur bound needs r >= 1, got {0}".format(r))
    if r == 1:
        return SchurBound(1, 1)
    num = _selfPowers(2, r)*_selfPowers(2, r - 2)
    den = _selfPowers(3, 2*r - 3, 2)
    return SchurBound(r, Fraction(num, den))


def fekete_points(r):
    """
    The maximizing configuration: -1, 1 and the zeros of the derivative of the Legendre polynomial P_(r-1)
    """
    if r < 2:
        return np.zeros(max(r, 0))
    inner = legendre.Legendre.basis(r - 1).deriv().roots() if r > 2 else np.array([])
    return np.sort(np.concatenate([[-1.0], np.real(inner), [1.0]]))


def _logProduct(x):
    d = x[:, None] - x[None, :]
    iu = np.triu_indices(len(x), 1)
    return 2*np.sum(np.log(np.abs(d[iu])))


def _gapPoints(u):
    # ordered points -1 = x_0 < ... < x_(r-1) = 1 from the softmax of the gap logits
    e = np.exp(u - np.max(u))
    s = e/np.sum(e)
    x = np.concatenate([[-1.0], -1 + 2*np.cumsum(s)[:-1], [1.0]])
    return x, s


def schur_bound_oracle(r, maxiter=2000, starts=4, seed=0):
    """
    Numeric maximum of prod (x_i - x_j)^2 over [-1, 1] by a multi-start BFGS search

    The points are written through their consecutive gaps, so they stay ordered
    with the endpoints pinned at -1 and 1. Starts: the Chebyshev extremal nodes,
    equal gaps and `starts` random perturbations; the best local maximum wins.
    """
    r = int(r)
    if r < 2:
        return 1.0
    if r == 2:
        return 4.0
    cheb = -np.cos(np.pi*np.arange(r)/(r - 1))
    rng = np.random.default_rng(seed)
    seeds = [np.log(np.diff(cheb)), np.zeros(r - 1)] + [rng.normal(scale=0.5, size=r - 1) for _ in range(starts)]

    def negLog(u):
        x, s = _gapPoints(u)
        d = x[:, None] - x[None, :]
        np.fill_diagonal(d, np.inf)
        gx = -2*np.sum(1/d, axis=1)
        h = np.append(2*np.cumsum(gx[1:-1][::-1])[::-1], 0.0)
        return -_logProduct(x), s*(h - np.dot(s, h))

    best = None
    for u0 in seeds:
        res = minimize(negLog, u0, jac=True, method="BFGS", options={"maxiter": maxiter, "gtol": 1e-10})
        if not res.success:
            LOGGER.debug("Schur oracle start for r={0} stopped early: {1}".format(r, res.message))
        if best is None or res.fun < best.fun:
            best = res
    return float(np.exp(-best.fun))
