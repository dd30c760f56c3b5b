import logging
import sympy
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import ReduciblePolynomialError, UnsupportedParameterError
from modules.arithmetic.RootProfile import (IntPolynomial, Z, asPolynomial, root_profile, poly_discriminant,
                                              root_discriminant)
from modules.triangle.FreeProduct import order_from_beta, is_free_product

LOGGER = logging.getLogger('kleinian')

SUPPORTED_BETAS = (-3, -2, -1, 0)
INTERVAL_TOL = 1e-12

CHECK_MONIC = 1
CHECK_ONE_COMPLEX = 2
CHECK_REAL_INTERVAL = 4
CHECK_IRREDUCIBLE = 8
CHECK_ELLIPSE = 16
ALL_CHECKS = 31
CHECK_NAMES = {CHECK_MONIC: "monic", CHECK_ONE_COMPLEX: "one_complex_place",
               CHECK_REAL_INTERVAL: "real_roots_in_interval", CHECK_IRREDUCIBLE: "irreducible",
               CHECK_ELLIPSE: "inside_nonfree_ellipse"}


class CandidateGamma:
    """
    A commutator parameter gamma together with its minimal polynomial and the screening result
    """

    def __init__(self, polynomial, gamma, beta, checks, profile=None, q=2, real_case=False):
        self.polynomial = polynomial
        self.gamma = complex(gamma)
        self.beta = int(beta)
        self.q = q
        self.checks = int(checks)
        self.profile = profile
        self.real_case = real_case
        self.partner = None

    @property
    def accepted(self):
        return self.checks == ALL_CHECKS

    def passed(self):
        return [name for bit, name in CHECK_NAMES.items() if self.checks & bit]

    def reasons(self):
        """
        Names of the failed checks
        """
        return [name for bit, name in CHECK_NAMES.items() if not self.checks & bit]

    def sortKey(self):
        return (self.polynomial.degree, self.polynomial.coefficients)

    def __repr__(self):
        return "CandidateGamma({0}, gamma={1:.6g}, {2})".format(
            self.polynomial, self.gamma, "accepted" if self.accepted else "rejected")

    def toRow(self):
        return {"polynomial": str(self.polynomial), "degree": self.polynomial.degree,
                "coefficients": " ".join(str(c) for c in self.polynomial.coefficients),
                "gamma_re": self.gamma.real, "gamma_im": self.gamma.imag,
                "checks": self.checks, "accepted": self.accepted,
                "partner": "" if self.partner is None else str(self.partner)}

    def toDict(self):
        d = {"polynomial": self.polynomial, "gamma": self.gamma, "beta": self.beta, "q": self.q,
             "checks": self.checks, "passed": self.passed(), "accepted": self.accepted,
             "reasons": self.reasons(), "real_case": self.real_case}
        if self.profile is not None:
            d["profile"] = self.profile
        if self.partner is not None:
            d["partner"] = str(self.partner)
        return d


def _checkBeta(beta):
    if int(beta) != beta or int(beta) not in SUPPORTED_BETAS:
        raise UnsupportedParameterError("beta must be one of {0}, got {1}".format(SUPPORTED_BETAS, beta))
    return int(beta)


def irreducible_factors(P):
    """
    Factors of P over the integers with multiplicity, as IntPolynomial
    """
    P = asPolynomial(P)
    _, factors = sympy.factor_list(P.toSympy().as_expr(), Z)
    out = []
    for f, mult in factors:
        out += [IntPolynomial.fromSympy(f)]*int(mult)
    return out


def symmetric_polynomial(P, beta):
    """
    (-1)^d P(beta - z), whose roots are beta minus the roots of P

    The parameter symmetry gamma -> beta - conj(gamma) maps the roots of P onto
    the roots of this polynomial.
    """
    P = asPolynomial(P)
    expr = (-1)**P.degree*P.toSympy().as_expr().subs(Z, int(beta) - Z)
    return IntPolynomial.fromSympy(expr)


def arithmeticity_check(P, beta, q=2):
    """
    Screens a minimal polynomial candidate for gamma at a fixed integer beta

    With exactly one complex pair, gamma is the root with positive imaginary part and
    every real root must lie in (beta, 0). With no complex pair the real case applies:
    gamma is the largest root and all roots must lie in (beta, 0). The last check asks
    gamma to lie inside the free product ellipse of orders (p, q), where groups are
    not free.

    Input:
        P: IntPolynomial, coefficient list or polynomial string
        beta: one of -3, -2, -1, 0
        q: order of the second generator, 2 by default

    Output:
        candidate: CandidateGamma, accepted when every check passes
    """
    P = asPolynomial(P)
    beta = _checkBeta(beta)
    p = order_from_beta(beta)

    factors = irreducible_factors(P)
    if len(factors) > 1:
        raise ReduciblePolynomialError("{0} is reducible".format(P), factors)

    checks = CHECK_IRREDUCIBLE
    if P.isMonic():
        checks |= CHECK_MONIC

    profile = root_profile(P)
    realCase = profile.nComplexPairs == 0
    if profile.nComplexPairs == 1:
        gamma = profile.complex_pairs[0]
        others = profile.real_roots
    elif realCase:
        gamma = complex(profile.real_roots[-1])
        others = profile.real_roots
    else:
        gamma = max(profile.complex_pairs, key=lambda z: (z.imag, z.real))
        others = profile.real_roots
    if profile.nComplexPairs <= 1:
        checks |= CHECK_ONE_COMPLEX
    if all(beta + INTERVAL_TOL < x < -INTERVAL_TOL for x in others):
        checks |= CHECK_REAL_INTERVAL

    if not bool(is_free_product(gamma, p, q)):
        checks |= CHECK_ELLIPSE

    candidate = CandidateGamma(P, gamma, beta, checks, profile, q, realCase)
    LOGGER.debug("{0}".format(candidate))
    return candidate


def discriminant_chain(candidate):
    """
    |disc P| and the same quantity rebuilt from the certified roots
    """
    exact = abs(poly_discriminant(candidate.polynomial))
    return exact, root_discriminant(candidate.profile)

