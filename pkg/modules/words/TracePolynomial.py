import functools
import logging
import numpy as np
from numpy.polynomial import Polynomial
import sympy
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import PolynomialRecoveryError, UnsupportedParameterError
from modules.moebius.ParameterSpace import TraceParams
from modules.words.GroupWord import asWord, evaluate_gamma, GroupWord

LOGGER = logging.getLogger('kleinian')

Z, BETA = sympy.symbols('z beta')

ROUND_TOL = 1e-6
ROUND_REL = 1e-12
ROUND_CAP = 0.25
VERIFY_TOL = 1e-7
VERIFY_POINTS = 64
GRID_PAD = 2
Z_RADIUS = 1.0
BETA_RADIUS = 1.0

CACHE_SIZE = 512


class TracePolynomial:
    """
    Integer bivariate polynomial p(z, beta) stored as {(z_degree, beta_degree): coefficient}
    """

    def __init__(self, coefficients, word=None):
        self.coefficients = {(int(i), int(j)): int(c) for (i, j), c in coefficients.items() if int(c) != 0}
        self.word = word

    @property
    def zDegree(self):
        return max((i for i, _ in self.coefficients), default=0)

    @property
    def betaDegree(self):
        return max((j for _, j in self.coefficients), default=0)

    def leadingTerm(self):
        """
        Leading coefficient in z as a dict {beta_degree: coeff}
        """
        n = self.zDegree
        return {j: c for (i, j), c in self.coefficients.items() if i == n}

    def isMonic(self):
        lead = self.leadingTerm()
        return list(lead.keys()) == [0] and abs(lead[0]) == 1

    def evaluate(self, z, beta):
        """
        Vectorized evaluation, z and beta broadcast together
        """
        z = np.asarray(z, dtype=complex)
        beta = np.asarray(beta, dtype=complex)
        out = np.zeros(np.broadcast(z, beta).shape, dtype=complex)
        for (i, j), c in self.coefficients.items():
            out = out + c*z**i*beta**j
        return out

    def evaluate_abs(self, z, beta):
        """
        Sum of |c| |z|^i |beta|^j, the scale used for relative tolerances
        """
        z = np.abs(np.asarray(z, dtype=complex))
        beta = np.abs(np.asarray(beta, dtype=complex))
        out = np.zeros(np.broadcast(z, beta).shape, dtype=float)
        for (i, j), c in self.coefficients.items():
            out = out + abs(c)*z**i*beta**j
        return out

    def at_beta(self, beta):
        """
        numpy Polynomial in z with beta fixed
        """
        coef = np.zeros(self.zDegree + 1, dtype=complex)
        for (i, j), c in self.coefficients.items():
            coef[i] += c*complex(beta)**j
        if np.all(np.abs(coef.imag) < 1e-12):
            coef = coef.real
        return Polynomial(coef)

    def restrict(self, beta):
        """
        Integer polynomial in z alone obtained by fixing an integer beta
        """
        coef = {}
        for (i, j), c in self.coefficients.items():
            coef[(i, 0)] = coef.get((i, 0), 0) + c*int(beta)**j
        return TracePolynomial(coef, word=self.word)

    def to_sympy(self):
        return sympy.expand(sum(c*Z**i*BETA**j for (i, j), c in self.coefficients.items()))

    @classmethod
    def from_sympy(cls, expr, word=None):
        poly = sympy.Poly(sympy.expand(expr), Z, BETA)
        return cls({k: int(v) for k, v in poly.as_dict().items()}, word=word)

    def compose(self, other):
        """
        p(q(z, beta), beta)
        """
        expr = self.to_sympy().subs(Z, other.to_sympy())
        return TracePolynomial.from_sympy(expr)

    def __eq__(self, other):
        if not isinstance(other, TracePolynomial):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(tuple(sorted(self.coefficients.items())))

    def __str__(self):
        return str(sympy.factor(self.to_sympy()))

    def __repr__(self):
        return "TracePolynomial({0})".format(self.to_sympy())

    def to_json(self):
        return [{"zdeg": i, "bdeg": j, "coeff": c} for (i, j), c in sorted(self.coefficients.items())]

    def toDict(self):
        lead = self.leadingTerm()
        return {"word": str(self.word) if self.word is not None else None,
                "expanded": str(self.to_sympy()),
                "factored": str(self),
                "z_degree": self.zDegree,
                "beta_degree": self.betaDegree,
                "leading_term": [{"bdeg": j, "coeff": c} for j, c in sorted(lead.items())],
                "coefficients": self.to_json()}


def degree_bounds(w):
    """
    Default interpolation degrees: z up to (number of b syllables)+1 and beta up to
    (total b weight)+(number of b syllables)
    """
    bs = asWord(w).normalized().bExponents()
    return len(bs) + 1, sum(abs(e) for e in bs) + len(bs)


def trace_polynomial(w, degree_hint=None, seed=0):
    """
    Recovers p_w(z, beta) = gamma(f, w(g, f)) at beta' = -4 by interpolation

    The word is normalized so its outer letter is a. p_w is sampled on a product
    grid of roots of unity on |z| = 1 and |beta| = 1, its coefficients are
    read off a 2D FFT, rounded to integers and re-checked at random points.

    Input:
        w: good GroupWord (strict or under the involution)
        degree_hint: Optional (z_degree, beta_degree) overriding the default bounds
        seed: Seed of the verification sample

    Output:
        poly: TracePolynomial
    """
    word = asWord(w).normalized()
    if not word.isGoodUnderInvolution():
        raise UnsupportedParameterError("Word {0} is not a good word".format(word))

    if degree_hint is None:
        dz, db = degree_bounds(word)
        nz, nb = dz + 1 + GRID_PAD, db + 1 + GRID_PAD
    else:
        dz, db = degree_hint
        nz, nb = dz + 1, db + 1

    return _compile(word, nz, nb, seed)


@functools.lru_cache(maxsize=CACHE_SIZE)
def _compile(word, nz, nb, seed):
    zs = Z_RADIUS*np.exp(2j*np.pi*np.arange(nz)/nz)
    bs = BETA_RADIUS*np.exp(2j*np.pi*np.arange(nb)/nb)
    values = np.empty((nz, nb), dtype=complex)
    for k, z in enumerate(zs):
        for l, b in enumerate(bs):
            values[k, l] = evaluate_gamma(word, TraceParams(z, b, -4))

    raw = np.fft.fft2(values)/(nz*nb)
    raw = raw/np.outer(Z_RADIUS**np.arange(nz), BETA_RADIUS**np.arange(nb))
    rounded = np.round(raw.real)
    residual = float(np.max(np.abs(raw - rounded)))
    # roundoff grows with the size of the samples
    tol = min(max(ROUND_TOL, ROUND_REL*float(np.max(np.abs(values)))), ROUND_CAP)
    if residual >= tol:
        raise PolynomialRecoveryError(
            "Interpolation of {0} is inconsistent (rounding residual {1:.3g}); degree bound too small?".format(word, residual))

    coeffs = {(i, j): int(rounded[i, j]) for i in range(nz) for j in range(nb) if rounded[i, j] != 0}
    poly = TracePolynomial(coeffs, word=word)
    _verify(poly, word, seed)
    if any(i == 0 for i, _ in poly.coefficients):
        raise PolynomialRecoveryError("Recovered polynomial of {0} does not vanish at z = 0".format(word))
    LOGGER.info("Compiled {0}: {1}".format(word, poly))
    return poly


def _verify(poly, word, seed):
    rng = np.random.default_rng(seed)
    checked = 0
    while checked < VERIFY_POINTS:
        z = complex(*rng.uniform(-2, 2, 2))
        b = complex(*rng.uniform(-2, 2, 2))
        if abs(z) > 2 or abs(b) > 2 or abs(z) < 0.2 or abs(z - b) < 0.2:
            continue
        expected = evaluate_gamma(word, TraceParams(z, b, -4))
        got = complex(poly.evaluate(z, b))
        if abs(got - expected) > VERIFY_TOL*(1 + float(poly.evaluate_abs(z, b))):
            raise PolynomialRecoveryError(
                "Polynomial of {0} fails verification at gamma={1}, beta={2}".format(word, z, b))
        checked += 1


ORDER42_WORDS = {
    "(ab)^4a": ("(ab)^4a", Z*(-1 + Z + Z**2)**2),
    "(ab)^3a": ("(ab)^3a", Z**3*(2 + Z)),
    "(ab)^3(ab^-1)^3a": ("(ab)^3(ab^-1)^3a", -2 + (2 + Z)*(1 + Z**2 + Z**3)**2),
    "(ab)^3(ab^-1)^3(ab)^3a": ("(ab)^3(ab^-1)^3(ab)^3a", Z*(2 + Z)*(1 + 2*Z + Z**2 + 2*Z**3 + Z**4)**2),
}
ORDER42_KEYS = list(ORDER42_WORDS)


def order42_word(selector):
    """
    The word behind an order (4,2) identity, selector is its key or its index 1..4
    """
    if isinstance(selector, int) or str(selector).isdigit():
        idx = int(selector)
        if not 1 <= idx <= len(ORDER42_KEYS):
            raise UnsupportedParameterError("Unknown order (4,2) selector {0}".format(selector))
        selector = ORDER42_KEYS[idx - 1]
    if selector not in ORDER42_WORDS:
        raise UnsupportedParameterError("Unknown order (4,2) selector {0}".format(selector))
    text, expected = ORDER42_WORDS[selector]
    return _expandPowers(text), expected


def _expandPowers(text):
    # (ab)^4a -> abababab a
    out = []
    i = 0
    while i < len(text):
        if text[i] == '(':
            j = text.index(')', i)
            inner = text[i + 1:j]
            k = j + 1
            n = 1
            if k < len(text) and text[k] == '^':
                k += 1
                start = k
                while k < len(text) and text[k].isdigit():
                    k += 1
                n = int(text[start:k])
            out.append(" ".join([inner]*n))
            i = k
        else:
            out.append(text[i])
            i += 1
    return asWord(" ".join(out))


def order42_identities(selector):
    """
    gamma(f, w(g, f)) as a polynomial in z for f of order 4 (beta = -2) and g of order 2

    Input:
        selector: key of ORDER42_WORDS or index 1..4

    Output:
        poly: TracePolynomial in z alone
    """
    word, expected = order42_word(selector)
    poly = trace_polynomial(word).restrict(-2)
    if sympy.expand(poly.to_sympy() - expected) != 0:
        raise PolynomialRecoveryError("Order (4,2) identity mismatch for {0}: {1}".format(word, poly))
    return poly


def compose_polynomials(p1, p2):
    return p1.compose(p2)


def word_polynomials(words, degree_hint=None):
    return [trace_polynomial(w, degree_hint) for w in words]


def polynomial_of(text):
    if isinstance(text, TracePolynomial):
        return text
    if isinstance(text, GroupWord):
        return trace_polynomial(text)
    return trace_polynomial(asWord(text))
