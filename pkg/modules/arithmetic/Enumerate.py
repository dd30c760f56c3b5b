import logging
import math
import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import EnumerationBoundError, ReduciblePolynomialError, RootCertificationError
from modules.arithmetic.RootProfile import IntPolynomial
from modules.arithmetic.ArithmeticScreen import arithmeticity_check, symmetric_polynomial, _checkBeta
from modules.triangle.FreeProduct import order_from_beta, free_product_ellipse
from modules.exclusion.GammaBattery import get_battery, EXCLUDED

LOGGER = logging.getLogger('kleinian')

DEFAULT_LIMIT = 50000000
COEFF_GUARD = 2**62
PAD = 1e-9
SCREEN_TOL = 1e-6
CHUNK = 200000
PARABOLIC_B = range(-7, 1)
PARABOLIC_C = range(1, 16)


class EnumerationRegion:
    """
    Where the roots of a candidate may lie: gamma and its conjugate inside the
    non-free ellipse, the remaining roots on the interval (beta, 0)

    The coefficient box comes from the shifted polynomial Q(w) = P(w + m), m the
    center of the ellipse, whose coefficients are bounded by the elementary
    symmetric functions of the root radii about m.
    """

    def __init__(self, beta, q=2, region=None):
        self.beta = _checkBeta(beta)
        self.q = q
        if region is None:
            lam, focus = free_product_ellipse(order_from_beta(self.beta), q)
        else:
            lam, focus = region
        self.lam = float(lam)
        self.focus = complex(focus)
        self.center = self.focus.real/2
        self.semi_major = self.lam/2
        self.real_radius = max(abs(self.beta - self.center), abs(self.center))

    def radii(self, degree):
        if degree == 1:
            return [self.real_radius]
        outer = max(self.semi_major, self.real_radius)
        return [outer, outer] + [self.real_radius]*(degree - 2)

    def coefficientBounds(self, degree):
        """
        B_k bounding the k-th coefficient of Q, k = 0..degree
        """
        e = [1.0]
        for r in self.radii(degree):
            e = [1.0] + [e[k] + r*e[k - 1] for k in range(1, len(e))] + [r*e[-1]]
        return [b*(1 + PAD) + PAD for b in e]

    def boxSize(self, degree):
        return math.prod(2*math.floor(b) + 1 for b in self.coefficientBounds(degree)[1:])

    def toDict(self):
        return {"beta": self.beta, "q": self.q, "lambda": self.lam, "focus": self.focus,
                "center": self.center, "semi_major": self.semi_major, "real_radius": self.real_radius}


def _shiftSum(b, k, degree, m):
    # part of c_k fixed by the known b_j, j < k
    return sum(b[j]*math.comb(degree - j, k - j)*(-m)**(k - j) for j in range(min(k, len(b))))


def _range(S, B):
    return math.ceil(S - B), math.floor(S + B)


def _tail(prefix, b, degree, m, bounds):
    """
    All completions of a coefficient prefix, as an int64 array of full coefficient rows
    """
    if degree == 1:
        lo, hi = _range(_shiftSum(b, 1, 1, m), bounds[1])
        last = np.arange(max(lo, 1), hi + 1, dtype=np.int64)
        return last[:, None]

    k = degree - 1
    lo, hi = _range(_shiftSum(b, k, degree, m), bounds[k])
    cPrev = np.arange(lo, hi + 1, dtype=np.int64)
    if cPrev.size == 0:
        return np.zeros((0, degree), dtype=np.int64)
    bPrev = cPrev - _shiftSum(b, k, degree, m)
    S = _shiftSum(b, degree, degree, m) - m*bPrev
    lo2 = np.maximum(np.ceil(S - bounds[degree]), 1).astype(np.int64)
    hi2 = np.floor(S + bounds[degree]).astype(np.int64)
    counts = np.clip(hi2 - lo2 + 1, 0, None)
    total = int(counts.sum())
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    last = np.repeat(lo2, counts) + (np.arange(total) - starts)
    rows = np.empty((total, degree), dtype=np.int64)
    rows[:, :k - 1] = prefix
    rows[:, k - 1] = np.repeat(cPrev, counts)
    rows[:, k] = last
    return rows


def _sign_filter(rows, beta):
    # (-1)^d P(beta) = prod (r_i - beta) is a positive integer
    degree = rows.shape[1]
    value = np.ones(rows.shape[0], dtype=np.int64)
    for k in range(degree):
        value = value*beta + rows[:, k]
    return rows[(-1)**degree*value >= 1]


def _screen(rows, region):
    """
    Loose numeric version of the root conditions on batched companion matrices
    """
    n, degree = rows.shape
    if n == 0:
        return rows
    if degree == 1:
        roots = -rows.astype(complex)
    else:
        C = np.zeros((n, degree, degree))
        C[:, 0, :] = -rows
        C[:, np.arange(1, degree), np.arange(degree - 1)] = 1
        roots = np.linalg.eigvals(C)
    tol = SCREEN_TOL*(1 + np.abs(roots))
    isComplex = np.abs(roots.imag) > tol
    nComplex = isComplex.sum(axis=1)
    realOk = np.all(isComplex | ((roots.real > region.beta - tol) & (roots.real < tol)), axis=1)
    gamma = np.where(nComplex > 0,
                     np.max(np.where(isComplex, roots.real + 1j*np.abs(roots.imag), -np.inf), axis=1),
                     np.max(np.where(isComplex, -np.inf, roots.real), axis=1))
    inside = np.abs(gamma) + np.abs(gamma - region.focus) < region.lam + SCREEN_TOL
    return rows[((nComplex == 0) | (nComplex == 2)) & realOk & inside]


def _exact(rows, region):
    out = []
    for row in rows:
        P = IntPolynomial([1] + [int(c) for c in row])
        try:
            candidate = arithmeticity_check(P, region.beta, region.q)
        except (ReduciblePolynomialError, RootCertificationError):
            continue
        if candidate.accepted:
            out.append(candidate)
    return out


def _prefixes(b, prefix, degree, m, bounds, stop):
    k = len(prefix) + 1
    if k > stop:
        yield prefix, b
        return
    lo, hi = _range(_shiftSum(b, k, degree, m), bounds[k])
    for c in range(lo, hi + 1):
        yield from _prefixes(b + [c - _shiftSum(b, k, degree, m)], prefix + [c], degree, m, bounds, stop)


def _enumerateBlock(region, degree, first=None):
    """
    Accepted candidates of one block, the block fixed by its first coefficient
    """
    m = region.center
    bounds = region.coefficientBounds(degree)
    if first is None:
        starts = [([], [1.0])]
    else:
        starts = [([first], [1.0, first - _shiftSum([1.0], 1, degree, m)])]
    found = []
    for prefix0, b0 in starts:
        for prefix, b in _prefixes(b0, prefix0, degree, m, bounds, max(0, degree - 2)):
            rows = _tail(prefix, b, degree, m, bounds)
            for i in range(0, rows.shape[0], CHUNK):
                chunk = _sign_filter(rows[i:i + CHUNK], region.beta)
                found += _exact(_screen(chunk, region), region)
    return found


def _dedupe(candidates, beta):
    """
    Keeps one representative per pair {gamma, beta - conj(gamma)}, the one with Re gamma >= beta/2
    """
    accepted = {c.polynomial for c in candidates}
    out = []
    for c in candidates:
        c.partner = symmetric_polynomial(c.polynomial, beta)
        if c.gamma.real < beta/2 - 1e-9 and c.partner in accepted:
            continue
        out.append(c)
    return out


def enumerate_candidates(beta, degree, q=2, region=None, n_jobs=1, limit=DEFAULT_LIMIT,
                         dedupe=True, cumulative=False, verbose=False):
    """
    Every monic integer polynomial of the given degree whose root pattern passes the arithmeticity screen

    Input:
        beta: -3, -2, -1 or 0
        degree: polynomial degree, all degrees up to it when cumulative
        q: order of the second generator
        region: Optional (lambda, focus) replacing the free product ellipse of (p, q)
        n_jobs: joblib workers, blocks are split on the first coefficient
        limit: largest coefficient box that is scanned
        dedupe: merge each candidate with its symmetric partner
        cumulative: enumerate degrees 1..degree
        verbose: progress bar over blocks

    Output:
        candidates: accepted CandidateGamma sorted by (degree, coefficients)
    """
    region = EnumerationRegion(beta, q, region)
    degree = int(degree)
    degrees = range(1, degree + 1) if cumulative else [degree]
    results = []
    for d in degrees:
        if d < 1:
            raise EnumerationBoundError("Degree must be at least 1, got {0}".format(d))
        bounds = region.coefficientBounds(d)
        if max(bounds) > COEFF_GUARD:
            raise EnumerationBoundError("Coefficient bound {0:.3g} overflows 64 bit integers".format(max(bounds)))
        box = region.boxSize(d)
        if box > limit:
            raise EnumerationBoundError("Degree {0} box has {1} polynomials, above the limit {2}".format(d, box, limit))
        LOGGER.info("Degree {0}: scanning a box of {1} coefficient vectors".format(d, box))

        if d <= 2:
            blocks = [None]
        else:
            lo, hi = _range(_shiftSum([1.0], 1, d, region.center), bounds[1])
            blocks = list(range(lo, hi + 1))
        blocks = tqdm(blocks, desc="Degree {0} blocks".format(d), disable=not verbose)
        if n_jobs == 1:
            found = [_enumerateBlock(region, d, c) for c in blocks]
        else:
            found = Parallel(n_jobs=n_jobs)(delayed(_enumerateBlock)(region, d, c) for c in blocks)
        results += [c for block in found for c in block]

    results.sort(key=lambda c: c.sortKey())
    if dedupe:
        results = _dedupe(results, region.beta)
    LOGGER.info("{0} accepted candidates".format(len(results)))
    return results


def parabolic_coarse_list():
    """
    gamma^2 + b gamma + c with -7 <= b <= 0, 1 <= c <= 15 and b^2 < 4c, gamma in the upper half plane

    Every group (gamma, 0, -4) with |gamma| >= 4 is free, which gives the ranges;
    the symmetries gamma -> -gamma, conj(gamma) allow b <= 0.
    """
    out = []
    for b in PARABOLIC_B:
        for c in PARABOLIC_C:
            if b*b - 4*c >= 0:
                continue
            out.append(arithmeticity_check(IntPolynomial([1, b, c]), 0))
    return out


def outside_rhombus(gamma):
    """
    |Re gamma|/4 + |Im gamma|/2 >= 1, where two parabolics generate a free group
    """
    return abs(gamma.real)/4 + abs(gamma.imag)/2 >= 1


def enumerate_parabolic_candidates(use_battery=True, depth=2):
    """
    Coarse parabolic list refined by the free rhombus and the exclusion battery at beta = 0

    Output:
        candidates: CandidateGamma still possibly arithmetic, sorted by (|gamma|^2, Re gamma)
    """
    battery = get_battery(0, None, -4, depth) if use_battery else None
    survivors = []
    for cand in parabolic_coarse_list():
        if outside_rhombus(cand.gamma):
            continue
        if battery is not None and int(battery.verdicts([cand.gamma])[0]) == EXCLUDED:
            LOGGER.info("{0} excluded: {1}".format(cand.polynomial, battery.explain(cand.gamma)[1]))
            continue
        survivors.append(cand)
    survivors.sort(key=lambda c: (round(abs(c.gamma)**2), c.gamma.real))
    return survivors
