import functools
import logging
import math
import numpy as np
from numpy.polynomial import Polynomial
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import UnsupportedParameterError
from modules.words.GroupWord import NAMED_WORDS, asWord
from modules.words.TracePolynomial import ORDER42_KEYS, order42_word, trace_polynomial
from modules.exclusion.Jorgensen import order3_r0
from modules.exclusion.ExclusionDisk import ExclusionDisk, riley_excluded_disks, order3_excluded_disks
from modules.triangle.FreeProduct import order_from_beta, is_free_product
from modules.triangle.ReferenceTables import elementary_gammas

LOGGER = logging.getLogger('kleinian')

EXCLUDED = 0
FREE = 1
UNKNOWN = 2
MARKED = 3
VERDICT_NAMES = {EXCLUDED: "excluded", FREE: "free_product", UNKNOWN: "unknown", MARKED: "marked_discrete"}

BETA_TOL = 1e-9
ZERO_TOL = 1e-12
SLACK = 1e-9
ESCAPE_RADIUS = 1e6
ROUNDOFF = 1e-15
# orders of h for which <f, h> can be a finite group containing an elliptic of order p
ELEMENTARY_PARTNERS = (2, 3, 4, 5)


def default_words(beta_prime=-4):
    """
    Named words, plus the order (4,2) words when g is an involution
    """
    words = [asWord(w) for w in NAMED_WORDS.values()]
    if abs(complex(beta_prime) + 4) < BETA_TOL:
        words += [order42_word(k)[0] for k in ORDER42_KEYS]
    return words


class _CompiledWord:

    def __init__(self, word, poly, beta):
        self.word = word
        self.strict = word.isStrictlyGood()
        self.p = poly.at_beta(beta)
        self.dp = self.p.deriv()
        self.absPoly = Polynomial(np.abs(self.p.coef))

    def __call__(self, v, err):
        value = self.p(v)
        a = np.abs(v)
        newErr = np.abs(self.dp(v))*err + ROUNDOFF*self.absPoly(a)
        return value, newErr


class GammaBattery:
    """
    Tests certifying that (gamma, beta, beta') is not a Kleinian group or that it is a free product

    Every value gamma goes through the same ordered list of tests, the first test
    that fires decides the verdict:
        degenerate gamma = 0 and elementary values stay unknown
        Jorgensen and the modified inequality on gamma
        excluded disks for the fixed beta
        the same inequalities and disks on p_w(gamma) for the word list, and on
        nested values p_w1(p_w2(gamma)) with w1 strictly good, down to depth
        the free product ellipse
    """

    def __init__(self, beta, words=None, beta_prime=-4, depth=2, escape_radius=ESCAPE_RADIUS):
        self.beta = complex(beta)
        self.beta_prime = complex(beta_prime)
        self.depth = int(depth)
        if self.depth < 0:
            raise UnsupportedParameterError("Word depth must be non-negative, got {0}".format(depth))
        self.escape_radius = float(escape_radius)
        self.involution = abs(self.beta_prime + 4) < BETA_TOL
        self.p = order_from_beta(self.beta)
        self.q = order_from_beta(self.beta_prime)

        if words is None:
            words = default_words(self.beta_prime)
        self.words = []
        for w in words:
            word = asWord(w)
            if not word.isStrictlyGood() and not self.involution:
                LOGGER.info("Skipping {0}: only good under an involution and beta' = {1}".format(word, self.beta_prime))
                continue
            self.words.append(_CompiledWord(word, trace_polynomial(word), self.beta))
        self.outer = [w for w in self.words if w.strict]

        self.base_disks, self.word_disks = self._disks()
        self.exceptional = self._exceptional()
        LOGGER.info("Battery at beta={0}: {1} words, {2} base disks, {3} word disks, {4} exceptional values".format(
            self.beta, len(self.words), len(self.base_disks), len(self.word_disks), len(self.exceptional)))

    def _isBeta(self, value):
        return abs(self.beta - value) < BETA_TOL

    def _disks(self):
        """
        (disks applied to gamma, disks applied to word values)
        """
        if self._isBeta(0):
            disks = riley_excluded_disks()
            return disks, disks
        if self._isBeta(-3):
            disks = order3_excluded_disks(involution=self.involution)
            return disks, disks[:2]
        if self._isBeta(-1):
            disks = [ExclusionDisk(0, 1.0, [0], "minimum |gamma| for elliptics of order 6")]
            return disks, disks
        return [], []

    def _exceptional(self):
        values = {0j, self.beta}
        if self.p is not None and not math.isinf(self.p):
            for q in ELEMENTARY_PARTNERS:
                try:
                    values.update(g for g, _ in elementary_gammas(self.p, q))
                except UnsupportedParameterError:
                    pass
        for d in self.base_disks:
            values.update(d.exceptional_centers)
        return np.array(sorted(values, key=lambda z: (z.real, z.imag)), dtype=complex)

    def _nearExceptional(self, v, tol):
        hit = np.zeros(v.shape, dtype=bool)
        for e in self.exceptional:
            hit |= np.abs(v - e) <= tol
        return hit

    def _valueTests(self, v, err, disks):
        """
        Yields (name, mask) for the inequalities and disks on the values v
        """
        slack = SLACK + 10*err
        yield "jorgensen", np.abs(v) + abs(self.beta) < 1 - slack
        modified = (np.abs(v) + abs(1 + self.beta) < 1 - slack) & (np.abs(v - (1 + self.beta)) > slack)
        yield "modified_jorgensen", modified
        for d in disks:
            yield "disk D({0:.6g}, {1:.6g})".format(d.center, d.radius), np.abs(v - d.center) < d.radius - slack

    def _levels(self, gam):
        """
        Word values level by level, each entry (label, values, error bound)
        """
        err0 = ROUNDOFF*(1 + np.abs(gam))
        level = []
        for w in self.words:
            v, e = w(gam, err0)
            level.append((str(w.word), v, e))
        yield level
        for _ in range(1, self.depth):
            nxt = []
            for label, v, e in level:
                alive = np.abs(v) <= self.escape_radius
                if not np.any(alive):
                    continue
                safe = np.where(alive, v, 0)
                for w in self.outer:
                    nv, ne = w(safe, e)
                    nv = np.where(alive, nv, np.nan)
                    nxt.append(("{0} o {1}".format(w.word, label), nv, ne))
            level = nxt
            yield level

    def _run(self, gammas):
        gam = np.atleast_1d(np.asarray(gammas, dtype=complex))
        verdict = np.full(gam.shape, UNKNOWN, dtype=np.uint8)
        reason = np.full(gam.shape, -1, dtype=np.int32)
        undecided = np.ones(gam.shape, dtype=bool)
        reasons = []

        def decide(mask, code, name):
            newly = mask & undecided
            if np.any(newly):
                verdict[newly] = code
                reason[newly] = len(reasons)
                reasons.append(name)
                undecided[newly] = False

        decide(np.abs(gam) < ZERO_TOL, UNKNOWN, "degenerate gamma = 0")
        decide(self._nearExceptional(gam, SLACK*(1 + np.abs(gam))), UNKNOWN, "elementary value")
        err0 = ROUNDOFF*(1 + np.abs(gam))
        for name, mask in self._valueTests(gam, err0, self.base_disks):
            decide(mask, EXCLUDED, name)

        for level in self._levels(gam):
            if not np.any(undecided):
                break
            for label, v, e in level:
                with np.errstate(invalid='ignore'):
                    finite = np.isfinite(v)
                    tol = np.maximum(SLACK*(1 + np.abs(np.where(finite, v, 0))), 10*e)
                    usable = finite & ~self._nearExceptional(np.where(finite, v, 0), tol) & (np.abs(np.where(finite, v, 0)) > tol)
                    for name, mask in self._valueTests(np.where(finite, v, 0), e, self.word_disks):
                        decide(mask & usable, EXCLUDED, "{0} on {1}".format(name, label))

        if self.p is not None and self.q is not None and not (self.p == 2 and self.q == 2):
            decide(is_free_product(gam, self.p, self.q), FREE, "outside the free product ellipse")
        return verdict, reason, reasons

    def verdicts(self, gammas):
        """
        Verdict codes (EXCLUDED, FREE or UNKNOWN) for an array of gamma values
        """
        verdict, _, _ = self._run(gammas)
        return verdict.reshape(np.shape(gammas))

    def explain(self, gamma):
        """
        Verdict name and the first test that decided it
        """
        verdict, reason, reasons = self._run([gamma])
        why = reasons[reason[0]] if reason[0] >= 0 else "no test applies"
        return VERDICT_NAMES[int(verdict[0])], why

    def disks(self):
        return list(self.base_disks)

    def toDict(self):
        return {"beta": self.beta, "beta_prime": self.beta_prime, "depth": self.depth,
                "words": [str(w.word) for w in self.words],
                "base_disks": self.base_disks, "word_disks": self.word_disks,
                "exceptional": list(self.exceptional),
                "minimum_gamma_order3": order3_r0() if self._isBeta(-3) else None}


BATTERY_CACHE_SIZE = 32


def get_battery(beta, words=None, beta_prime=-4, depth=2):
    """
    Shared GammaBattery for the given parameters, the most recently used ones are kept
    """
    words = None if words is None else tuple(str(w) for w in words)
    return _battery(complex(beta), complex(beta_prime), words, int(depth))


@functools.lru_cache(maxsize=BATTERY_CACHE_SIZE)
def _battery(beta, beta_prime, words, depth):
    return GammaBattery(beta, words, beta_prime, depth)


def gamma_battery(gamma, beta, words=None, beta_prime=-4, depth=2):
    """
    Verdict for a single gamma: "excluded", "free_product" or "unknown"

    Input:
        gamma: complex commutator parameter
        beta: beta(f)
        words: Optional good words, defaults to the named words
        beta_prime: beta(g), -4 for an involution
        depth: nesting depth of word compositions

    Output:
        verdict: string
    """
    battery = get_battery(beta, words, beta_prime, depth)
    return VERDICT_NAMES[int(battery.verdicts([gamma])[0])]
