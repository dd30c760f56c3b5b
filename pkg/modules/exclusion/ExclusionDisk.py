import logging
import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import DegenerateParameterError, UnsupportedParameterError
from modules.exclusion.Jorgensen import riley_r0, order3_r0, order3_r1

LOGGER = logging.getLogger('kleinian')

SAMPLE_ANGLES = 4096
CLUSTER_TOL = 1e-3


class ExclusionDisk:
    """
    An open disk in the gamma plane containing no Kleinian parameters except
    the listed exceptional centers
    """

    def __init__(self, center, radius, exceptional_centers=None, provenance="", sampled_radius=None):
        if radius <= 0:
            raise DegenerateParameterError("Exclusion disk radius must be positive, got {0}".format(radius))
        self.center = complex(center)
        self.radius = float(radius)
        self.exceptional_centers = [complex(e) for e in (exceptional_centers or [])]
        self.provenance = provenance
        self.sampled_radius = sampled_radius

    def contains(self, z):
        return np.abs(np.asarray(z, dtype=complex) - self.center) < self.radius

    def isExceptional(self, z, tol=1e-9):
        z = np.asarray(z, dtype=complex)
        hit = np.zeros(z.shape, dtype=bool)
        for e in self.exceptional_centers:
            hit |= np.abs(z - e) <= tol
        return hit

    def excludes(self, z, tol=1e-9):
        return self.contains(z) & ~self.isExceptional(z, tol)

    def reflected(self, beta):
        """
        Image under the parameter symmetry gamma -> beta - gamma
        """
        beta = complex(beta)
        return ExclusionDisk(beta - self.center, self.radius,
                             [beta - e for e in self.exceptional_centers],
                             "reflection of ({0}) under gamma -> beta - gamma".format(self.provenance),
                             self.sampled_radius)

    def __repr__(self):
        return "ExclusionDisk(center={0}, radius={1}, exceptional={2})".format(self.center, self.radius, self.exceptional_centers)

    def toDict(self):
        return {"center": self.center, "radius": self.radius,
                "exceptional_centers": self.exceptional_centers,
                "provenance": self.provenance,
                "sampled_radius": self.sampled_radius}


def riley_excluded_disks():
    """
    Disks of the Riley slice (beta = 0): D(0,1) and D(+-1, r0) with r0^3 + r0^2 = 1
    """
    r0 = riley_r0()
    return [ExclusionDisk(0, 1.0, [], "Jorgensen inequality at beta = 0"),
            ExclusionDisk(1, r0, [1], "word aba^-1ba at beta = 0"),
            ExclusionDisk(-1, r0, [-1], "word aba^-1b^-1a at beta = 0")]


def order3_excluded_disks(involution=True):
    """
    Disks for beta = -3: D(0, r0) and D(-2, r1), plus their images D(-1, r1) and D(-3, r0)
    under gamma -> beta - gamma when g has order two
    """
    r0 = order3_r0()
    r1 = order3_r1()
    disks = [ExclusionDisk(0, r0, [0], "minimum |gamma| for elliptics of order 3"),
             ExclusionDisk(-2, r1, [-2], "polynomial z(z+2)^4 mapping into D(0, r0)")]
    if involution:
        disks.append(disks[1].reflected(-3))
        disks.append(disks[0].reflected(-3))
    return disks


def _clusterRoots(roots):
    roots = list(roots)
    groups = []
    for r in roots:
        for g in groups:
            if abs(np.mean(g) - r) < CLUSTER_TOL:
                g.append(r)
                break
        else:
            groups.append([r])
    return [complex(np.mean(g)) for g in groups]


def certified_radius(poly, center, target_radius):
    """
    Largest r with sum_{k>=1} |a_k| r^k <= target_radius, a_k the Taylor coefficients of poly at center
    """
    shifted = poly(Polynomial([complex(center), 1.0]))
    coeffs = np.abs(np.asarray(shifted.coef, dtype=complex))[1:]
    if not np.any(coeffs > 0):
        return np.inf
    bound = Polynomial(np.concatenate([[-target_radius], coeffs]))
    hi = 1.0
    while bound(hi) < 0:
        hi *= 2
    return brentq(bound, 0.0, hi, xtol=1e-14)


def sampled_radius(poly, center, target_radius, hi):
    """
    Radius found by bisection on the sampled maximum of |poly(z) - poly(center)| over circles
    """
    angles = np.exp(2j*np.pi*np.arange(SAMPLE_ANGLES)/SAMPLE_ANGLES)
    c = complex(center)
    base = poly(c)

    def inside(r):
        return np.max(np.abs(poly(c + r*angles) - base)) < target_radius

    lo, hi = 0.0, hi
    while inside(hi):
        lo, hi = hi, hi*2
        if hi > 1e6:
            return np.inf
    for _ in range(60):
        mid = (lo + hi)/2
        if inside(mid):
            lo = mid
        else:
            hi = mid
    return lo


def excluded_disk_from_polynomial(poly, center, target_disk, provenance=None):
    """
    Pulls an exclusion disk back through a trace polynomial

    Input:
        poly: numpy Polynomial in gamma (trace polynomial at fixed beta)
        center: point mapped by poly onto the target center
        target_disk: ExclusionDisk to pull back

    Output:
        disk: ExclusionDisk about center whose image lies inside target_disk
    """
    if target_disk.radius <= 0:
        raise DegenerateParameterError("Target disk has no positive radius")
    center = complex(center)
    scale = max(1.0, float(np.sum(np.abs(poly.coef))))
    if abs(poly(center) - target_disk.center) > 1e-9*scale:
        raise UnsupportedParameterError("Polynomial does not map {0} to the target center {1}".format(center, target_disk.center))

    r = certified_radius(poly, center, target_disk.radius)
    if not np.isfinite(r) or r <= 0:
        raise DegenerateParameterError("No positive radius could be certified about {0}".format(center))
    sampled = sampled_radius(poly, center, target_disk.radius, r)

    exceptional = []
    for value in [target_disk.center] + target_disk.exceptional_centers:
        for root in _clusterRoots((poly - value).roots()):
            if abs(root - center) < r:
                exceptional.append(root)
    exceptional = _clusterRoots(exceptional)

    if provenance is None:
        provenance = "pullback of D({0}, {1:.6g})".format(target_disk.center, target_disk.radius)
    LOGGER.info("Certified disk about {0}: radius {1:.9g} (sampled {2:.9g})".format(center, r, sampled))
    return ExclusionDisk(center, r, exceptional, provenance, sampled)
