import cmath
import numpy as np
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import DegenerateParameterError, UnsupportedParameterError
from modules.moebius.MoebiusMap import (MoebiusMap, TOL, beta, gamma, fixed_points,
                                        holonomy_from_beta, mapping_triple)


class TraceParams:
    """
    The conjugacy invariants (gamma, beta, beta') of a two-generator group <f, g>

    gamma = tr[f,g] - 2, beta = tr^2 f - 4 and beta' = tr^2 g - 4.
    gamma = 0 is allowed and flagged as elementary (shared fixed point).
    """

    def __init__(self, gamma, beta, beta_prime=-4):
        self.gamma = complex(gamma)
        self.beta = complex(beta)
        self.beta_prime = complex(beta_prime)

    @property
    def elementary(self):
        return abs(self.gamma) < TOL

    def astuple(self):
        return (self.gamma, self.beta, self.beta_prime)

    def isClose(self, other, tol=1e-8):
        return bool(np.allclose(self.astuple(), other.astuple(), atol=tol, rtol=0))

    def __repr__(self):
        return "TraceParams(gamma={0}, beta={1}, beta_prime={2})".format(self.gamma, self.beta, self.beta_prime)

    def toDict(self):
        return {"gamma": self.gamma, "beta": self.beta, "beta_prime": self.beta_prime,
                "elementary": self.elementary}


def extract_params(f, g):
    return TraceParams(gamma(f, g), beta(f), beta(g))


def realize(params):
    """
    Builds generators f, g with the given (gamma, beta, beta')

    Normalization: f = [[l, 1], [0, 1/l]] with l = (sqrt(beta+4) + sqrt(beta))/2,
    so f fixes infinity. g = [[t/2, beta'/(4c)], [c, t/2]] with t = sqrt(beta'+4)
    and c = sqrt(gamma + beta beta'/4). When gamma + beta beta'/4 = 0 the lower
    left entry is 1 and the diagonal of g is shifted by -1/sqrt(beta).

    Input:
        params: TraceParams with gamma != 0

    Output:
        f, g: MoebiusMap pair realizing params
    """
    gam, b, bp = params.astuple()
    if abs(gam) < TOL:
        raise DegenerateParameterError("gamma = 0 does not determine a group up to conjugacy")

    sb = cmath.sqrt(b)
    s4 = cmath.sqrt(b + 4)
    f = MoebiusMap((s4 + sb)/2, 1, 0, (s4 - sb)/2)

    tg = cmath.sqrt(bp + 4)
    kappa = gam + b*bp/4
    if abs(kappa) > TOL:
        c = cmath.sqrt(kappa)
        g = MoebiusMap(tg/2, bp/(4*c), c, tg/2)
    else:
        e = -1/sb
        a = tg/2 + e
        d = tg/2 - e
        g = MoebiusMap(a, a*d - 1, 1, d)
    return f, g


def beta_of_product_with_involution(params):
    _requireInvolution(params)
    return params.gamma - params.beta - 4


def parameter_symmetries(params):
    """
    The four parameter triples of groups commensurable with <f, g> when g has order two

    Output:
        list of TraceParams for the generator pairs (f,g), (f,phi g), (fg,g), (fg,phi g)
    """
    _requireInvolution(params)
    gam, b = params.gamma, params.beta
    return [TraceParams(gam, b, -4),
            TraceParams(b - gam, b, -4),
            TraceParams(gam, gam - b - 4, -4),
            TraceParams(-b - 4, gam - b - 4, -4)]


def half_turn(f, g):
    """
    The involution phi that swaps the two fixed points of f and sends the first
    fixed point of g to the second one

    Input:
        f, g: non-parabolic MoebiusMap

    Output:
        phi: MoebiusMap with phi^2 = identity
    """
    xs = fixed_points(f)
    ys = fixed_points(g)
    if len(xs) < 2 or len(ys) < 2:
        raise DegenerateParameterError("Half turn needs two fixed points for each generator")
    return mapping_triple((xs[0], xs[1], ys[0]), (xs[1], xs[0], ys[1]))


def realize_symmetries(params):
    """
    Realizes the generator pairs behind parameter_symmetries as matrices

    Output:
        list of (f, g) MoebiusMap pairs in the order of parameter_symmetries
    """
    _requireInvolution(params)
    f, g = realize(params)
    fg = f.compose(g)
    phi = half_turn(f, g)
    psi = half_turn(fg, g)
    return [(f, g),
            (f, phi.compose(g)),
            (fg, g),
            (fg, psi.compose(g))]


def project_to_two_generator_subgroup(params):
    """
    Parameters of the subgroups <f, g f g^-1> and <f, phi>

    Output:
        (gamma(gamma - beta), beta, beta) and (gamma, beta, -4)
    """
    gam, b = params.gamma, params.beta
    return (TraceParams(gam*(gam - b), b, b), TraceParams(gam, b, -4))


def chebyshev_action(params, n):
    """
    Parameters of <f^n, g>: (gamma, beta) scaled by beta(f^n)/beta(f)

    Input:
        params: TraceParams with beta != 0
        n: positive integer

    Output:
        TraceParams of <f^n, g>
    """
    if int(n) != n or n < 1:
        raise UnsupportedParameterError("Power must be a positive integer, got {0}".format(n))
    b = params.beta
    if abs(b) < TOL:
        raise DegenerateParameterError("Chebyshev action undefined for parabolic f (beta = 0)")
    w = 2*cmath.asinh(cmath.sqrt(b)/2)
    bn = 4*cmath.sinh(n*w/2)**2
    if abs(bn) < TOL:
        bn = 0j
    return TraceParams(params.gamma*bn/b, bn, params.beta_prime)


def holonomy(params):
    return holonomy_from_beta(params.beta)


def _requireInvolution(params):
    if abs(params.beta_prime + 4) > 1e-8:
        raise UnsupportedParameterError("Operation requires beta' = -4 (g of order two)")
