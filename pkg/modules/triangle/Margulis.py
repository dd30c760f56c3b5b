import logging
import math
import numpy as np
from scipy.optimize import minimize, fsolve
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import TriangleError, UnsupportedParameterError, ConvergenceError
from modules.triangle.FreeProduct import orderTrig
from modules.triangle.TriangleTrig import (EllipticOrders, TriangleAngles, gram_matrix, hyperboloid_normals,
                                           minkowski, inscribed_radius, admissible_222_angles, triangle_edge_lengths)

LOGGER = logging.getLogger('kleinian')

LABEL_TOL = 1e-8
EQUIDISTANCE_TOL = 1e-8
PRINTED_TOL = 5e-4
CANCEL_TOL = 1e-6


class MargulisResult:
    """
    Margulis constant of a group generated by three elliptics with coplanar axes
    """

    def __init__(self, value, method, orders, angles, residual=None, point=None, printed=None, erratum=None):
        if not value > 0:
            raise TriangleError("Margulis constant must be positive, got {0}".format(value))
        self.value = float(value)
        self.method = method
        self.orders = orders
        self.angles = angles
        self.residual = residual
        self.point = point
        self.printed = printed
        self.erratum = erratum

    def __repr__(self):
        return "MargulisResult({0:.9g}, {1})".format(self.value, self.method)

    def toDict(self):
        d = {"value": self.value, "method": self.method,
             "orders": self.orders, "angles": self.angles}
        if self.residual is not None:
            d["equidistance_residual"] = self.residual
        if self.point is not None:
            d["point"] = list(self.point)
        if self.printed is not None:
            d["printed_formula"] = self.printed
        if self.erratum is not None:
            d["erratum"] = self.erratum
        return d


def _asOrders(orders):
    if not isinstance(orders, EllipticOrders):
        orders = EllipticOrders(*orders)
    if not orders.isFinite():
        raise UnsupportedParameterError("Margulis constants need finite orders, got {0}".format(orders))
    return orders


def _asAngles(angles):
    if not isinstance(angles, TriangleAngles):
        angles = TriangleAngles(*angles)
    return angles


def _weights(orders):
    return np.array([1/orderTrig(n)[0] for n in orders])


def margulis_general(orders, angles):
    """
    sinh^2(m/2) = -1/(w^T G^-1 w) with w_i = 1/sin(pi/n_i), G the Gram matrix of the axes

    Valid for finite and ideal vertices alike. The point where all three elliptics
    move it the same distance is N G^-1 w up to scale.

    Input:
        orders: EllipticOrders or a triple
        angles: TriangleAngles or a triple

    Output:
        value: the Margulis constant
    """
    orders = _asOrders(orders)
    angles = _asAngles(angles)
    G = gram_matrix(angles)
    w = _weights(orders)
    try:
        q = float(w @ np.linalg.solve(G, w))
    except np.linalg.LinAlgError:
        raise TriangleError("Gram matrix of {0} is singular".format(angles))
    if q >= 0:
        raise TriangleError("Margulis formula denominator is not positive for {0} {1}".format(orders, angles))
    return 2*math.asinh(math.sqrt(-1/q))


def margulis_printed(orders, angles, vertex=1):
    """
    The one-vertex closed form at the axis `vertex` (0-based)

    sinh^2(m/2) = sin^2(pi/n)(cosh^2 l - 1) / (1 - cosh^2 l + cot^2 t1 + cot^2 t3 + 2 cot t1 cot t3 cosh l)
    with n the order on the axis, l the length of its edge and t1, t3 the angles where
    it meets the other two axes. Needs both of those vertices finite.

    Input:
        orders: EllipticOrders or a triple
        angles: TriangleAngles or a triple
        vertex: index of the axis the formula is written at

    Output:
        value: the closed form value
    """
    orders = _asOrders(orders)
    angles = _asAngles(angles)
    if vertex not in (0, 1, 2):
        raise UnsupportedParameterError("Vertex index must be 0, 1 or 2, got {0}".format(vertex))
    pa = angles.pairAngles()
    j, k = [n for n in range(3) if n != vertex]
    t1 = pa[tuple(sorted((vertex, j)))]
    t3 = pa[tuple(sorted((vertex, k)))]
    length = triangle_edge_lengths(angles)[vertex]
    if math.isinf(length) or t1 <= 0 or t3 <= 0:
        raise TriangleError("The one-vertex formula needs finite vertices on axis {0}".format(vertex + 1))
    ch = math.cosh(length)
    c1, c3 = 1/math.tan(t1), 1/math.tan(t3)
    num = orderTrig(list(orders)[vertex])[0]**2*(ch**2 - 1)
    den = 1 - ch**2 + c1**2 + c3**2 + 2*c1*c3*ch
    if den <= CANCEL_TOL*(1 + ch**2 + c1**2 + c3**2 + 2*abs(c1*c3)*ch):
        raise TriangleError("One-vertex formula denominator is not positive or cancels for {0} {1}".format(orders, angles))
    return 2*math.asinh(math.sqrt(num/den))


def margulis_triangle(orders, angles):
    """
    Margulis constant of an admissible triangle from the Gram form, next to the one-vertex closed form

    The closed form is evaluated at every vertex where it is defined. When those values
    disagree with each other or with the Gram value, the result carries an erratum
    listing them.
    """
    orders = _asOrders(orders)
    angles = _asAngles(angles)
    value = margulis_general(orders, angles)
    printed = {}
    for v in range(3):
        try:
            printed[v] = margulis_printed(orders, angles, v)
        except TriangleError:
            continue
    erratum = None
    if printed:
        agree = max(printed.values()) - min(printed.values()) <= LABEL_TOL*(1 + max(printed.values()))
        closed = printed[min(printed)]
        if not agree or abs(closed - value) > PRINTED_TOL:
            erratum = {"kind": "one_vertex_formula", "printed_formula": closed, "gram_form": value,
                       "difference": closed - value, "labelings_agree": agree,
                       "vertex_values": {str(v + 1): x for v, x in printed.items()},
                       "note": "the printed one-vertex closed form disagrees with the Gram form"}
            LOGGER.debug("{0} {1}: closed form {2}, Gram form {3:.9g}".format(orders, angles, printed, value))
    return MargulisResult(value, "general_formula", orders, angles, printed=printed.get(1), erratum=erratum)


def margulis_ideal(orders):
    """
    1/sinh^2(m/2) = sum over i < j of 1/(sin(pi/n_i) sin(pi/n_j)) for an ideal triangle
    """
    orders = _asOrders(orders)
    s = [orderTrig(n)[0] for n in orders]
    inv = 1/(s[0]*s[1]) + 1/(s[0]*s[2]) + 1/(s[1]*s[2])
    return MargulisResult(2*math.asinh(1/math.sqrt(inv)), "ideal_symmetric", orders, TriangleAngles(0, 0, 0))


def margulis_222(angles):
    """
    Twice the inscribed radius, for three coplanar half turn axes
    """
    angles = _asAngles(angles)
    if not admissible_222_angles(angles):
        raise TriangleError("Angles {0} are not admissible for a (2,2,2) group".format(angles))
    return MargulisResult(2*inscribed_radius(angles), "inscribed_disk", EllipticOrders(2, 2, 2), angles)


def numeric_margulis_oracle(orders, angles, xatol=1e-12, maxiter=20000):
    """
    Minimizes the largest displacement of the three elliptics over the plane of the axes

    The plane is the hyperboloid x = (u, v, sqrt(1 + u^2 + v^2)), the distance of x to
    axis i is asinh|<x, n_i>|. Nelder-Mead starts at the incenter and the optimum is
    polished by solving the equidistance equations.

    Input:
        orders: EllipticOrders or triple
        angles: TriangleAngles or triple
        xatol: Nelder-Mead tolerance on the point
        maxiter: iteration budget

    Output:
        result: MargulisResult with method numeric_oracle and the equidistance residual
    """
    orders = _asOrders(orders)
    angles = _asAngles(angles)
    N = hyperboloid_normals(angles)
    s = np.array([orderTrig(n)[0] for n in orders])

    def lift(uv):
        u, v = uv
        return np.array([u, v, math.sqrt(1 + u*u + v*v)])

    def scaled(uv):
        x = lift(uv)
        return s*np.abs([minkowski(x, N[:, i]) for i in range(3)])

    def objective(uv):
        return 2*np.arcsinh(np.max(scaled(uv)))

    # incenter: equidistant from the three lines
    x0 = N @ np.linalg.solve(gram_matrix(angles), np.ones(3))
    q = minkowski(x0, x0)
    start = np.zeros(2)
    if q < 0:
        x0 = x0/math.sqrt(-q)
        if x0[2] < 0:
            x0 = -x0
        start = x0[:2]

    res = minimize(objective, start, method="Nelder-Mead",
                   options={"xatol": xatol, "fatol": 1e-14, "maxiter": maxiter, "maxfev": 4*maxiter})

    best = res.x
    value = float(res.fun)
    h = scaled(best)
    residual = 2*float(np.arcsinh(h.max()) - np.arcsinh(h.min()))
    if residual < 1e-3:
        sol, info, ier, _ = fsolve(lambda uv: [scaled(uv)[0] - scaled(uv)[1], scaled(uv)[0] - scaled(uv)[2]],
                                   best, xtol=1e-14, full_output=True)
        if ier == 1 and objective(sol) <= value + 1e-9:
            best = sol
            value = float(objective(sol))
            h = scaled(best)
            residual = 2*float(np.arcsinh(h.max()) - np.arcsinh(h.min()))
    if not res.success and residual > EQUIDISTANCE_TOL:
        raise ConvergenceError("Nelder-Mead did not converge for {0} {1}: {2}".format(orders, angles, res.message))
    if residual > EQUIDISTANCE_TOL:
        LOGGER.warning("Oracle optimum for {0} {1} is not equidistant (residual {2:.3g})".format(orders, angles, residual))
    return MargulisResult(value, "numeric_oracle", orders, angles, residual, lift(best))
