import logging
import math
import sympy
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import UnsupportedParameterError
from common.utility import readTable
from modules.moebius.MoebiusMap import beta_of_order
from modules.triangle.FreeProduct import parseOrder
from modules.triangle.TriangleTrig import TriangleAngles
from modules.triangle.Margulis import margulis_general

LOGGER = logging.getLogger('kleinian')

TABLE_TOL = 5e-4
GROUP_ORDER = ("A4", "S4", "A5")
# pairs of orders whose axes can meet on the sphere at infinity
IDEAL_PAIRS = [(2, 2), (2, 3), (2, 4), (2, 6), (3, 3), (3, 6), (4, 4), (6, 6)]


def evalExact(text):
    """
    Float value of an exact expression such as "asin(sqrt(2/3))" or "pi/2"
    """
    return float(sympy.N(sympy.sympify(str(text)), 30))


class AngleTableEntry:
    """
    One angle at which axes of elliptics of orders p and q can meet
    """

    def __init__(self, orders, sin_expr, theta, psi, group, source="table", theta_printed=None, erratum=""):
        self.orders = tuple(orders)
        self.sin_expr = str(sin_expr)
        self.sin_theta = evalExact(sin_expr)
        self.theta = float(theta)
        self.psi = float(psi)
        self.group = group
        self.source = source
        self.theta_printed = theta_printed
        self.erratum = erratum

    def __repr__(self):
        return "AngleTableEntry({0}, theta={1:.6f}, {2})".format(self.orders, self.theta, self.group)

    def toDict(self):
        return {"orders": list(self.orders), "sin_theta": self.sin_expr, "sin_theta_value": self.sin_theta,
                "theta": self.theta, "psi": self.psi, "group": self.group, "source": self.source,
                "theta_printed": self.theta_printed, "erratum": self.erratum}


def _pairKey(pair):
    p, q = [parseOrder(n) for n in pair]
    return tuple(sorted((p, q)))


def spherical_axis_angles(pair, group=None, m=2):
    """
    All tabulated angles at which axes of orders pair = (p, q) meet in a discrete group

    Input:
        pair: (p, q) in either order
        group: Optional group name filter (A4, S4, A5, D3, ...)
        m: denominator of the angles k pi/m listed for two half turn axes

    Output:
        entries: list of AngleTableEntry
    """
    p, q = _pairKey(pair)
    entries = []
    df = readTable('spherical_angles')
    for _, row in df[(df.p.astype(int) == p) & (df.q.astype(int) == q)].iterrows():
        s = evalExact(row.sin_theta)
        theta = math.asin(min(1.0, s))
        if row.obtuse == '1':
            theta = math.pi - theta
        entries.append(AngleTableEntry((p, q), row.sin_theta, theta, evalExact(row.psi), row.group,
                                       row.source, row.theta_printed, row.erratum))

    if p == 2 and q == 2:
        for k in range(1, m):
            entries.append(AngleTableEntry((2, 2), "sin({0}*pi/{1})".format(k, m), k*math.pi/m, k*math.pi/m,
                                           "D{0}".format(m), "remark"))
    elif p == 2 and not math.isinf(q) and not any(abs(e.theta - math.pi/2) < 1e-12 for e in entries):
        entries.append(AngleTableEntry((2, q), "1", math.pi/2, math.pi/2, "D{0}".format(q), "dihedral"))

    if (p, q) in IDEAL_PAIRS:
        entries.append(AngleTableEntry((p, q), "0", 0.0, math.pi - math.pi/p - math.pi/q, "ideal", "remark"))

    if group is not None:
        entries = [e for e in entries if e.group == group]
    if not entries:
        raise UnsupportedParameterError("No tabulated angles for orders ({0}, {1}){2}".format(
            p, q, "" if group is None else " in " + group))
    return entries


def elementary_gammas(p, q, m=2):
    """
    Values gamma = (beta_p beta_q / 4)(-sin^2 theta) of intersecting axes at the tabulated angles

    Angles theta and pi - theta give the same gamma and are listed once. Axes meeting
    at infinity give gamma = 0 and are left out.

    Output:
        values: list of (gamma, group) sorted by gamma
    """
    p, q = _pairKey((p, q))
    scale = beta_of_order(p)*beta_of_order(q)/4
    seen = {}
    for e in spherical_axis_angles((p, q), m=m):
        if e.theta == 0:
            continue
        g = -scale*math.sin(e.theta)**2
        key = round(g, 9)
        if key not in seen:
            seen[key] = (complex(g), e.group)
    return [seen[k] for k in sorted(seen)]


def _pairName(pairKind):
    if isinstance(pairKind, str):
        names = pairKind.replace(",", "-").split("-")
    else:
        names = list(pairKind)
    names = [n.strip().upper() for n in names]
    if len(names) != 2 or any(n not in GROUP_ORDER for n in names):
        raise UnsupportedParameterError("Unknown spherical pair {0}".format(pairKind))
    names.sort(key=GROUP_ORDER.index)
    return "-".join(names)


def spherical_point_distance_lookup(pairKind, index):
    """
    Tabulated (order, distance) for the index-th closest pair of spherical points

    Input:
        pairKind: "A4-S4" or ("A4", "S4"), in either order
        index: 1-based row of that pair

    Output:
        order: order of the elliptic through both points, a tuple when the table lists two
        distance: hyperbolic distance between the points
    """
    name = _pairName(pairKind)
    df = readTable('spherical_point_distances')
    rows = df[df.pair == name]
    if not 1 <= int(index) <= len(rows):
        raise UnsupportedParameterError("Index {0} out of range for {1} (1..{2})".format(index, name, len(rows)))
    row = rows[rows['index'].astype(int) == int(index)].iloc[0]
    orders = tuple(int(o) for o in row.order.split("|"))
    return (orders[0] if len(orders) == 1 else orders), float(row.distance)


def margulis_table(family=None):
    """
    The shipped Margulis constant tables with computed values alongside the printed ones

    Input:
        family: Optional family filter, one of pqr, 233, 234, 235, 236, 244

    Output:
        df: DataFrame with numeric angle columns, computed value, difference and mismatch flag;
            a mismatch without a recorded erratum gets an "unexplained mismatch" one
    """
    df = readTable('margulis_triangles')
    if family is not None:
        df = df[df.family == str(family)].copy()
        if df.empty:
            raise UnsupportedParameterError("Unknown Margulis table family {0}".format(family))
    computed = []
    for _, row in df.iterrows():
        angles = TriangleAngles(evalExact(row.a12), evalExact(row.a13), evalExact(row.a23))
        computed.append(margulis_general((int(row.n1), int(row.n2), int(row.n3)), angles))
    df = df.assign(computed=computed)
    df["difference"] = df.computed - df.m_printed.astype(float)
    df["mismatch"] = df.difference.abs() > TABLE_TOL
    unexplained = df.mismatch & (df.erratum == "")
    if unexplained.any():
        df.loc[unexplained, "erratum"] = ["unexplained mismatch (computed {0:.4f})".format(v) for v in
                                          df.computed[unexplained]]
    for _, row in df[df.mismatch].iterrows():
        LOGGER.warning("Margulis table {0} row {1}: printed {2}, computed {3:.6f}{4}".format(
            row.family, row['index'], row.m_printed, row.computed,
            " ({0})".format(row.erratum) if row.erratum else ""))
    return df


def nontriangle_table():
    """
    Lower bounds for two half turns meeting an axis of order n, shipped as data
    """
    df = readTable('margulis_nontriangles')
    df["constant_value"] = df.constant.astype(float)
    return df
