import logging
import itertools
import numpy as np
import pandas as pd
import sympy
from sympy.parsing.sympy_parser import parse_expr
from tqdm import tqdm
### Module imports ###
import sys
sys.path.append('../../')
from common.errors import UnsupportedParameterError
from common.utility import readTable, parseComplex
from modules.moebius.MoebiusMap import axis_complex_distance
from modules.moebius.ParameterSpace import TraceParams, realize
from modules.arithmetic.RootProfile import Z, TRANSFORMS, IntPolynomial, poly_discriminant, square_cofactor

LOGGER = logging.getLogger('kleinian')

BETA = sympy.Symbol('beta')
INTEGER_TOL = 1e-6
EXACT_TOL = 1e-9
DELTA_TOL = 5e-4
FIELD_COEFF = 6
MATCH_STATUSES = ("root_match", "symmetric_match", "corrected_match", "field_match", "quadratic_match", "rational")

# tables of (gamma, minimal polynomial) pairs at a fixed beta, with beta' = -4
POLYNOMIAL_TABLES = {
    "plane23": {"beta": sympy.Integer(-3), "delta": False},
    "gamma3": {"beta": sympy.Integer(-3), "delta": True},
    "gamma4": {"beta": sympy.Integer(-2), "delta": True},
    "gamma5": {"beta": -4*sympy.sin(sympy.pi/5)**2, "delta": True},
}
TABLE_IDS = tuple(POLYNOMIAL_TABLES) + ("pq6", "noncompact")


class TableReport:
    """
    Row by row verdicts for one shipped table
    """

    def __init__(self, table_id, frame):
        self.table_id = table_id
        self.frame = frame

    @property
    def match_rate(self):
        if len(self.frame) == 0:
            return 1.0
        return float(self.frame.status.isin(MATCH_STATUSES).mean())

    def errata(self):
        """
        Rows whose printed data needed any reinterpretation, as a list of dicts
        """
        flagged = self.frame[(self.frame.status != "root_match") & (self.frame.status != "rational")
                             | (self.frame.erratum != "") | (self.frame.delta_ok == False)
                             | (self.frame.discriminant_ok == False)]
        return flagged.to_dict(orient="records")

    def toDict(self):
        return {"table": self.table_id, "rows": len(self.frame), "match_rate": self.match_rate,
                "counts": self.frame.status.value_counts().sort_index().to_dict(),
                "errata": self.errata()}


def _tolerance(token):
    token = token.lstrip('+-')
    if '.' not in token:
        return INTEGER_TOL
    return 1.5*10**(-len(token.split('.')[1]))


def printed_tolerance(text):
    """
    Per component tolerance of a printed complex number, 1.5 units of its last printed digit

    Example: printed_tolerance("-1.5+.6066i") -> (0.15, 0.00015)
    """
    s = str(text).replace(' ', '')
    if s.endswith(('i', 'j')):
        body = s[:-1]
        cut = max(body.rfind('+'), body.rfind('-'))
        if cut > 0:
            reTok, imTok = body[:cut], body[cut:]
        else:
            reTok, imTok = '', body
    else:
        reTok, imTok = s, ''
    return _tolerance(reTok), _tolerance(imTok)


def _isExact(text):
    return any(key in text for key in ("I", "sqrt", "("))


def read_gamma(text):
    """
    The tabulated gamma and its (real, imaginary) tolerance
    """
    text = str(text)
    if _isExact(text):
        value = complex(sympy.N(parse_expr(text, transformations=TRANSFORMS), 30))
        return value, (EXACT_TOL, EXACT_TOL)
    return parseComplex(text), printed_tolerance(text)


def _polyRoots(text, beta):
    """
    Numeric roots of a printed polynomial in z (and beta), None when it does not parse
    """
    if not text:
        return None
    try:
        expr = parse_expr(str(text), local_dict={'z': Z, 'beta': BETA}, transformations=TRANSFORMS)
        coef = sympy.Poly(sympy.expand(expr.subs(BETA, beta)), Z).all_coeffs()
    except (SyntaxError, TypeError, sympy.PolynomialError, sympy.SympifyError):
        return None
    coef = [complex(sympy.N(c, 30)) for c in coef]
    if len(coef) < 2:
        return None
    return np.roots(coef)


def _nearest(roots, gamma, tol):
    """
    The root matching gamma within the per component tolerance, None if there is none
    """
    if roots is None or len(roots) == 0:
        return None
    ok = (np.abs(roots.real - gamma.real) <= tol[0]) & (np.abs(roots.imag - gamma.imag) <= tol[1])
    if not np.any(ok):
        return None
    idx = np.flatnonzero(ok)
    return complex(roots[idx[np.argmin(np.abs(roots[idx] - gamma))]])


def _delta(root, beta):
    f, g = realize(TraceParams(root, beta, -4))
    return axis_complex_distance(f, g).delta


def _polynomialRow(row, beta, betaValue, withDelta):
    gamma, tol = read_gamma(row.gamma)
    printed = _polyRoots(row.polynomial, beta)
    root = _nearest(printed, gamma, tol)
    status = "root_match"
    if root is None and printed is not None:
        root = _nearest(betaValue - printed, gamma, tol)
        status = "symmetric_match"
    if root is None:
        root = _nearest(_polyRoots(row.get("corrected_polynomial", ""), beta), gamma, tol)
        status = "corrected_match"
    if root is None:
        status = "mismatch"
    out = {"index": int(row["index"]), "gamma": row.gamma, "polynomial": row.polynomial,
           "status": status, "root": root, "delta_ok": None, "discriminant_ok": None,
           "erratum": row.get("erratum", "")}

    if withDelta and root is not None and row.delta != "":
        computed = _delta(root, betaValue)
        out["delta_computed"] = computed
        out["delta_ok"] = bool(abs(computed - float(row.delta)) <= DELTA_TOL)

    if row.get("discriminant", "") != "" and status in ("root_match", "corrected_match"):
        text = row.corrected_polynomial if status == "corrected_match" else row.polynomial
        disc = poly_discriminant(IntPolynomial.parse(text))
        out["discriminant_ok"] = square_cofactor(disc, int(row.discriminant)) is not None
    return out


def _fieldMatch(gamma, tol, fieldText):
    """
    Smallest integer vector (a, b, c) with gamma = a + b rho + c rho^2 for a root rho of the field polynomial
    """
    roots = _polyRoots(fieldText, 0)
    degree = len(roots)
    rng = range(-FIELD_COEFF, FIELD_COEFF + 1)
    best = None
    for coeffs in itertools.product(rng, repeat=min(degree, 3)):
        for rho in roots:
            value = sum(c*rho**k for k, c in enumerate(coeffs))
            if abs(value.real - gamma.real) <= tol[0] and abs(value.imag - gamma.imag) <= tol[1]:
                key = (sum(abs(c) for c in coeffs), coeffs)
                if best is None or key < best[0]:
                    best = (key, coeffs, complex(rho))
    return None if best is None else (best[1], best[2])


def _pq6Row(row):
    gamma, tol = read_gamma(row.gamma)
    out = {"index": int(row["index"]), "gamma": row.gamma, "polynomial": row.field_polynomial,
           "status": "mismatch", "root": None, "delta_ok": None, "discriminant_ok": None, "erratum": ""}
    if abs(gamma.imag) <= tol[1] and abs(gamma.real - round(gamma.real)) <= tol[0]:
        out["status"] = "rational"
        return out
    root = _nearest(_polyRoots(row.field_polynomial, 0), gamma, tol)
    if root is not None:
        out.update(status="root_match", root=root)
        return out
    match = _fieldMatch(gamma, tol, row.field_polynomial)
    if match is not None:
        coeffs, rho = match
        out.update(status="field_match", root=rho, field_coefficients=list(coeffs),
                   erratum="gamma lies in the field of the printed polynomial, not among its roots")
    return out


def _noncompactRow(row):
    expr = parse_expr(row.gamma, transformations=TRANSFORMS)
    out = {"index": int(row["index"]), "gamma": row.gamma, "polynomial": "",
           "status": "mismatch", "root": complex(sympy.N(expr, 30)), "delta_ok": None,
           "discriminant_ok": None, "erratum": ""}
    minimal = sympy.Poly(sympy.minimal_polynomial(expr, Z), Z)
    out["polynomial"] = str(minimal.as_expr()).replace('**', '^').replace(' ', '')
    if minimal.degree() == 1:
        out["status"] = "rational"
    elif minimal.degree() == 2:
        _, b, c = minimal.all_coeffs()
        ratio = sympy.Rational(b*b - 4*c, -int(row.d))
        num, den = ratio.p, ratio.q
        if ratio > 0 and sympy.sqrt(num).is_integer and sympy.sqrt(den).is_integer:
            out["status"] = "quadratic_match"
    return out


def verify_table(table_id, verbose=False):
    """
    Checks every row of a shipped arithmetic table against its printed polynomial

    Polynomial tables accept a root of the printed polynomial, then a root of its
    image under gamma -> beta - conj(gamma), then a root of the corrected polynomial.
    The p = q = 6 table pairs gamma with its field polynomial and the non-compact
    table with the discriminant of its quadratic field.

    Input:
        table_id: one of plane23, gamma3, gamma4, gamma5, pq6, noncompact
        verbose: progress bar over rows

    Output:
        report: TableReport
    """
    if table_id not in TABLE_IDS:
        raise UnsupportedParameterError("Unknown table {0}, expected one of {1}".format(table_id, TABLE_IDS))
    df = readTable(table_id)
    rows = tqdm(list(df.iterrows()), desc=table_id, disable=not verbose)
    if table_id in POLYNOMIAL_TABLES:
        spec = POLYNOMIAL_TABLES[table_id]
        betaValue = float(sympy.N(spec["beta"], 30))
        records = [_polynomialRow(row, spec["beta"], betaValue, spec["delta"]) for _, row in rows]
    elif table_id == "pq6":
        records = [_pq6Row(row) for _, row in rows]
    else:
        records = [_noncompactRow(row) for _, row in rows]

    frame = pd.DataFrame(records)
    report = TableReport(table_id, frame)
    for e in report.errata():
        LOGGER.warning("{0} row {1}: {2}{3}".format(table_id, e["index"], e["status"],
                                                     " ({0})".format(e["erratum"]) if e["erratum"] else ""))
    LOGGER.info("{0}: {1:.1%} of {2} rows match".format(table_id, report.match_rate, len(frame)))
    return report
