import argparse
import configparser
import json
import logging
import os
import sys

import pandas as pd
import sympy

from common.errors import KleinianError, UnsupportedParameterError
from common.utility import (readConfig, writeConfig, getSetting, set_logging, threadCount, dumpJson,
                            toJsonable, parseComplex, parseFloatList, writeCsv, readTable, listTables,
                            verifyChecksums, ROOT_DIR, SCHEMA_VERSION)
from modules.moebius.MoebiusMap import classify, axis_complex_distance
from modules.moebius.ParameterSpace import (TraceParams, realize, extract_params, parameter_symmetries,
                                            project_to_two_generator_subgroup, chebyshev_action)
from modules.words.GroupWord import asWord, compose_words, evaluate_gamma, good_word_family
from modules.words.TracePolynomial import trace_polynomial, order42_identities
from modules.exclusion.SliceRaster import SliceSpec, rasterize_slice, marked_from_table
from modules.triangle.Margulis import (margulis_ideal, margulis_triangle, margulis_222,
                                       numeric_margulis_oracle)
from modules.triangle.ReferenceTables import margulis_table, evalExact
from modules.arithmetic.RootProfile import IntPolynomial, poly_discriminant, square_cofactor, schur_bound, schur_bound_oracle
from modules.arithmetic.ArithmeticScreen import arithmeticity_check
from modules.arithmetic.Enumerate import enumerate_candidates, enumerate_parabolic_candidates
from modules.arithmetic.VerifyTables import verify_table, TABLE_IDS
from modules.volume.VolumeBounds import (TubeSpec, tube_volume, ball_volume_bound, c_p, kill_holonomy,
                                         collar_bound_from_beta, high_torsion_report, sharpness_witness)

LOGGER = logging.getLogger('kleinian')

# options whose values may start with a minus sign, e.g. --window -4,4,-3,3
VALUE_FLAGS = ("--gamma", "--beta", "--beta-prime", "--window", "--theta", "--marked", "--angles")


class CommandResult:
    """
    What a subcommand produced: the JSON payload, the text summary and the exit code
    """

    def __init__(self, result, text, code=0, artifacts=None):
        self.result = result
        self.text = text
        self.code = code
        self.artifacts = artifacts or []


def _joinValues(argv):
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith('-'):
            out.append("{0}={1}".format(argv[i], argv[i + 1]))
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def _polyText(expr):
    return str(sympy.expand(expr)).replace('**', '^').replace(' ', '')


def _loadConfig(configFile):
    if configFile is not None:
        return readConfig(None, configFile=configFile)
    default = os.path.join(ROOT_DIR, 'settings.ini')
    if os.path.isfile(default):
        return readConfig(ROOT_DIR)
    return configparser.ConfigParser(inline_comment_prefixes='#')


def _params(args, config):
    gam = args["gamma"] if args["gamma"] is not None else getSetting(config, 'Moebius', 'gamma', str, '1+1i')
    b = args["beta"] if args["beta"] is not None else getSetting(config, 'Moebius', 'beta', str, '0')
    bp = args["beta_prime"] if args["beta_prime"] is not None else getSetting(config, 'DEFAULT', 'beta_prime', str, '-4')
    return TraceParams(parseComplex(gam), parseComplex(b), parseComplex(bp))


def _require(args, *keys):
    missing = [k for k in keys if args.get(k) is None]
    if missing:
        raise UnsupportedParameterError("Missing required option(s): {0}".format(
            ", ".join("--" + k.replace('_', '-') for k in missing)))


def _intBeta(value):
    z = parseComplex(value)
    if z.imag == 0 and z.real == int(z.real):
        return int(z.real)
    return z


### Subcommands ###

def cmd_params(args, config):
    params = _params(args, config)
    action = args["action"]
    if action == "realize":
        f, g = realize(params)
        check = extract_params(f, g)
        try:
            dist = axis_complex_distance(f, g)
        except KleinianError as e:
            LOGGER.info("No axis distance: {0}".format(e))
            dist = None
        result = {"params": params, "f": f, "g": g, "recovered": check, "axis_distance": dist}
        text = "f = {0}\ng = {1}".format(f, g)
    elif action == "classify":
        f, g = realize(params)
        result = {"params": params, "f": classify(f), "g": classify(g), "fg": classify(f.compose(g))}
        text = "f: {0}, g: {1}, fg: {2}".format(result["f"].tag, result["g"].tag, result["fg"].tag)
    elif action == "symmetries":
        result = parameter_symmetries(params)
        text = "\n".join(repr(p) for p in result)
    elif action == "project":
        result = project_to_two_generator_subgroup(params)
        text = "\n".join(repr(p) for p in result)
    else:
        _require(args, "n")
        result = chebyshev_action(params, args["n"])
        text = repr(result)

    if args["save"]:
        cfg = args["config"]
        writeConfig(ROOT_DIR if cfg is None else os.path.dirname(os.path.abspath(cfg)),
                    [("Moebius", "gamma", args["gamma"] or getSetting(config, 'Moebius', 'gamma', str, '1+1i')),
                     ("Moebius", "beta", args["beta"] or getSetting(config, 'Moebius', 'beta', str, '0'))],
                    cfgFile=cfg)
    return CommandResult(result, text)


def cmd_word(args, config):
    action = args["action"]
    seed = getSetting(config, 'DEFAULT', 'seed', int, 0)
    if action == "family":
        n = args["max_syllables"] or getSetting(config, 'Words', 'max_syllables', int, 2)
        words = good_word_family(n)
        return CommandResult([w.toDict() for w in words], "\n".join(w.compact() for w in words))
    if action == "order42":
        _require(args, "selector")
        poly = order42_identities(args["selector"])
        return CommandResult(poly, "p_w = {0}".format(_polyText(poly.to_sympy())))

    _require(args, "word")
    word = asWord(args["word"])
    if action == "parse":
        return CommandResult(word, "{0} ({1})".format(word, word.compact()))
    if action == "good":
        d = word.toDict()
        return CommandResult(d, "strictly good: {0}, good under the involution: {1}".format(
            d["strictly_good"], d["good_under_involution"]))
    if action == "poly":
        poly = trace_polynomial(word, seed=seed)
        result = {"polynomial": poly}
        expr = poly.to_sympy()
        if args["beta"] is not None:
            b = _intBeta(args["beta"])
            restricted = poly.restrict(b) if isinstance(b, int) else None
            expr = restricted.to_sympy() if restricted is not None else expr.subs(sympy.Symbol('beta'), b)
            result["beta"] = b
            result["at_beta"] = _polyText(expr)
        return CommandResult(result, "p_w = {0}".format(_polyText(expr)))
    if action == "compose":
        _require(args, "word2")
        product, strict = compose_words(word, args["word2"])
        p = trace_polynomial(word, seed=seed).compose(trace_polynomial(args["word2"], seed=seed))
        result = {"word": product, "strictly_good": strict, "polynomial": p}
        return CommandResult(result, "{0}\np_w = {1}".format(product.compact(), _polyText(p.to_sympy())))
    # eval
    params = _params(args, config)
    value = evaluate_gamma(word, params)
    poly = trace_polynomial(word, seed=seed)
    result = {"params": params, "gamma_word": value, "polynomial_value": complex(poly.evaluate(params.gamma, params.beta))}
    return CommandResult(result, "gamma(f, w(g, f)) = {0}".format(value))


def _marked(text):
    if text is None:
        return None
    return [parseComplex(v) for v in text.split(';') if v.strip()]


def cmd_slice(args, config):
    beta = args["beta"] if args["beta"] is not None else getSetting(config, 'Slice', 'beta', str, '0')
    bp = args["beta_prime"] if args["beta_prime"] is not None else getSetting(config, 'DEFAULT', 'beta_prime', str, '-4')
    window = parseFloatList(args["window"] or getSetting(config, 'Slice', 'window', str, '-4,4,-3,3'))
    if len(window) != 4:
        raise UnsupportedParameterError("Window needs four numbers xmin,xmax,ymin,ymax")
    res = (args["res"] or getSetting(config, 'Slice', 'resolution', str, '800x600')).lower().split('x')
    if len(res) != 2:
        raise UnsupportedParameterError("Resolution must look like 800x600")
    depth = args["depth"] if args["depth"] is not None else getSetting(config, 'Exclusion', 'depth', int, 2)
    out = args["out"] or os.path.join(getSetting(config, 'Output', 'out_dir', str, '.'), 'slice.ppm')

    marked = _marked(args["marked"]) or []
    if args["marked_table"]:
        marked += marked_from_table(args["marked_table"])
    spec = SliceSpec(parseComplex(beta), window, res, parseComplex(bp), depth=depth, marked=marked)
    raster = rasterize_slice(spec, n_jobs=args["threads"] or threadCount(), verbose=args["verbose"])
    sidecar = raster.write_ppm(out)
    counts = raster.counts()
    text = "Wrote {0} and {1}: {2}".format(out, sidecar, ", ".join("{0}={1}".format(k, v) for k, v in sorted(counts.items())))
    return CommandResult({"image": out, "sidecar": sidecar, "raster": raster}, text, artifacts=[out, sidecar])


def _orders(text):
    parts = [p.strip() for p in str(text).split(',')]
    if len(parts) != 3:
        raise UnsupportedParameterError("Orders need three comma separated values, got {0}".format(text))
    return parts


def _angles(text):
    parts = [p.strip() for p in str(text).split(',')]
    if len(parts) != 3:
        raise UnsupportedParameterError("Angles need three comma separated values, got {0}".format(text))
    try:
        return [evalExact(p) for p in parts]
    except (sympy.SympifyError, TypeError) as e:
        raise UnsupportedParameterError("Cannot read angles {0}: {1}".format(text, e))


def cmd_margulis(args, config):
    action = args["action"]
    if action == "table":
        df = margulis_table(args["family"])
        records = df.to_dict(orient="records")
        text = "{0} rows, {1} mismatches".format(len(df), int(df.mismatch.sum()))
        return CommandResult(records, text)
    if action == "222":
        _require(args, "angles")
        result = margulis_222(_angles(args["angles"]))
    elif action == "ideal":
        _require(args, "orders")
        result = margulis_ideal(_orders(args["orders"]))
    elif action == "triangle":
        _require(args, "orders", "angles")
        result = margulis_triangle(_orders(args["orders"]), _angles(args["angles"]))
    else:
        _require(args, "orders", "angles")
        result = numeric_margulis_oracle(_orders(args["orders"]), _angles(args["angles"]),
                                         xatol=getSetting(config, 'Margulis', 'oracle_xatol', float, 1e-12),
                                         maxiter=getSetting(config, 'Margulis', 'oracle_maxiter', int, 20000))
    text = "{0:.9f} ({1})".format(result.value, result.method)
    if result.erratum is not None:
        text += "\nerratum: the printed one-vertex formula gives {0:.9f}".format(result.erratum["printed_formula"])
    return CommandResult(result, text)


def cmd_arith(args, config):
    action = args["action"]
    q = args["q"] or getSetting(config, 'Arithmetic', 'q', int, 2)
    if action == "check":
        _require(args, "poly", "beta")
        cand = arithmeticity_check(args["poly"], _intBeta(args["beta"]), q)
        text = "{0}: {1}".format(cand.polynomial, "accepted" if cand.accepted else "rejected ({0})".format(", ".join(cand.reasons())))
        return CommandResult(cand, text)
    if action == "enumerate":
        _require(args, "beta", "degree")
        cands = enumerate_candidates(_intBeta(args["beta"]), args["degree"], q=q,
                                     n_jobs=args["threads"] or threadCount(),
                                     limit=getSetting(config, 'Arithmetic', 'enumeration_limit', int, 50000000),
                                     dedupe=getSetting(config, 'Arithmetic', 'dedupe', bool, True),
                                     cumulative=args["cumulative"], verbose=args["verbose"])
        df = pd.DataFrame([c.toRow() for c in cands],
                          columns=["polynomial", "degree", "coefficients", "gamma_re", "gamma_im", "checks", "accepted", "partner"])
        if args["out"]:
            writeCsv(df, args["out"])
            return CommandResult(cands, "Wrote {0} candidates to {1}".format(len(cands), args["out"]), artifacts=[args["out"]])
        return CommandResult(cands, writeCsv(df).rstrip('\n'))
    if action == "parabolic":
        cands = enumerate_parabolic_candidates(depth=getSetting(config, 'Exclusion', 'depth', int, 2))
        return CommandResult(cands, "\n".join("{0}  gamma = {1:.6f}".format(c.polynomial, c.gamma) for c in cands))
    if action == "discriminant":
        _require(args, "poly")
        P = IntPolynomial.parse(args["poly"])
        disc = poly_discriminant(P)
        result = {"polynomial": P, "discriminant": disc}
        text = "disc = {0}".format(disc)
        if args["fundamental"] is not None:
            f = square_cofactor(disc, args["fundamental"])
            result.update(fundamental=args["fundamental"], square_factor=f)
            text += ", square factor {0}".format(f)
        return CommandResult(result, text)
    # schur
    _require(args, "r")
    bound = schur_bound(args["r"])
    result = bound.toDict()
    if args["oracle"]:
        result["oracle"] = schur_bound_oracle(args["r"])
    return CommandResult(result, "M_{0} = {1} ({2:.12g})".format(bound.r, bound.value, float(bound.value)))


def cmd_volume(args, config):
    action = args["action"]
    if action == "tube":
        _require(args, "p", "tau", "r")
        spec = TubeSpec(args["p"], args["tau"], args["r"], args["involution"])
        value = tube_volume(spec)
        return CommandResult({"spec": spec, "volume": value}, "{0:.12g}".format(value))
    if action == "ball":
        _require(args, "r", "order")
        value = ball_volume_bound(args["r"], args["order"])
        return CommandResult({"r": args["r"], "order": args["order"], "volume": value}, "{0:.12g}".format(value))
    if action == "cp":
        _require(args, "p")
        value = c_p(args["p"])
        return CommandResult({"p": args["p"], "c_p": value}, "{0:.12g}".format(value))
    if action == "kill":
        _require(args, "tau", "theta", "p")
        kill = kill_holonomy(args["tau"], float(args["theta"]), args["p"], args["m_max"])
        return CommandResult(kill, "m={0}, n={1}: {2:.9g} <= {3:.9g}".format(kill.m, kill.n, kill.value, kill.bound))
    if action == "collar":
        _require(args, "beta_abs")
        value = collar_bound_from_beta(args["beta_abs"])
        return CommandResult({"beta_abs": args["beta_abs"], "cosh_delta": value}, "cosh(delta) >= {0:.12g}".format(value))
    if action == "witness":
        _require(args, "p")
        w = sharpness_witness(args["p"], samples=getSetting(config, 'Volume', 'witness_samples', int, 48))
        return CommandResult(w, "ratio {0:.6f} at tau={1:.6g}, theta={2:.6g}".format(w.ratio, w.tau, w.theta))
    _require(args, "p")
    report = high_torsion_report(args["p"])
    text = "volume >= {0:.6f} (balanced at tau={1:.6g})".format(report["bound"], report["balance_tau"])
    if report["caveat"]:
        text += ", {0}".format(report["caveat"])
    return CommandResult(report, text)


def cmd_tables(args, config):
    action = args["action"]
    if action == "list":
        names = listTables()
        return CommandResult(names, "\n".join(names))
    if action == "checksum":
        report = verifyChecksums()
        bad = [k for k, v in report.items() if not v["ok"]]
        text = "all {0} tables match".format(len(report)) if not bad else "mismatch: {0}".format(", ".join(bad))
        return CommandResult(report, text, code=1 if bad else 0)
    _require(args, "table")
    if action == "show":
        df = readTable(args["table"])
        return CommandResult(df.to_dict(orient="records"), writeCsv(df).rstrip('\n'))
    if args["table"] == "margulis_triangles":
        df = margulis_table()
        return CommandResult(df.to_dict(orient="records"), "{0} rows, {1} mismatches".format(len(df), int(df.mismatch.sum())))
    if args["table"] not in TABLE_IDS:
        raise UnsupportedParameterError("Table {0} has no verifier, choose from {1}".format(
            args["table"], TABLE_IDS + ("margulis_triangles",)))
    report = verify_table(args["table"], verbose=args["verbose"])
    return CommandResult(report, "{0}: {1:.1%} of {2} rows match, {3} errata".format(
        report.table_id, report.match_rate, len(report.frame), len(report.errata())))


COMMANDS = {
    "params": (cmd_params, ["realize", "classify", "symmetries", "project", "chebyshev"]),
    "word": (cmd_word, ["parse", "good", "poly", "compose", "eval", "order42", "family"]),
    "slice": (cmd_slice, ["render"]),
    "margulis": (cmd_margulis, ["ideal", "triangle", "222", "oracle", "table"]),
    "arith": (cmd_arith, ["check", "enumerate", "parabolic", "discriminant", "schur"]),
    "volume": (cmd_volume, ["tube", "ball", "cp", "kill", "collar", "high-torsion", "witness"]),
    "tables": (cmd_tables, ["list", "show", "verify", "checksum"]),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action='store_true', help="Print the versioned JSON document")
    common.add_argument("--config", default=None, help="Path to a settings.ini file")
    common.add_argument("-v", "--verbose", action='store_true', help="Log progress")
    common.add_argument("--threads", type=int, default=None, help="Worker count, KLEINIAN_THREADS or all cores by default")

    ap = argparse.ArgumentParser(prog="kleinian", description="Two-generator Kleinian group parameter spaces")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, actions) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common])
        p.add_argument("action", choices=actions)

    p = sub.choices["params"]
    p.add_argument("--gamma", help="Commutator parameter, e.g. 1+1i")
    p.add_argument("--beta", help="beta(f)")
    p.add_argument("--beta-prime", dest="beta_prime", help="beta(g)")
    p.add_argument("--n", type=int, help="Power for the Chebyshev action")
    p.add_argument("--save", action='store_true', help="Store gamma and beta in the settings file")

    p = sub.choices["word"]
    p.add_argument("--word", help="Word over a, b, uppercase for inverses, or a named word")
    p.add_argument("--word2", help="Second word for compose")
    p.add_argument("--gamma")
    p.add_argument("--beta")
    p.add_argument("--beta-prime", dest="beta_prime")
    p.add_argument("--selector", help="Order (4,2) word key or index 1..4")
    p.add_argument("--max-syllables", dest="max_syllables", type=int)

    p = sub.choices["slice"]
    p.add_argument("--beta")
    p.add_argument("--beta-prime", dest="beta_prime")
    p.add_argument("--window", help="xmin,xmax,ymin,ymax")
    p.add_argument("--res", help="WIDTHxHEIGHT")
    p.add_argument("--depth", type=int)
    p.add_argument("--marked", help="Semicolon separated gamma values painted as marked_discrete")
    p.add_argument("--marked-table", dest="marked_table", help="Also mark the gamma column of a shipped table")
    p.add_argument("--out", help="Output PPM path, a JSON sidecar is written next to it")

    p = sub.choices["margulis"]
    p.add_argument("--orders", help="p,q,r")
    p.add_argument("--angles", help="Three angles, exact expressions allowed, e.g. pi/7,pi/3,0")
    p.add_argument("--family", help="Table family filter")

    p = sub.choices["arith"]
    p.add_argument("--poly", help="Integer polynomial in z")
    p.add_argument("--beta")
    p.add_argument("--degree", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--cumulative", action='store_true', help="Enumerate every degree up to --degree")
    p.add_argument("--fundamental", type=int, help="Field discriminant for the square factor")
    p.add_argument("--r", type=int)
    p.add_argument("--oracle", action='store_true', help="Also maximize numerically")
    p.add_argument("--out", help="CSV output path")

    p = sub.choices["volume"]
    p.add_argument("--p", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--theta")
    p.add_argument("--r", type=float)
    p.add_argument("--order", type=int)
    p.add_argument("--involution", action='store_true')
    p.add_argument("--beta-abs", dest="beta_abs", type=float)
    p.add_argument("--m-max", dest="m_max", type=int)

    p = sub.choices["tables"]
    p.add_argument("--table", choices=listTables())
    return ap


def execute(argv):
    """
    Runs one command line and returns the exit code

    Input:
        argv: argument list without the program name

    Output:
        code: 0 on success, 1 on a domain error (JSON on stderr), 2 on a usage error
    """
    try:
        args = vars(build_parser().parse_args(_joinValues(list(argv))))
        set_logging(args["verbose"])
        config = _loadConfig(args["config"])
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    handler = COMMANDS[args["command"]][0]
    try:
        out = handler(args, config)
    except KleinianError as e:
        doc = {"schema_version": SCHEMA_VERSION, "command": "{0} {1}".format(args["command"], args["action"])}
        doc.update(toJsonable(e.toDict()))
        print(json.dumps(doc, sort_keys=True), file=sys.stderr)
        return 1

    if args["json"]:
        print(dumpJson(out.result, "{0} {1}".format(args["command"], args["action"])))
    else:
        print(out.text)
    return out.code


if __name__ == '__main__':
    sys.exit(execute(sys.argv[1:]))
