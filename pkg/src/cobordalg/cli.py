"""Command-line front end.

    cobordalg fgl --max-weight 4 --format csv
    cobordalg log --max-weight 3
    cobordalg structure-constants --max-weight 4
    cobordalg verify --suite all --max-weight 6
    cobordalg product-check spec.json

Exit codes: 0 success, 1 a verification failed, 2 bad usage or config.
Output depends only on the arguments (the default seed is 0).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import sympy

from . import products as P
from .divdiff import (evaluation_op, lemma12_op, lemma13_op, multiplicative_fgl_op, newton_op,
                      polynomial_carrier, reflection_op, translation_op)
from .formal_group import dumps_table, lambda_lattice, lambda_membership, log_pair, universal_fgl
from .hopf import dual_to_json, dual_variables, structure_constants_json
from .milnor import PhiRecoveryError, PhiSeries, recover_phi, stable_product_eval
from .series import DUAL_PREFIX, GradedSeries
from .verify import SUITES, report

MAX_SAFE_WEIGHT = 12
DEFAULT_SEED = 0


class UsageError(Exception):
    """Bad arguments or an unreadable spec file (exit code 2)."""


def _dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _csv(rows):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(rows)
    return out.getvalue()


def _check_weight(args, low=1):
    W = args.max_weight
    if W < low:
        raise UsageError(f"--max-weight must be at least {low}")
    if W > MAX_SAFE_WEIGHT and not args.unsafe:
        raise UsageError(f"--max-weight above {MAX_SAFE_WEIGHT} needs --unsafe")
    return W


# -- table commands ---------------------------------------------------------


def cmd_fgl(args):
    W = _check_weight(args)
    table = universal_fgl(W)
    if args.format == "csv":
        return dumps_table(table, "csv"), 0
    lat = lambda_lattice(W)
    coords = {}
    for key in table.keys():
        m = lambda_membership(table.entry(*key), lat)
        if m.member:
            coords[key] = m.describe()
    return dumps_table(table, "json", coords) + "\n", 0


def cmd_log(args):
    W = _check_weight(args)
    lp = log_pair(W)
    rows = {"exp": [], "log": []}
    for k in range(1, W + 1):
        rows["exp"].append({"k": k, "poly": dual_to_json(lp.exp_coefficient(k + 1), W)})
        rows["log"].append({"k": k, "poly": dual_to_json(lp.log_coefficient(k + 1), W)})
    if args.format == "csv":
        lines = [["series", "k", "mono", "coef"]]
        for name in ("exp", "log"):
            for row in rows[name]:
                for t in row["poly"]:
                    lines.append([name, row["k"], " ".join(map(str, t["mono"])), t["coef"]])
        return _csv(lines), 0
    return _dumps({"truncation": W, "exp": rows["exp"], "log": rows["log"],
                   "round_trip": lp.round_trip()}), 0


def cmd_structure_constants(args):
    W = _check_weight(args, 0)
    rows = structure_constants_json(W)
    if args.format == "csv":
        lines = [["a", "b", "w", "coef"]]
        for row in rows:
            for t in row["product"]:
                lines.append([" ".join(map(str, row["a"])), " ".join(map(str, row["b"])),
                              " ".join(map(str, t["w"])), t["coef"]])
        return _csv(lines), 0
    return _dumps({"max_weight": W, "rows": rows}), 0


# -- verify -----------------------------------------------------------------


def cmd_verify(args):
    W = _check_weight(args, 0)
    rep = report(args.suite, W, args.seed)
    code = 0 if rep["pass"] else 1
    if args.format == "csv":
        lines = [["suite", "name", "weight", "pass"]]
        for section in rep["sections"]:
            for c in section["checks"]:
                lines.append([section["suite"], c["name"], c["weight"], int(c["pass"])])
        return _csv(lines), code
    return _dumps(rep), code


# -- product-check ----------------------------------------------------------


def _symbol(name):
    return name.replace(DUAL_PREFIX, "s_")


def parse_element(text, variables):
    """A polynomial given as text, over the named variables (``s*k`` is written ``s_k``)."""
    if isinstance(text, (int, float)):
        text = str(text)
    if not isinstance(text, str):
        raise UsageError(f"expected a polynomial string, got {text!r}")
    names = [n for n, _ in variables]
    syms = {_symbol(n): sympy.Symbol(_symbol(n)) for n in names}
    try:
        expr = sympy.parse_expr(text, local_dict=dict(syms), evaluate=True)
        poly = sympy.Poly(sympy.expand(expr), *syms.values(), domain="QQ")
    except (sympy.SympifyError, SyntaxError, TypeError, sympy.polys.polyerrors.PolynomialError,
            sympy.polys.polyerrors.CoercionFailed) as exc:
        raise UsageError(f"cannot parse {text!r} over {names}: {exc}")
    terms = {tuple(int(k) for k in e): Fraction(int(c.p), int(c.q))
             for e, c in poly.as_dict().items()}
    return GradedSeries(tuple(variables), terms, None)


def _dual(text, W):
    return parse_element(text, dual_variables(W)).drop_unused()


def build_operator(spec):
    if not isinstance(spec, dict) or "type" not in spec:
        raise UsageError(f"operator spec needs a 'type': {spec!r}")
    kind = spec["type"]
    if kind == "newton":
        return newton_op(spec.get("x", "x"), spec.get("y", "y"))
    if kind == "evaluation":
        return evaluation_op(spec.get("var", "a"))
    if kind == "reflection":
        return reflection_op(spec["xi"], spec.get("variant", "i"))
    if kind == "translation":
        var = spec.get("var", "x")
        carrier = polynomial_carrier([var])
        return translation_op(parse_element(spec["alpha"], carrier.variables),
                              Fraction(str(spec.get("psi", 1))), var, carrier)
    if kind == "identity":
        carrier = polynomial_carrier(spec["variables"])
        return P.identity_projector(carrier, parse_element(spec["alpha"], carrier.variables))
    if kind == "multiplicative_fgl":
        return multiplicative_fgl_op(int(spec.get("truncation", 7)))
    if kind in ("lemma12", "lemma13"):
        T = int(spec.get("truncation", 8))
        alpha = _dual(spec["alpha"], T)
        if kind == "lemma12":
            return lemma12_op(int(spec["n"]), alpha, [_dual(a, T) for a in spec.get("a", [])], T)
        return lemma13_op(int(spec["n"]), alpha, T)
    raise UsageError(f"unknown operator type {kind!r}")


def _check_carrier(spec, carrier):
    want = spec.get("carrier")
    if not want:
        return
    names = want.get("variables") if isinstance(want, dict) else None
    if names is not None and list(names) != [n for n, _ in carrier.op_variables]:
        raise UsageError(f"carrier variables {names} do not match the operators' "
                         f"{[n for n, _ in carrier.op_variables]}")


def _witness(check):
    return check.get("witness")


def product_check(spec):
    """Evaluate a declarative product spec; returns ``(report, ok)``."""
    if not isinstance(spec, dict):
        raise UsageError("spec must be a JSON object")
    construction = spec.get("construction")
    params = spec.get("params", {})
    if not isinstance(params, dict):
        raise UsageError("'params' must be an object")
    try:
        W = int(spec.get("check_weight", 4))
    except (TypeError, ValueError):
        raise UsageError("'check_weight' must be an integer")
    if W < 0 or W > MAX_SAFE_WEIGHT:
        raise UsageError(f"'check_weight' must lie in 0..{MAX_SAFE_WEIGHT}")
    try:
        if construction == "mu1":
            op1, op2 = build_operator(params["pi1"]), build_operator(params["pi2"])
            _check_carrier(spec, op1.carrier)
            cert = P.theorem1_certificate(op1, op2, W)
            assoc = cert["associative"]
            return {"certificate": cert, "associative": assoc["pass"],
                    "witness": _witness(assoc)}, cert["ok"]
        if construction == "mu2":
            op = build_operator(params["operator"])
            _check_carrier(spec, op.carrier)
            beta = parse_element(params.get("beta", "0"), op.carrier.variables)
            cert = P.theorem2_certificate(op, beta, W)
            assoc = cert["associative"]
            return {"certificate": cert, "associative": assoc["pass"],
                    "witness": _witness(assoc)}, cert["ok"]
        if construction == "mu3":
            model = params.get("model", "conner_floyd")
            if model == "conner_floyd":
                Pi, delta = P.conner_floyd_model(int(params.get("k", 1)), W)
            elif model == "degenerate":
                Pi, delta = P.degenerate_model(build_operator(params["operator"]))
            else:
                raise UsageError(f"unknown mu3 model {model!r}")
            cert = P.theorem3_certificate(Pi, delta, W)
            assoc = cert["associative"]
            return {"certificate": cert, "associative": assoc["pass"],
                    "witness": _witness(assoc)}, cert["ok"]
        if construction == "phi":
            phi = PhiSeries.from_json(params["phi"])
            try:
                back = recover_phi(lambda u, v: stable_product_eval(phi, u, v),
                                   phi.truncation, verify=2, seed=int(params.get("seed", 0)))
                ok = back == phi
                cert = {"round_trip": ok, "recovered": back.to_json()}
            except PhiRecoveryError as exc:
                ok, cert = False, {"round_trip": False, "error": str(exc)}
            return {"certificate": cert, "associative": None, "witness": None}, ok
    except KeyError as exc:
        raise UsageError(f"missing parameter {exc}")
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc))
    raise UsageError(f"'construction' must be mu1, mu2, mu3 or phi, got {construction!r}")


def cmd_product_check(args):
    try:
        with open(args.spec) as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.spec}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.spec}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    rep, ok = product_check(spec)
    return _dumps(rep), 0 if ok else 1


# -- entry point ------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-weight", type=int, default=4)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--out", help="write to this file instead of standard output")
    common.add_argument("--unsafe", action="store_true",
                        help=f"allow --max-weight above {MAX_SAFE_WEIGHT}")
    parser = argparse.ArgumentParser(prog="cobordalg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("fgl", parents=[common], help="universal formal group coefficients")
    sub.add_parser("log", parents=[common], help="logarithm and exponential coefficients")
    sub.add_parser("structure-constants", parents=[common], help="products of basis elements")
    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p = sub.add_parser("product-check", parents=[common], help="check a product spec file")
    p.add_argument("spec")
    return parser


COMMANDS = {"fgl": cmd_fgl, "log": cmd_log, "structure-constants": cmd_structure_constants,
            "verify": cmd_verify, "product-check": cmd_product_check}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
