"""Invariant suites run by ``cobordalg verify``.

Each suite returns a list of check records ``{"name", "weight", "pass", ...}``
in a fixed order.  Nothing here reads the clock or unseeded randomness, so a
report depends only on the suite, the weight and the seed.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from . import products as P
from .divdiff import (compose_divdiff, evaluation_op, formal_group_op, gamma_predicates,
                      kernel_division_equivalence, lemma12_op, lemma13_op, localization_denominators,
                      multiplicative_fgl_op, newton_op, operator_report, partial_squared_is,
                      pi_multiplicativity, pi_squared, polynomial_carrier, random_lambda_params,
                      reflection_op, solve_gamma, translation_op)
from .formal_group import (fgl_from_log, fgl_series, lambda_lattice, lambda_membership, log_pair,
                           universal_fgl)
from .hopf import (MultiIndex, SElement, basis_up_to, coproduct, counit, dual_basis_check, multiply,
                   s, s_star)
from .milnor import act
from .series import GradedSeries, _divides_power_of

SUITES = ("hopf", "fgl", "divdiff", "products")


def _rec(name, weight, passed, witness=None, **detail):
    out = {"name": name, "weight": weight, "pass": bool(passed)}
    if witness is not None:
        out["witness"] = witness
    out.update(detail)
    return out


def _from_check(c, name=None):
    out = c.as_json()
    if name:
        out["name"] = name
    return out


# -- hopf ------------------------------------------------------------------------


def _tensor_left(pairs):
    """``(Delta (x) 1) Delta`` as a mapping of triples."""
    out = {}
    for (a, b), c in pairs.items():
        for (a1, a2), d in coproduct(a).items():
            key = (a1, a2, b)
            out[key] = out.get(key, 0) + c * d
    return out


def _tensor_right(pairs):
    out = {}
    for (a, b), c in pairs.items():
        for (b1, b2), d in coproduct(b).items():
            key = (a, b1, b2)
            out[key] = out.get(key, 0) + c * d
    return out


def coassociativity(W):
    for w in basis_up_to(W):
        d = coproduct(w)
        if _tensor_left(d) != _tensor_right(d):
            return _rec("coassociativity", W, False, list(w))
    return _rec("coassociativity", W, True)


def counit_law(W):
    for w in basis_up_to(W):
        left, right = {}, {}
        for (a, b), c in coproduct(w).items():
            if a == ():
                left[b] = left.get(b, 0) + c
            if b == ():
                right[a] = right.get(a, 0) + c
        if left != {w: 1} or right != {w: 1}:
            return _rec("counit", W, False, list(w))
    return _rec("counit", W, True)


def multiplication_associativity(W):
    basis = basis_up_to(W)
    for a in basis:
        for b in basis_up_to(W - a.weight):
            for c in basis_up_to(W - a.weight - b.weight):
                A, B, C = SElement({a: 1}), SElement({b: 1}), SElement({c: 1})
                if multiply(multiply(A, B), C) != multiply(A, multiply(B, C)):
                    return _rec("multiply_associative", W, False, [list(a), list(b), list(c)])
    return _rec("multiply_associative", W, True)


def commutator_law(N):
    """``[s_(n), s_(m)] = (m - n) s_(n+m)`` for ``n + m <= N``."""
    for n in range(1, N):
        for m in range(1, N - n + 1):
            lhs = s(n) * s(m) - s(m) * s(n)
            rhs = s(n + m) * (m - n)
            if lhs != rhs:
                return _rec("commutator", N, False, [n, m])
    return _rec("commutator", N, True)


def unit_law(W):
    one = SElement({MultiIndex(()): 1})
    for w in basis_up_to(W):
        e = SElement({w: 1})
        if multiply(one, e) != e or multiply(e, one) != e:
            return _rec("unit", W, False, list(w))
    return _rec("unit", W, True)


def hopf_suite(W, seed=0):
    A = min(W, 6)
    return [coassociativity(W), counit_law(W), unit_law(W), multiplication_associativity(A),
            commutator_law(min(W + 1, 7)), _rec("dual_basis", W, dual_basis_check(W)),
            _rec("counit_of_unit", 0, counit(s()) == 1)]


# -- fgl -------------------------------------------------------------------------


def fgl_identities(T):
    """Unit, commutativity and associativity of the universal law through total weight T."""
    f = fgl_series(T, "x", "y")
    X = GradedSeries.gen("x", f.variables, T)
    Y = GradedSeries.gen("y", f.variables, T)
    out = [_rec("fgl_unit", T, (f.compose({"y": Y * 0}) - X).is_zero()),
           _rec("fgl_commutative", T, (f.compose({"x": Y, "y": X}) - f).is_zero())]
    g = fgl_series(T, "u", "v")
    z = GradedSeries.gen("z", (("z", 1),), T)
    left = g.compose({"u": f, "v": z})
    right = g.compose({"u": X, "v": g.compose({"u": Y, "v": z})})
    out.append(_rec("fgl_associative", T, (left - right).is_zero()))
    return out


def log_annihilation(W):
    """``s_w(log x) = 0`` for every ``0 < |w| <= W``."""
    lp = log_pair(W)
    g = lp.log.with_truncation(2 * W + 1)
    for w in basis_up_to(W):
        if w.weight == 0:
            continue
        v = act(SElement({w: 1}), g)
        if not v.is_zero():
            return _rec("log_annihilation", W, False, list(w))
    return _rec("log_annihilation", W, True)


def fgl_suite(W, seed=0):
    u, v = universal_fgl(W), fgl_from_log(W)
    out = [_rec("routes_agree", W, u == v, None if u == v else [list(k) for k in u.mismatches(v)])]
    out += fgl_identities(min(2 * W + 1, 7))
    out.append(_rec("alpha_11", 1, (u.entry(1, 1) - s_star(1) * 2).is_zero()))
    if W >= 2:
        expect = s_star(2) * 3 - s_star(1) ** 2 * 2
        out.append(_rec("alpha_12", 2, (u.entry(1, 2) - expect).is_zero()))
    lat = lambda_lattice(W)
    bad = [list(k) for k in u.keys() if not lambda_membership(u.entry(*k), lat).member]
    out.append(_rec("integrality", W, not bad, bad or None))
    out.append(_rec("log_round_trip", W, log_pair(W).round_trip()))
    out.append(log_annihilation(W))
    mults = []
    for k in range(1, min(W, 4) + 1):
        mults.append(lambda_membership(s_star(k), lat).multiplier)
    out.append(_rec("dual_generator_multipliers", min(W, 4),
                    all(m is not None and m > 1 and factorial(k + 1) % m == 0
                        for k, m in enumerate(mults, start=1)), multipliers=mults))
    return out


# -- divdiff ---------------------------------------------------------------------


def catalogue(W):
    """The catalogue operators used by the suites, in a fixed order."""
    x = polynomial_carrier(["x"])
    return [
        evaluation_op(),
        newton_op(),
        reflection_op((1, 0), "i"),
        reflection_op((1, 2), "ii"),
        translation_op(x.gen("x"), Fraction(1, 2), carrier=x),
        multiplicative_fgl_op(W + 2),
        formal_group_op(truncation=W + 3),
    ]


def _alpha11():
    lat = lambda_lattice(1)
    return lat.monomial_value(lat.spanning_monomials(1)[0])


def divdiff_suite(W, seed=0):
    out = []
    for op in catalogue(W):
        rep = operator_report(op, W)
        for c in rep["checks"]:
            c = dict(c)
            c["name"] = f"{op.constructor}:{c['name']}"
            out.append(c)
        kd = kernel_division_equivalence(op, min(W, 4)) if op.carrier.truncation is None else None
        if kd is not None:
            out.append(_rec(f"{op.constructor}:kernel_division", kd["weight"], kd["consistent"]))
        g = solve_gamma(op, min(W, 5))
        if g.gamma is not None:
            preds = gamma_predicates(op, g.gamma, min(W, 5))
            out.append(_rec(f"{op.constructor}:gamma_identities", min(W, 5), all(preds.values()),
                            gamma=str(g.gamma)))
    nw = newton_op()
    out.append(_rec("newton:partial_alpha_is_2", 0,
                    (nw.partial(nw.alpha) - nw.carrier(2)).is_zero()))
    comp = compose_divdiff(nw, nw, W)
    out.append(_from_check(comp.certificate, "composition:newton/newton"))
    ev = evaluation_op()
    tr = translation_op(ev.carrier.gen("a"), Fraction(1, 2), "a", ev.carrier)
    comp = compose_divdiff(ev, tr, W)
    out.append(_from_check(comp.certificate, "composition:evaluation/translation"))
    T = min(W + 2, 8)
    alpha = _alpha11()
    op = lemma12_op(1, alpha, random_lambda_params(2, 2, seed), T)
    out.append(_from_check(pi_multiplicativity(op, min(W, 5)), "lemma12:pi_multiplicative"))
    out.append(_rec("lemma12:pi_alpha_zero", T, op.pi(op.alpha).is_zero()))
    dens = localization_denominators(op, min(W, 5))
    out.append(_rec("lemma12:denominators", min(W, 5), all(_divides_power_of(d, 2) for d in dens),
                    denominators=dens))
    op = lemma13_op(2, s_star(2) * 4, T)
    inv, _ = pi_squared(op, T)
    out.append(_rec("lemma13:pi_squared_is_1", T, inv))
    out.append(_rec("lemma13:partial_squared_zero", min(W, 5),
                    partial_squared_is(op, op.carrier(0), min(W, 5)) is None))
    return out


# -- products --------------------------------------------------------------------


def theorem1_grid():
    ev = evaluation_op()
    nw = newton_op()
    carrier = ev.carrier
    return [
        (ev, ev),
        (ev, P.identity_projector(carrier, carrier.gen("a"))),
        (nw, nw),
        (reflection_op((1, 0)), reflection_op((0, 1))),
        (reflection_op((1, 0)), reflection_op((1, 1))),
        (reflection_op((1, 0)), reflection_op((1, 0), "ii")),
    ]


def products_suite(W, seed=0):
    out = []
    for op1, op2 in theorem1_grid():
        rep = P.theorem1_certificate(op1, op2, W)
        label = f"theorem1:{op1.constructor}/{op2.constructor}"
        out.append(_rec(label, W, rep["ok"], hypotheses=rep["hypotheses"],
                        associative=rep["associative"]["pass"]))
    nw = newton_op()
    c = nw.carrier
    verdicts = []
    for beta in (c.gen("x"), c(1), c.gen("x") + c.gen("y") ** 2):
        rep = P.theorem2_certificate(nw, beta, W)
        verdicts.append(rep["associative"]["pass"])
        out.append(_rec(f"theorem2:newton:beta={rep['beta']}", W, rep["ok"], branch=rep["branch"]))
    out.append(_rec("theorem2:beta_independence", W, len(set(verdicts)) == 1))
    ev = evaluation_op()
    a = ev.carrier
    for beta in (a.gen("a"), a(1)):
        rep = P.theorem2_certificate(ev, beta, W)
        out.append(_rec(f"theorem2:evaluation:beta={rep['beta']}", W, rep["ok"],
                        branch=rep["branch"], associative=rep["associative"]["pass"]))
    rep = P.theorem3_certificate(*P.degenerate_model(ev), W)
    out.append(_rec("theorem3:degenerate", W, rep["ok"] and rep["hypotheses"]))
    Pi, delta = P.random_projector_model(seed, min(W, 6))
    rep = P.theorem3_certificate(Pi, delta, min(W, 4))
    out.append(_rec("theorem3:random_projector", min(W, 4), rep["ok"] and rep["hypotheses"]))
    for k in (1, 2):
        Wc = min(W, 5)
        Pi, delta = P.conner_floyd_model(k, Wc)
        rep = P.theorem3_certificate(Pi, delta, Wc)
        out.append(_rec(f"theorem3:conner_floyd:k={k}", Wc, rep["ok"] and rep["hypotheses"],
                        hypotheses=rep["hypotheses"],
                        conditions=[rep[f"condition_{i}"]["pass"] for i in (1, 2, 3)],
                        associative=rep["associative"]["pass"]))
    for op1, op2 in theorem1_grid()[:2]:
        out.append(_from_check(P.expanded_form_check(op1, op2, W),
                               f"mu1_expanded_form:{op1.constructor}/{op2.constructor}"))
    return out


def run_suite(name, W, seed=0):
    fn = {"hopf": hopf_suite, "fgl": fgl_suite, "divdiff": divdiff_suite,
          "products": products_suite}[name]
    return fn(W, seed)


def report(suite, W, seed=0):
    names = SUITES if suite == "all" else (suite,)
    sections = []
    for name in names:
        checks = run_suite(name, W, seed)
        sections.append({"suite": name, "pass": all(c["pass"] for c in checks), "checks": checks})
    return {"suite": suite, "max_weight": W, "seed": seed,
            "pass": all(s["pass"] for s in sections), "sections": sections}

