"""Associative products built from divided differences and projectors.

Three constructions:

    mu1(x, y) = pi1(x) pi2(y)
    mu2(x, y) = x y + beta d(x) d(y)
    mu3(x, y) = Pi(Pi(x) Pi(y))

Each comes with a certificate that checks the hypotheses of the matching
associativity criterion on a finite test set (monomials of bounded weight)
and compares the verdict with a direct search for a non-associative triple.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .divdiff import (Check, CarrierRing, DividedDifferenceOp, LinearOperator, _pairs,
                      exact_divide, identity_operator, is_division, is_trivial, lemma12_op,
                      random_lambda_params)
from .formal_group import fgl_series, formal_inverse, lambda_lattice, universal_fgl
from .hopf import SElement, basis_up_to, dual_variables
from .milnor import act
from .series import GradedSeries, SeriesError

# Sign of the alpha2 d2(y) x term in the expanded form of mu1.  Tests flip it
# to make sure the expanded form is actually compared.
_EQ20_SIGN = -1


class ProductStructure:
    """A bilinear map on a carrier, with a record of how it was built."""

    def __init__(self, carrier, evaluator, provenance, phi=None):
        self.carrier = carrier
        self.evaluator = evaluator
        self.provenance = dict(provenance)
        self.phi = phi

    def __call__(self, a, b):
        lift = self.carrier.lift
        return lift(self.evaluator(lift(a), lift(b)))

    def __repr__(self):
        return f"ProductStructure({self.provenance.get('construction', '?')} on {self.carrier.name})"


def ordinary_product(carrier):
    return ProductStructure(carrier, lambda a, b: a * b, {"construction": "ordinary"})


def _eq(a, b):
    return (a - b).is_zero()


def _triples(carrier, W):
    monos = carrier.monomials(W)
    for ka, a in monos:
        wa = carrier.weight(ka)
        for kb, b in monos:
            wb = carrier.weight(kb)
            if wa + wb > W:
                continue
            for kc, c in monos:
                if wa + wb + carrier.weight(kc) <= W:
                    yield a, b, c


def associativity_check(mu, W):
    """``(xy)z = x(yz)`` on all monomial triples of total weight <= W.

    Triples are visited in graded-lex order of the factors, so the witness
    reported on failure is the first one in that order.
    """
    for a, b, c in _triples(mu.carrier, W):
        if not _eq(mu(mu(a, b), c), mu(a, mu(b, c))):
            return Check("associative", W, False, (a, b, c))
    return Check("associative", W, True)


def commutativity_check(mu, W):
    for a, b in _pairs(mu.carrier, W):
        if not _eq(mu(a, b), mu(b, a)):
            return Check("commutative", W, False, (a, b))
    return Check("commutative", W, True)


def bilinearity_check(mu, W, seed=0):
    """Linearity in each slot on random combinations of test monomials."""
    rng = random.Random(seed)
    monos = [m for _, m in mu.carrier.monomials(W)]
    for _ in range(5):
        a, b, c = (rng.choice(monos) for _ in range(3))
        r = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        if not _eq(mu(a + b * r, c), mu(a, c) + mu(b, c) * r):
            return Check("bilinear", W, False, (a, b, c))
        if not _eq(mu(c, a + b * r), mu(c, a) + mu(c, b) * r):
            return Check("bilinear", W, False, (c, a, b))
    return Check("bilinear", W, True)


def zero_operator(carrier):
    return LinearOperator(carrier, lambda m: carrier(0), "0")


def identity_projector(carrier, alpha):
    """``pi = 1`` viewed as the companion of the zero divided difference by ``alpha``."""
    return DividedDifferenceOp(carrier, alpha, identity_operator(carrier), constructor="identity",
                               laws=("projector",))


# -- mu1 -------------------------------------------------------------------------


def mu1(op1, op2):
    if op1.carrier.variables != op2.carrier.variables:
        raise ValueError("operators must share a carrier")
    return ProductStructure(op1.carrier, lambda x, y: op1.pi(x) * op2.pi(y),
                            {"construction": "mu1", "pi1": op1.constructor,
                             "pi2": op2.constructor})


def mu1_expanded(op1, op2, x, y):
    """The four-term expansion of ``pi1(x) pi2(y)`` in terms of ``d1, d2``."""
    a1, a2 = op1.alpha, op2.alpha
    d1x, d2y = op1.partial(x), op2.partial(y)
    return x * y - a1 * d1x * y + _EQ20_SIGN * a2 * d2y * x + a1 * a2 * d1x * d2y


def expanded_form_check(op1, op2, W):
    mu = mu1(op1, op2)
    for a, b in _pairs(op1.carrier, W):
        if not _eq(mu(a, b), mu1_expanded(op1, op2, a, b)):
            return Check("mu1_expanded_form", W, False, (a, b))
    return Check("mu1_expanded_form", W, True)


def projectors_commute(op1, op2, W):
    for _, m in op1.carrier.monomials(W):
        if not _eq(op1.pi(op2.pi(m)), op2.pi(op1.pi(m))):
            return Check("pi1_pi2_commute", W, False, m)
    return Check("pi1_pi2_commute", W, True)


def same_projector(op1, op2, W):
    return all(_eq(op1.pi(m), op2.pi(m)) for _, m in op1.carrier.monomials(W))


def theorem1_certificate(op1, op2, W):
    """Hypotheses of the ``mu1`` criterion against observed associativity.

    A slot counts as a projector when its divided difference is a division
    operator, or when it vanishes identically (``pi = 1``), the degenerate
    projector that the division criterion does not cover.
    """
    division = [is_division(op, W) for op in (op1, op2)]
    degenerate = [is_trivial(op, W) for op in (op1, op2)]
    commute = projectors_commute(op1, op2, W)
    hypotheses = all(d or t for d, t in zip(division, degenerate)) and bool(commute)
    mu = mu1(op1, op2)
    assoc = associativity_check(mu, W)
    comm = commutativity_check(mu, W)
    equal = same_projector(op1, op2, W)
    expanded = expanded_form_check(op1, op2, W)
    return {
        "pair": [op1.constructor, op2.constructor],
        "weight": W,
        "division": division,
        "degenerate": degenerate,
        "commute": commute.as_json(),
        "hypotheses": hypotheses,
        "associative": assoc.as_json(),
        "commutative": comm.as_json(),
        "pi1_equals_pi2": equal,
        "expanded_form": expanded.as_json(),
        "biconditional": hypotheses == bool(assoc),
        "commutativity_biconditional": bool(comm) == equal,
        "ok": hypotheses == bool(assoc) and bool(comm) == equal and bool(expanded),
    }


# -- mu2 -------------------------------------------------------------------------


def mu2(op, beta):
    beta = op.carrier.lift(beta)
    return ProductStructure(op.carrier, lambda x, y: x * y + beta * op.partial(x) * op.partial(y),
                            {"construction": "mu2", "operator": op.constructor,
                             "beta": str(beta)})


def second_order_symmetry(op, W):
    """``d^2(x) d(y) = d(x) d^2(y)`` on the test set; the first failing pair or None."""
    d = op.partial
    for a, b in _pairs(op.carrier, W):
        if not _eq(d(d(a)) * d(b), d(a) * d(d(b))):
            return (a, b)
    return None


def theorem2_branch(op, beta, W):
    """``("i" | "ii" | None, detail)``: which associativity condition holds."""
    beta = op.carrier.lift(beta)
    if is_division(op, W):
        if op.pi(beta).is_zero():
            return "i", None
        return None, "division operator with pi(beta) != 0"
    bad = second_order_symmetry(op, W)
    if bad is None:
        return "ii", None
    return None, bad


def theorem2_certificate(op, beta, W):
    branch, detail = theorem2_branch(op, beta, W)
    assoc = associativity_check(mu2(op, beta), W)
    return {
        "operator": op.constructor,
        "beta": str(op.carrier.lift(beta)),
        "weight": W,
        "branch": branch,
        "branch_detail": None if detail is None else str(detail),
        "associative": assoc.as_json(),
        "ok": (branch is not None) == bool(assoc),
    }


# -- mu3 -------------------------------------------------------------------------


def mu3(Pi, delta=None, beta=None):
    """``Pi(Pi(x) Pi(y))``.  With ``delta`` and ``beta`` it is checked against the
    form ``Pi(x) Pi(y) + beta delta(x) delta(y)`` by :func:`theorem3_hypotheses`."""
    return ProductStructure(Pi.carrier, lambda x, y: Pi(Pi(x) * Pi(y)),
                            {"construction": "mu3", "Pi": Pi.name,
                             "delta": None if delta is None else delta.name,
                             "beta": None if beta is None else str(beta)})


def theorem3_hypotheses(Pi, delta, alpha, beta, W):
    """Each of the three conditions, checked exactly on the test set."""
    carrier = Pi.carrier
    alpha, beta = carrier.lift(alpha), carrier.lift(beta)
    c1 = Check("condition_1", W, True)
    for _, m in carrier.monomials(W):
        pm = Pi(m)
        if not _eq(Pi(pm), pm):
            c1 = Check("condition_1", W, False, m, {"failed": "Pi^2 = Pi"})
            break
        if not _eq(delta(pm), delta(m)):
            c1 = Check("condition_1", W, False, m, {"failed": "delta Pi = delta"})
            break
    c2 = Check("condition_2", W, True)
    c3 = Check("condition_3", W, True)
    for a, b in _pairs(carrier, W):
        pa, pb, da, db = Pi(a), Pi(b), delta(a), delta(b)
        prod = pa * pb
        if c2 and not _eq(delta(prod), da * pb + pa * db - alpha * da * db):
            c2 = Check("condition_2", W, False, (a, b))
        if c3 and not _eq(Pi(prod), prod + beta * da * db):
            c3 = Check("condition_3", W, False, (a, b))
        if not c2 and not c3:
            break
    return {"condition_1": c1, "condition_2": c2, "condition_3": c3}


@dataclass
class Solved:
    """Result of solving a condition for its ring parameter."""

    value: GradedSeries | None
    witness: object = None
    unconstrained: bool = False
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.value is not None


def _solve_parameter(carrier, W, numerator, denominator):
    """The ``c`` with ``numerator(a, b) = c * denominator(a, b)`` on all pairs.

    ``c`` is read off the pair whose denominator has the lowest weight (so it
    is known through the highest weight) and then checked on every pair.
    """
    pairs = list(_pairs(carrier, W))
    best = None
    for a, b in pairs:
        den = denominator(a, b)
        if den.is_zero():
            continue
        if best is None or den.min_weight() < best[2].min_weight():
            best = (a, b, den)
    if best is None:
        for a, b in pairs:
            if not numerator(a, b).is_zero():
                return Solved(None, (a, b), detail={"reason": "denominator vanishes, residual does not"})
        return Solved(carrier(0), unconstrained=True)
    a, b, den = best
    try:
        c = exact_divide(numerator(a, b), den)
    except SeriesError:
        return Solved(None, (a, b), detail={"reason": "not divisible"})
    for a, b in pairs:
        if not _eq(numerator(a, b), c * denominator(a, b)):
            return Solved(None, (a, b), detail={"reason": "not proportional"})
    return Solved(c, detail={"source_pair": [str(best[0]), str(best[1])],
                             "known_through": c.truncation})


def solve_beta(Pi, delta, W):
    """The ``beta`` making ``Pi(Pi x Pi y) = Pi x Pi y + beta delta x delta y`` hold.

    When ``delta`` vanishes on the test set, ``beta`` is unconstrained and 0 is
    returned.  For truncated carriers ``beta`` is determined only through the
    weight recorded in ``detail["known_through"]``.
    """
    def num(a, b):
        prod = Pi(a) * Pi(b)
        return Pi(prod) - prod

    return _solve_parameter(Pi.carrier, W, num, lambda a, b: delta(a) * delta(b))


def solve_alpha(Pi, delta, W):
    """The ``alpha`` for condition (2), found the same way as ``beta``."""
    def num(a, b):
        pa, pb = Pi(a), Pi(b)
        return delta(a) * pb + pa * delta(b) - delta(pa * pb)

    return _solve_parameter(Pi.carrier, W, num, lambda a, b: delta(a) * delta(b))


def theorem3_certificate(Pi, delta, W, alpha=None, beta=None):
    """Solve for the parameters when not given, check the hypotheses and associativity."""
    out = {"weight": W}
    if beta is None:
        sb = solve_beta(Pi, delta, W)
        out["solve_beta"] = {"ok": bool(sb), "unconstrained": sb.unconstrained,
                             "value": None if sb.value is None else str(sb.value),
                             "witness": None if sb.witness is None else [str(v) for v in sb.witness],
                             **{k: v for k, v in sb.detail.items()}}
        beta = sb.value
    if alpha is None:
        sa = solve_alpha(Pi, delta, W)
        out["solve_alpha"] = {"ok": bool(sa), "unconstrained": sa.unconstrained,
                              "value": None if sa.value is None else str(sa.value),
                              "witness": None if sa.witness is None else [str(v) for v in sa.witness]}
        alpha = sa.value
    carrier = Pi.carrier
    hyp = theorem3_hypotheses(Pi, delta, carrier(0) if alpha is None else alpha,
                              carrier(0) if beta is None else beta, W)
    out.update({k: v.as_json() for k, v in hyp.items()})
    if hyp["condition_1"].detail:
        out["condition_1"]["failed"] = hyp["condition_1"].detail["failed"]
    hypotheses = alpha is not None and beta is not None and all(hyp.values())
    assoc = associativity_check(mu3(Pi, delta, beta), W)
    out["hypotheses"] = hypotheses
    out["associative"] = assoc.as_json()
    # the criterion is one-directional: hypotheses force associativity
    out["ok"] = (not hypotheses) or bool(assoc)
    return out


# -- models ---------------------------------------------------------------------


def degenerate_model(op):
    """``Pi`` a multiplicative projector and ``delta = 0``."""
    return op.pi, zero_operator(op.carrier)


def random_projector_model(seed, truncation=6):
    """A randomized multiplicative projector from the ``n = 1`` division family."""
    lat = lambda_lattice(1)
    alpha = lat.monomial_value(lat.spanning_monomials(1)[0])
    op = lemma12_op(1, alpha, random_lambda_params(3, 2, seed), truncation)
    return degenerate_model(op)


def thom_carrier(k, W):
    """Thom monomials in ``x1..xk`` with coefficients ``s*1..s*W``.

    The coefficients are operator variables as well: the operations below act
    on them.
    """
    names = [f"x{i}" for i in range(1, k + 1)]
    return CarrierRing("Thom[" + ",".join(names) + "]",
                       [(n, 1) for n in names] + list(dual_variables(W)), W)


def root_coefficients(build, W):
    """``{w: c_w}`` with ``build(roots) = sum_w c_w m_w(roots)`` for ``|w| <= W``.

    ``build`` receives W Chern roots (weight 1) with the truncation to use and
    returns a symmetric series in them.  ``c_w`` is read off at the leading
    monomial of ``m_w``.  A term ``c_w m_w`` has weight at most ``2|w|``, so the
    series is formed at truncation ``2W + 1`` and every ``c_w`` is exact.
    """
    T = 2 * W + 1
    roots = [f"_y{i}" for i in range(1, W + 1)]
    variables = tuple((y, 1) for y in roots) + dual_variables(T)
    series = build([GradedSeries.gen(y, variables, T) for y in roots], T)
    out = {}
    for w in basis_up_to(W):
        c = series
        for y, k in zip(roots, tuple(w) + (0,) * (W - len(w))):
            c = c.coefficient(y, k)
        c = c.drop_unused()
        if not c.is_zero():
            out[w] = c.with_truncation(None)
    return out


def operation_operator(carrier, coefficients, name, deficit=0):
    """The operation ``sum_w c_w s_w`` on the whole carrier, coefficients included."""
    def on_mono(m):
        exact = m.with_truncation(None)
        total = carrier(0)
        for w, c in coefficients.items():
            total = total + carrier.lift(c * act(SElement({w: 1}), exact))
        return total

    return LinearOperator(carrier, on_mono, name, deficit)


def conner_floyd_model(k, W, coefficients=None):
    """``(Pi, delta)`` as cobordism operations on :func:`thom_carrier` through weight W.

    On the Thom class ``M`` of a sum of line bundles with Chern roots ``y_j``
    let ``e = iota(y_1 +_F y_2 +_F ...)``.  Then ``delta(M) = M e`` and
    ``Pi(M) = M (1 + sum_{i>=2} alpha_i1 e^i)``.  Expanding these factors as
    ``sum_w c_w m_w(y)`` gives the operations ``sum_w c_w s_w``, which act on
    coefficients through the Cartan formula; ``delta`` lowers coefficient
    weight by one.  ``coefficients`` overrides ``alpha_i1`` (keyed by ``i``).
    """
    carrier = thom_carrier(k, W)
    table = universal_fgl(max(1, W))
    alpha_i1 = {}
    for i in range(2, W + 1):
        if coefficients is not None and i in coefficients:
            alpha_i1[i] = coefficients[i]
        elif i <= table.truncation:
            alpha_i1[i] = table.entry(i, 1)

    def euler(roots, T):
        f = fgl_series(T, "_u", "_v")
        c = roots[0]
        for y in roots[1:]:
            c = f.compose({"_u": c, "_v": y}).extend(c.variables)
        return formal_inverse(f, "_u", "_v").compose({"_u": c}).extend(c.variables)

    def pi_factor(roots, T):
        e = euler(roots, T)
        total = GradedSeries.constant(1, e.variables, T)
        power = e * e
        for i in range(2, W + 1):
            if i in alpha_i1:
                total = total + alpha_i1[i] * power
            power = power * e
        return total

    Pi = operation_operator(carrier, root_coefficients(pi_factor, W), "Pi")
    delta = operation_operator(carrier, root_coefficients(euler, W), "delta", deficit=1)
    return Pi, delta


def perturb_operator(op, key, value, name=None):
    """``op`` with its value on the monomial ``key`` replaced by ``value``."""
    carrier = op.carrier
    target = tuple(key)

    def on_mono(m):
        (e,) = m.terms
        if tuple(e[i] for i in carrier.op_index) == target:
            return carrier.lift(value)
        return op(m)

    return LinearOperator(carrier, on_mono, name or f"{op.name}'", op.deficit)
