"""Divided difference operators and their companion multiplicative operators.

A divided difference operator on a commutative ring R with a fixed
non-invertible ``alpha`` satisfies

    d(xy) = d(x) y + x d(y) - alpha d(x) d(y),

equivalently ``pi = 1 - alpha d`` is multiplicative.  Every identity about
such operators is quantified over all of R; here it is decided on a finite
test set (all monomials up to a check weight) and each report records that
weight.

Operators are closures on monomials, memoized per exponent and extended
linearly over the carrier's scalar variables.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .formal_group import difference_kernel, fgl_series, lambda_lattice
from .hopf import dual_variables, r_star, s
from .milnor import act, operator_from_series
from .series import GradedSeries, SeriesError, _binomial_series, _divides_power_of, exact_divide


# -- carriers ----------------------------------------------------------------


class CarrierRing:
    """Polynomials or truncated series in operator variables over scalar variables.

    Operators act on the operator variables and are linear over the scalars.
    ``truncation=None`` gives an exact polynomial ring.
    """

    def __init__(self, name, variables, truncation=None, scalars=()):
        self.name = name
        self.truncation = truncation
        probe = GradedSeries(tuple(variables) + tuple(scalars))
        self.variables = probe.variables
        op_names = {n for n, _ in variables}
        self.op_index = tuple(i for i, (n, _) in enumerate(self.variables) if n in op_names)
        self.op_variables = tuple(self.variables[i] for i in self.op_index)
        self.scalars = tuple(v for v in self.variables if v[0] not in op_names)
        self._monomials = {}

    def __repr__(self):
        return f"CarrierRing({self.name})"

    def __call__(self, c=0):
        return GradedSeries.constant(c, self.variables, self.truncation)

    def gen(self, name):
        return GradedSeries.gen(name, self.variables, self.truncation)

    def lift(self, p):
        """View ``p`` (a series or rational) as an element of this carrier."""
        if not isinstance(p, GradedSeries):
            return self(p)
        p = p.extend(self.variables)
        if p.variables != self.variables:
            extra = set(p.names) - set(self.names)
            if any(any(e[p.names.index(n)] for e in p.terms) for n in extra):
                raise SeriesError(f"element uses variables {sorted(extra)} outside {self.name}")
            p = p.drop_unused().extend(self.variables)
        if self.truncation is not None:
            p = p.truncate(self.truncation)
        return p

    @property
    def names(self):
        return tuple(n for n, _ in self.variables)

    def monomial_from_key(self, key):
        e = [0] * len(self.variables)
        for i, k in zip(self.op_index, key):
            e[i] = k
        return GradedSeries(self.variables, {tuple(e): 1}, self.truncation)

    def monomials(self, W, include_scalars=False):
        """Monomials of weight <= W in graded-lex order, as ``(key, series)``.

        The key is the exponent over the operator variables (or over all
        variables when ``include_scalars`` is set).
        """
        cache_key = (W, include_scalars)
        if cache_key not in self._monomials:
            vs = self.variables if include_scalars else self.op_variables
            out = []
            for key in _exponents(vs, W):
                if include_scalars:
                    series = GradedSeries(self.variables, {key: 1}, self.truncation)
                else:
                    series = self.monomial_from_key(key)
                if not series.is_zero():
                    out.append((key, series))
            self._monomials[cache_key] = out
        return self._monomials[cache_key]

    def split(self, p):
        """``{operator exponent: scalar coefficient series}`` for an element."""
        p = self.lift(p)
        groups = {}
        for e, c in p.terms.items():
            key = tuple(e[i] for i in self.op_index)
            rest = list(e)
            for i in self.op_index:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        return {k: GradedSeries(self.variables, t, p.truncation, _trusted=True)
                for k, t in groups.items()}

    def weight(self, key):
        return sum(k * w for k, (_, w) in zip(key, self.op_variables))


def _exponents(variables, W):
    ws = [w for _, w in variables]
    out = []

    def rec(i, left, acc):
        if i == len(ws):
            out.append(tuple(acc))
            return
        for k in range(left // ws[i] + 1):
            rec(i + 1, left - k * ws[i], acc + [k])

    rec(0, W, [])
    return sorted(out, key=lambda e: (sum(k * w for k, w in zip(e, ws)), e))


def polynomial_carrier(names, name=None):
    return CarrierRing(name or "K[" + ",".join(names) + "]", [(n, 1) for n in names])


def milnor_carrier(truncation, x="x"):
    """One geometric variable plus ``s*1..s*T``, all acted on."""
    return CarrierRing(f"S*[[{x}]]", ((x, 1),) + dual_variables(truncation), truncation)


# -- operators ---------------------------------------------------------------


class LinearOperator:
    """Scalar-linear operator given by its values on operator-variable monomials.

    ``deficit`` is how far the operator can lower total weight; applied to a
    series known through weight T the result is known through ``T - deficit``.
    """

    def __init__(self, carrier, on_monomial, name="op", deficit=0):
        self.carrier = carrier
        self.on_monomial = on_monomial
        self.name = name
        self.deficit = deficit
        self._cache = {}

    def value(self, key):
        if key not in self._cache:
            self._cache[key] = self.carrier.lift(self.on_monomial(self.carrier.monomial_from_key(key)))
        return self._cache[key]

    def __call__(self, p):
        p = self.carrier.lift(p)
        total = self.carrier(0)
        for key, coef in self.carrier.split(p).items():
            v = self.value(key)
            total = total + (v if _is_one(coef) else coef * v)
        if p.truncation is not None and self.deficit:
            total = total.truncate(max(p.truncation - self.deficit, 0))
        return total

    def fingerprint(self, W):
        return [(key, self.value(key)) for key, _ in self.carrier.monomials(W)]

    def then(self, other, name=None):
        """``self`` after ``other``."""
        return LinearOperator(self.carrier, lambda m: self(other(m)),
                              name or f"{self.name}*{other.name}", self.deficit + other.deficit)

    def __repr__(self):
        return f"LinearOperator({self.name} on {self.carrier.name})"


def _is_one(c):
    return len(c.terms) == 1 and c.constant_term() == 1


def identity_operator(carrier):
    return LinearOperator(carrier, lambda m: m, "id")


def derivative_operator(carrier, name):
    def on_mono(m):
        i = m.names.index(name)
        terms = {}
        for e, c in m.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                terms[tuple(f)] = c * e[i]
        return GradedSeries(m.variables, terms, m.truncation)
    return LinearOperator(carrier, on_mono, f"d/d{name}", 1)


class DividedDifferenceOp:
    """A divided difference operator with its ``alpha`` and ``pi = 1 - alpha d``.

    Supply ``pi`` (a multiplicative-candidate map on monomials); ``partial``
    defaults to ``(p - pi(p)) / alpha`` by exact division.
    """

    def __init__(self, carrier, alpha, pi, partial=None, constructor="custom", params=None,
                 laws=(), localization=None):
        self.carrier = carrier
        self.alpha = carrier.lift(alpha)
        if self.alpha.is_zero():
            raise ValueError("alpha must be nonzero")
        self.pi = pi if isinstance(pi, LinearOperator) else LinearOperator(carrier, pi, "pi")
        if partial is None:
            partial = LinearOperator(carrier, lambda m: exact_divide(m - self.pi(m), self.alpha),
                                     "d", self.alpha.min_weight())
        elif not isinstance(partial, LinearOperator):
            partial = LinearOperator(carrier, partial, "d")
        self.partial = partial
        self.constructor = constructor
        self.params = dict(params or {})
        self.laws = tuple(laws)
        self.localization = localization

    def d(self, p):
        return self.partial(p)

    def __repr__(self):
        return f"DividedDifferenceOp({self.constructor} on {self.carrier.name})"


# -- checks ----------------------------------------------------------------


@dataclass
class Check:
    name: str
    weight: int
    passed: bool
    witness: object = None
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.passed)

    def as_json(self):
        out = {"name": self.name, "weight": self.weight, "pass": bool(self.passed)}
        if self.witness is not None:
            out["witness"] = _witness_json(self.witness)
        return out


def _witness_json(w):
    if isinstance(w, GradedSeries):
        return str(w)
    if isinstance(w, (tuple, list)):
        return [_witness_json(x) for x in w]
    return w if isinstance(w, (int, str, bool)) or w is None else str(w)


def _pairs(carrier, W):
    monos = carrier.monomials(W)
    for ka, a in monos:
        for kb, b in monos:
            if carrier.weight(ka) + carrier.weight(kb) <= W:
                yield a, b


def _eq(a, b):
    return (a - b).is_zero()


def is_trivial(op, W):
    return all(op.partial(m).is_zero() for _, m in op.carrier.monomials(W))


def check_divdiff(op, W):
    """The defining identity on all ordered monomial pairs of total weight <= W."""
    if not op.partial(op.carrier(1)).is_zero():
        return Check("divdiff", W, False, "d(1) != 0")
    if is_trivial(op, W):
        return Check("divdiff", W, False, "operator is identically zero")
    d, al = op.partial, op.alpha
    for a, b in _pairs(op.carrier, W):
        da, db = d(a), d(b)
        if not _eq(d(a * b), da * b + a * db - al * da * db):
            return Check("divdiff", W, False, (a, b))
    return Check("divdiff", W, True)


def pi_multiplicativity(op, W):
    pi = op.pi
    if not _eq(pi(op.carrier(1)), op.carrier(1)):
        return Check("pi_multiplicative", W, False, "pi(1) != 1")
    for a, b in _pairs(op.carrier, W):
        if not _eq(pi(a * b), pi(a) * pi(b)):
            return Check("pi_multiplicative", W, False, (a, b))
    return Check("pi_multiplicative", W, True)


def pi_matches_partial(op, W):
    """``pi = 1 - alpha d`` on the test set."""
    for _, m in op.carrier.monomials(W):
        if not _eq(op.pi(m), m - op.alpha * op.partial(m)):
            return Check("pi_is_1_minus_alpha_d", W, False, m)
    return Check("pi_is_1_minus_alpha_d", W, True)


def lemma4_equivalence(op, W):
    a, b = check_divdiff(op, W), pi_multiplicativity(op, W)
    if a.witness == "operator is identically zero":
        return Check("lemma4_equivalence", W, True, detail={"divdiff": False, "pi": bool(b)})
    return Check("lemma4_equivalence", W, bool(a) == bool(b),
                 detail={"divdiff": bool(a), "pi": bool(b)})


class CriteriaDisagree(AssertionError):
    """Two criteria that must coincide gave different answers."""


def is_division(op, W):
    """``d(alpha) = 1``, cross-checked against ``d(alpha p) = p`` on the test set."""
    direct = _eq(op.partial(op.alpha), op.carrier(1))
    composed = all(_eq(op.partial(op.alpha * m), m) for _, m in op.carrier.monomials(W))
    if direct != composed:
        raise CriteriaDisagree(f"d(alpha)=1 is {direct} but d(alpha p)=p is {composed}")
    return direct


def pi_squared(op, W):
    """``(pi^2 = 1, pi^2 = pi)`` on the test set."""
    inv = proj = True
    for _, m in op.carrier.monomials(W):
        pm = op.pi(m)
        ppm = op.pi(pm)
        inv = inv and _eq(ppm, m)
        proj = proj and _eq(ppm, pm)
    return inv, proj


def partial_squared_is(op, gamma, W):
    """``d^2 = gamma d`` on the test set; returns the first failing monomial or None."""
    gamma = op.carrier.lift(gamma)
    for _, m in op.carrier.monomials(W):
        dm = op.partial(m)
        if not _eq(op.partial(dm), gamma * dm):
            return m
    return None


@dataclass
class GammaSolution:
    gamma: GradedSeries | None
    witness: object = None


def solve_gamma(op, W):
    """The ring element with ``d^2 = gamma d``, if one exists on the test set.

    ``gamma`` is read off the first monomial with ``d m != 0`` by exact
    division and then verified on every test monomial.
    """
    for _, m in op.carrier.monomials(W):
        dm = op.partial(m)
        if dm.is_zero():
            continue
        try:
            gamma = exact_divide(op.partial(dm), dm)
        except SeriesError:
            return GammaSolution(None, m)
        bad = partial_squared_is(op, gamma, W)
        if bad is not None:
            return GammaSolution(None, bad)
        return GammaSolution(gamma)
    return GammaSolution(op.carrier(0))


class Inapplicable(ValueError):
    """A predicate's hypothesis does not hold for this operator."""


def gamma_predicates(op, gamma, W):
    """Identities that follow from ``d^2 = gamma d``.

    ``(1 - alpha gamma) d(alpha) = 2 - alpha gamma``, ``pi^2 = 1`` and
    ``pi(alpha) (1 - alpha gamma) = -alpha``.
    """
    if gamma is None:
        raise Inapplicable("no gamma with d^2 = gamma d")
    bad = partial_squared_is(op, gamma, W)
    if bad is not None:
        raise Inapplicable(f"d^2 != gamma d on {bad}")
    al = op.alpha
    g = op.carrier.lift(gamma)
    one = op.carrier(1)
    lemma5 = _eq((one - al * g) * op.partial(al), 2 * one - al * g)
    inv, _ = pi_squared(op, W)
    lemma6 = _eq(op.pi(al) * (one - al * g), -al)
    return {"lemma5": lemma5, "pi_squared_identity": inv, "pi_alpha": lemma6}


def exact_nullspace(columns):
    """Basis of ``{c : sum c_i columns_i = 0}`` for columns given as term dicts."""
    rows = sorted({e for col in columns for e in col})
    if not columns:
        return []
    index = {e: i for i, e in enumerate(rows)}
    data = [[QQ(0)] * len(columns) for _ in rows]
    for j, col in enumerate(columns):
        for e, c in col.items():
            c = Fraction(c)
            data[index[e]][j] = QQ(c.numerator, c.denominator)
    if not rows:
        return [[Fraction(int(i == j)) for i in range(len(columns))] for j in range(len(columns))]
    M = DomainMatrix(data, (len(rows), len(columns)), QQ)
    ns = M.nullspace().to_Matrix()
    return [[Fraction(int(x.p), int(x.q)) for x in ns.row(i)] for i in range(ns.rows)]


def kernel_of_pi(op, W):
    """Kernel of ``pi`` on the span of all monomials (scalars included) of weight <= W."""
    monos = op.carrier.monomials(W, include_scalars=True)
    cols = [op.pi(m).terms for _, m in monos]
    basis = exact_nullspace(cols)
    out = []
    for vec in basis:
        terms = {}
        for (key, _), c in zip(monos, vec):
            if c:
                terms[key] = c
        out.append(GradedSeries(op.carrier.variables, terms, op.carrier.truncation))
    return out


def kernel_division_equivalence(op, W):
    kernel = kernel_of_pi(op, W)
    division = is_division(op, W)
    _, proj = pi_squared(op, W)
    nontrivial = bool(kernel)
    return {"weight": W, "kernel_dim": len(kernel), "kernel_nontrivial": nontrivial,
            "division": division, "projector": proj,
            "consistent": nontrivial == division == proj,
            "kernel_sample": str(kernel[0]) if kernel else None}


@dataclass
class Composite:
    pi: LinearOperator
    partial: LinearOperator
    certificate: Check


def compose_divdiff(op1, op2, W):
    """``pi1 pi2`` with its divided difference; the certificate checks
    ``d12 = d1 + d2 - d1(alpha d2)`` on the test set."""
    if op1.carrier is not op2.carrier or not _eq(op1.alpha, op2.alpha):
        raise ValueError("operators must share carrier and alpha")
    carrier, al = op1.carrier, op1.alpha
    pi12 = op1.pi.then(op2.pi, "pi1*pi2")
    d12 = LinearOperator(carrier, lambda m: exact_divide(m - pi12(m), al), "d12",
                         al.min_weight())
    for _, m in carrier.monomials(W):
        rhs = op1.partial(m) + op2.partial(m) - op1.partial(al * op2.partial(m))
        if not _eq(d12(m), rhs):
            return Composite(pi12, d12, Check("composition", W, False, m))
    return Composite(pi12, d12, Check("composition", W, True))


def ore_check(delta, phi, W):
    """``delta(ab) = phi(a) delta(b) + delta(a) b`` on monomial pairs."""
    carrier = delta.carrier
    for a, b in _pairs(carrier, W):
        if not _eq(delta(a * b), phi(a) * delta(b) + delta(a) * b):
            return Check("ore", W, False, (a, b))
    return Check("ore", W, True)


# -- catalogue ---------------------------------------------------------------


def translation_op(alpha, psi, var="x", carrier=None, constructor="translation"):
    """``pi p(x) = p(x - alpha psi)`` on ``K[x]``; requires ``alpha(0) = 0``."""
    carrier = carrier or polynomial_carrier([var])
    alpha, psi = carrier.lift(alpha), carrier.lift(psi)
    if alpha.constant_term() != 0:
        raise ValueError("translation needs alpha(0) = 0")
    shift = carrier.gen(var) - alpha * psi
    pi = LinearOperator(carrier, lambda m: m.compose({var: shift}), "pi")
    return DividedDifferenceOp(carrier, alpha, pi, constructor=constructor,
                               params={"alpha": str(alpha), "psi": str(psi)})


def evaluation_op(var="a"):
    """``d p = (p - p(0)) / a`` on ``K[a]``; ``pi`` is evaluation at 0."""
    carrier = polynomial_carrier([var])
    a = carrier.gen(var)
    op = translation_op(a, carrier(1), var, carrier, "evaluation")
    op.laws = ("division",)
    return op


def newton_op(x="x", y="y"):
    carrier = polynomial_carrier([x, y])
    X, Y = carrier.gen(x), carrier.gen(y)
    pi = LinearOperator(carrier, lambda m: m.compose({x: Y, y: X}), "swap")
    return DividedDifferenceOp(carrier, X - Y, pi, constructor="newton",
                               laws=("partial_squared_zero", "involution"))


def reflection_op(xi, variant="i"):
    """Reflection-type operator on ``K[x1..xn]`` for a vector ``xi``.

    ``alpha = <x, xi>``; variant ``"i"`` projects onto the hyperplane
    (a division operator), ``"ii"`` reflects in it (``pi^2 = 1``, ``d^2 = 0``).
    """
    xi = [Fraction(c) for c in xi]
    norm = sum(c * c for c in xi)
    if norm == 0:
        raise ValueError("<xi, xi> must be nonzero")
    c = {"i": 1, "ii": 2}[variant]
    names = [f"x{i + 1}" for i in range(len(xi))]
    carrier = polynomial_carrier(names)
    X = [carrier.gen(n) for n in names]
    alpha = sum((X[i] * xi[i] for i in range(len(xi))), carrier(0))
    mapping = {n: X[i] - alpha * (c * xi[i] / norm) for i, n in enumerate(names)}
    pi = LinearOperator(carrier, lambda m: m.compose(mapping), "reflect")
    laws = ("division", "projector") if variant == "i" else ("involution", "partial_squared_zero")
    return DividedDifferenceOp(carrier, alpha, pi, constructor=f"reflection_{variant}",
                               params={"xi": [str(v) for v in xi]}, laws=laws)


def formal_group_op(f=None, truncation=7, x="x", y="y", scalars=None, constructor="formal_group"):
    """``d p = (p(x,y) - p(y,x)) / f(x, iota(y))`` on ``K[[x, y]]``.

    With ``f=None`` the universal formal group over ``S* (x) Q`` is used.
    """
    if f is None:
        f = fgl_series(truncation, x, y)
    scalars = tuple(v for v in f.variables if v[0] not in (x, y)) if scalars is None else scalars
    carrier = CarrierRing(f"K[[{x},{y}]]", ((x, 1), (y, 1)), truncation, scalars)
    alpha = difference_kernel(f=carrier.lift(f), x=x, y=y)
    X, Y = carrier.gen(x), carrier.gen(y)
    pi = LinearOperator(carrier, lambda m: m.compose({x: Y, y: X}), "swap")
    return DividedDifferenceOp(carrier, alpha, pi, constructor=constructor,
                               params={"f": str(carrier.lift(f))}, laws=("involution",))


def multiplicative_fgl_op(truncation=7, x="x", y="y", a="a"):
    """The formal-group operator for ``x + y - a x y``; here ``d^2 = a d``."""
    variables = ((x, 1), (y, 1), (a, 1))
    X = GradedSeries.gen(x, variables, truncation)
    Y = GradedSeries.gen(y, variables, truncation)
    A = GradedSeries.gen(a, variables, truncation)
    op = formal_group_op(X + Y - A * X * Y, truncation, x, y, ((a, 1),),
                         constructor="formal_group_multiplicative")
    op.params["gamma"] = a
    return op


def _milnor_op(alpha, phis, truncation, constructor, params, laws, localization):
    carrier = milnor_carrier(truncation)
    operator = operator_from_series(phis, truncation)
    pi = LinearOperator(carrier, lambda m: act(operator, m), "pi")
    op = DividedDifferenceOp(carrier, alpha, pi, constructor=constructor, params=params,
                             laws=laws, localization=localization)
    op.operator = operator
    return op


def lemma12_op(n, alpha, a=(), truncation=10):
    """Division operator by ``alpha`` with ``d x = x^(n+1)/m + sum a_i x^(n+i+1)``.

    ``alpha`` is homogeneous of weight n with ``s_(n)(alpha) = m != 0``;
    ``a[i-1]`` is ``a_i`` (weight i).  The companion ``pi`` has
    ``phi_n = -alpha/m`` and ``phi_(n+i) = -alpha a_i``.
    """
    m = _s_n_value(n, alpha)
    if m == 0:
        raise ValueError("s_(n)(alpha) must be nonzero")
    phis = [None] * truncation
    if n <= truncation:
        phis[n - 1] = alpha * Fraction(-1, m)
    for i, ai in enumerate(a, start=1):
        if n + i <= truncation and ai is not None and not ai.is_zero():
            phis[n + i - 1] = alpha * ai * (-1)
    return _milnor_op(alpha, phis, truncation, "lemma12",
                      {"n": n, "m": m, "alpha": str(alpha), "a": [str(v) for v in a]},
                      ("division", "projector"), m)


def lemma13_op(n, alpha, truncation=10):
    """``pi(x) = x (1 + alpha x^n)^(-1/n)`` with ``s_(n)(alpha) = 2n``."""
    val = _s_n_value(n, alpha)
    if val != 2 * n:
        raise ValueError(f"s_({n})(alpha) must equal {2 * n}, got {val}")
    t = GradedSeries((("_z", 1),), {(1,): 1}, truncation)
    coeffs = _binomial_series(t, Fraction(-1, n), truncation)
    phis = [None] * truncation
    k = 1
    while k * n <= truncation:
        c = coeffs.coeff((k,))
        if c:
            phis[k * n - 1] = alpha ** k * c
        k += 1
    return _milnor_op(alpha, phis, truncation, "lemma13", {"n": n, "alpha": str(alpha)},
                      ("involution", "partial_squared_zero"), n)


def _s_n_value(n, alpha):
    v = r_star(s(n), alpha)
    if v.max_weight() not in (None, 0):
        raise ValueError(f"alpha must be homogeneous of weight {n}")
    return v.constant_term()


def random_lambda_params(count, m, seed, spread=3, max_power=1):
    """``a_1..a_count`` in ``Lambda (x) Z[1/m]``: random integer combinations
    of products of the ``alpha_ij``, each divided by a random power of m."""
    rng = random.Random(seed)
    lat = lambda_lattice(max(count, 1))
    out = []
    for i in range(1, count + 1):
        total = None
        for mono in lat.spanning_monomials(i):
            c = rng.randint(-spread, spread)
            if c:
                term = lat.monomial_value(mono) * c
                total = term if total is None else total + term
        if total is None:
            total = lat.monomial_value(lat.spanning_monomials(i)[0])
        out.append(total * Fraction(1, m ** rng.randint(0, max_power)))
    return out


# -- reports -------------------------------------------------------------------


def localization_denominators(op, W):
    dens = set()
    for _, mono in op.carrier.monomials(W):
        dens.update(op.pi(mono).denominators())
        dens.update(op.partial(mono).denominators())
    return sorted(dens)


def operator_report(op, W):
    checks = [check_divdiff(op, W), pi_multiplicativity(op, W), lemma4_equivalence(op, W),
              pi_matches_partial(op, W)]
    laws = set(op.laws)
    if laws & {"division", "projector"}:
        checks.append(Check("division", W, is_division(op, W)))
    inv, proj = (None, None)
    if laws & {"involution", "projector"}:
        inv, proj = pi_squared(op, W)
    if "involution" in laws:
        checks.append(Check("pi_squared_is_1", W, inv))
    if "projector" in laws:
        checks.append(Check("pi_squared_is_pi", W, proj))
    if "partial_squared_zero" in laws:
        checks.append(Check("partial_squared_zero", W,
                            partial_squared_is(op, op.carrier(0), W) is None))
    if "gamma" in op.params:
        g = op.carrier.gen(op.params["gamma"])
        checks.append(Check("partial_squared_gamma", W, partial_squared_is(op, g, W) is None))
    report = {"constructor": op.constructor, "params": op.params,
              "checks": [c.as_json() for c in checks],
              "localization_denominators": localization_denominators(op, W)}
    if op.localization is not None:
        report["localization_ok"] = all(_divides_power_of(d, op.localization)
                                        for d in report["localization_denominators"])
    return report


def dumps_report(report):
    return json.dumps(report, sort_keys=True, default=str)
