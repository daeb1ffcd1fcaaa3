"""Carriers ``S*[[x_1..x_k]]`` with the full action of S.

A module element is a :class:`GradedSeries` whose variables are geometric
(weight 1, any name not starting with ``s*``) plus dual generators ``s*k``.
The basis element ``s_w`` acts on a term ``lam * x^a`` by

    s_w(lam * x^a) = sum over w' + w'' = w of  R*_{w'}(lam) * s_{w''}(x^a),

with ``R*`` the dual right-multiplication action and the geometric rule
``s_(k)(x) = x^(k+1)`` on the variables.

Truncation bookkeeping: a bare ``s_w`` can lower total weight by ``|w|``,
so its image is exact only through ``T - |w|``.  An :class:`OperatorSeries`
``sum lam_w s_w`` requires every ``lam_w`` to have weight at least ``|w|``;
then the action never lowers weight and stays exact through the input
truncation.
"""
from __future__ import annotations

import json
import random
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .hopf import (EMPTY, MultiIndex, SElement, _as_selement, act_basis_on_monomial,
                   basis_of_weight, basis_up_to, dual_from_json, dual_from_terms,
                   dual_terms, dual_to_json, dual_variables, exponent_to_multi,
                   multiply, r_star_basis, s, split_exponent, splittings)
from .series import GradedSeries, SeriesError, _min_trunc, _norm


# -- term-level helpers -----------------------------------------------------


def _groups(e):
    """Split a module element into ``{geometric exponent: {MultiIndex: coeff}}``."""
    dual_pos, geo = split_exponent(e)
    geo_vars = tuple(e.variables[i] for i in geo)
    for n, w in geo_vars:
        if w != 1:
            raise SeriesError(f"geometric variable {n!r} must have weight 1")
    groups = {}
    for exp, c in e.terms.items():
        g = tuple(exp[i] for i in geo)
        u = exponent_to_multi(exp, dual_pos)
        bucket = groups.setdefault(g, {})
        bucket[u] = bucket.get(u, 0) + c
    return geo_vars, groups


def _assemble(geo_vars, acc, truncation, min_dual=0):
    K = max([min_dual] + [max(u) for (_, u) in acc if u])
    variables = geo_vars + dual_variables(K)
    terms = {}
    for (g, u), c in acc.items():
        if not c:
            continue
        mult = u.multiplicities()
        e = g + tuple(mult.get(k, 0) for k in range(1, K + 1))
        terms[e] = terms.get(e, 0) + c
    return GradedSeries(variables, terms, truncation)


def _n_dual(e):
    return max((int(n[2:]) for n in e.names if n.startswith("s*")), default=0)


def _r_star_dict(v, lam):
    out = {}
    for u, c in lam.items():
        for sp, k in r_star_basis(v, u):
            out[sp] = out.get(sp, 0) + c * k
    return out


def _act_basis_groups(w, groups, acc, scale=None, limit=None):
    """Accumulate ``scale * s_w(e)`` into ``acc`` (keys ``(geo exp, MultiIndex)``)."""
    for g, lam in groups.items():
        for w1, w2 in splittings(w):
            geo_out = act_basis_on_monomial(w2, g)
            if not geo_out:
                continue
            dual_out = _r_star_dict(w1, lam)
            if not dual_out:
                continue
            for u, c in dual_out.items():
                for ge, k in geo_out:
                    gw = sum(ge)
                    if scale is None:
                        if limit is not None and gw + u.weight > limit:
                            continue
                        key = (ge, u)
                        acc[key] = acc.get(key, 0) + c * k
                    else:
                        for v, d in scale.items():
                            uv = u.union(v)
                            if limit is not None and gw + uv.weight > limit:
                                continue
                            key = (ge, uv)
                            acc[key] = acc.get(key, 0) + c * k * d


def act(a, e):
    """Action of an element of S (or an :class:`OperatorSeries`) on a module element."""
    if isinstance(a, OperatorSeries):
        return a.apply(e)
    a = _as_selement(a)
    geo_vars, groups = _groups(e)
    T = e.truncation
    if T is not None and a.terms:
        T = max(T - max(w.weight for w in a.terms), -1)
        if T < 0:
            return GradedSeries(geo_vars, {}, 0)
    acc = {}
    for w, c in a.terms.items():
        part = {}
        _act_basis_groups(w, groups, part, limit=T)
        for key, v in part.items():
            acc[key] = acc.get(key, 0) + c * v
    return _assemble(geo_vars, acc, T, _n_dual(e))


# -- multiplicative operators -----------------------------------------------


class OperatorSeries:
    """``sum lam_w s_w`` with dual coefficients, truncated at weight T."""

    def __init__(self, terms, truncation):
        self.truncation = truncation
        clean = {}
        for w, lam in terms.items():
            w = MultiIndex(w)
            if w.weight > truncation:
                continue
            d = lam if isinstance(lam, dict) else (dual_terms(lam) if not lam.is_zero() else {})
            d = {MultiIndex(u): c for u, c in d.items() if c}
            if any(u.weight < w.weight for u in d):
                raise SeriesError(f"coefficient of {w!r} has weight below {w.weight}")
            d = {u: c for u, c in d.items() if u.weight <= truncation}
            if d:
                clean[w] = d
        self.terms = clean

    @classmethod
    def identity(cls, truncation):
        return cls({EMPTY: {EMPTY: 1}}, truncation)

    def coefficient(self, w):
        return dual_from_terms(self.terms.get(MultiIndex(w), {}))

    def apply(self, e):
        T = _min_trunc(e.truncation, self.truncation)
        geo_vars, groups = _groups(e)
        acc = {}
        for w, lam in sorted(self.terms.items(), key=lambda t: t[0].sort_key()):
            _act_basis_groups(w, groups, acc, scale=lam, limit=T)
        return _assemble(geo_vars, acc, T, _n_dual(e))

    def __repr__(self):
        return f"OperatorSeries({len(self.terms)} terms, T={self.truncation})"


def _dual_weight_check(phis):
    for i, p in enumerate(phis, start=1):
        if p is None or p.is_zero():
            continue
        ws = {u.weight for u in dual_terms(p)}
        if ws != {i}:
            raise SeriesError(f"phi_{i} must be homogeneous of weight {i}, got weights {sorted(ws)}")


def operator_from_series(phis, truncation):
    """The multiplicative operator with ``phi(x) = x + sum phi_i x^(i+1)``.

    ``phis[i-1]`` is ``phi_i``; missing entries are zero.  The coefficient
    of ``s_w`` is the product of ``phi_k`` over the parts ``k`` of ``w``.
    """
    phis = list(phis)
    _dual_weight_check(phis)
    dphi = {i: dual_terms(p) for i, p in enumerate(phis, start=1) if p is not None and not p.is_zero()}
    terms = {EMPTY: {EMPTY: 1}}
    for w in basis_up_to(truncation):
        if not w:
            continue
        if any(k not in dphi for k in w):
            continue
        prod = {EMPTY: 1}
        for k in w:
            nxt = {}
            for u, c in prod.items():
                for v, d in dphi[k].items():
                    uv = u.union(v)
                    if uv.weight <= truncation:
                        nxt[uv] = nxt.get(uv, 0) + c * d
            prod = {u: c for u, c in nxt.items() if c}
        if prod:
            terms[w] = prod
    return OperatorSeries(terms, truncation)


def is_multiplicative_projector(phis, truncation):
    """True iff ``phi(phi_i) = 0`` for every ``i``."""
    phis = list(phis)
    op = operator_from_series(phis, truncation)
    for p in phis:
        if p is None or p.is_zero():
            continue
        if not op.apply(p.with_truncation(truncation)).is_zero():
            return False
    return True


# -- the one-dimensional representation -------------------------------------


class RepresentationMismatch(ArithmeticError):
    """The two computations of the one-dimensional representation disagree."""


def _D(p, u="u"):
    """``u^2 d/du``."""
    if u not in p.names:
        return GradedSeries(p.variables, {}, p.truncation)
    i = p.names.index(u)
    terms = {}
    for e, c in p.terms.items():
        if e[i]:
            f = list(e)
            f[i] += 1
            terms[tuple(f)] = c * e[i]
    return GradedSeries(p.variables, terms, p.truncation)


@lru_cache(maxsize=None)
def primitive_expansion(w):
    """``s_w`` as a noncommutative polynomial in the primitives ``s_(k)``.

    Returns ``((sequence, coeff), ...)``; ``(k1, ..., kl)`` stands for
    ``s_(k1) * ... * s_(kl)``.  Uses that the product of the primitives
    over the parts of ``w`` is ``prod m_j! * s_w`` plus terms with fewer parts.
    """
    w = MultiIndex(w)
    if not w:
        return (((), 1),)
    seq = tuple(sorted(w))
    prod = s()
    for k in seq:
        prod = multiply(prod, s(k))
    scale = 1
    for m in w.multiplicities().values():
        scale *= factorial(m)
    if prod.coeff(w) != scale:
        raise RepresentationMismatch(f"leading coefficient of the product for {w!r}")
    out = {seq: Fraction(1, scale)}
    for v, c in prod.terms.items():
        if v == w:
            continue
        if len(v) >= len(w):
            raise RepresentationMismatch(f"product for {w!r} contains {v!r}")
        for sq, d in primitive_expansion(v):
            out[sq] = out.get(sq, 0) - Fraction(c, scale) * d
    return tuple(sorted(((k, _norm(c)) for k, c in out.items() if c), key=lambda t: (len(t[0]), t[0])))


def _rep_differential(w, p):
    w = MultiIndex(w)
    if any(k != 1 for k in w):
        return p * 0
    out = p
    for _ in range(len(w)):
        out = _D(out)
    return out * Fraction(1, factorial(len(w)))


def _rep_structural(w, p):
    total = p * 0
    for seq, c in primitive_expansion(w):
        q = p
        for k in reversed(seq):
            q = _D(q) if k == 1 else q * 0
        total = total + q * c
    return total


def one_dim_rep_eq11(a, p):
    """The representation with ``s_(1) -> u^2 d/du`` and ``s_(n) -> 0`` for ``n >= 2``.

    ``p`` is a polynomial in ``u``.  Every basis element is evaluated both
    through powers of ``u^2 d/du`` and through its expansion in primitives;
    a disagreement raises :class:`RepresentationMismatch`.
    """
    a = _as_selement(a)
    total = p * 0
    for w, c in a.terms.items():
        d = _rep_differential(w, p)
        st = _rep_structural(w, p)
        if not (d - st).is_zero():
            raise RepresentationMismatch(f"routes disagree on {w!r}")
        total = total + d * c
    return total


# -- product series ----------------------------------------------------------


class PhiSeries:
    """``sum lam_ij s_wi (x) s_wj`` with dual coefficients; pairs with ``|wi|+|wj| <= T``."""

    def __init__(self, terms, truncation):
        self.truncation = truncation
        clean = {}
        for (wi, wj), lam in terms.items():
            wi, wj = MultiIndex(wi), MultiIndex(wj)
            if wi.weight + wj.weight > truncation:
                continue
            d = lam if isinstance(lam, dict) else (dual_terms(lam) if not lam.is_zero() else {})
            d = {MultiIndex(u): c for u, c in d.items() if c}
            if d:
                clean[(wi, wj)] = d
        self.terms = clean

    @classmethod
    def unit(cls, truncation):
        return cls({(EMPTY, EMPTY): {EMPTY: 1}}, truncation)

    def coefficient(self, wi, wj):
        return dual_from_terms(self.terms.get((MultiIndex(wi), MultiIndex(wj)), {}))

    def keys(self):
        return sorted(self.terms, key=lambda k: (k[0].weight + k[1].weight, k[0].sort_key(), k[1].sort_key()))

    def __eq__(self, other):
        return isinstance(other, PhiSeries) and self.terms == other.terms

    __hash__ = None

    def to_json(self):
        K = max([1] + [max(u) for d in self.terms.values() for u in d if u])
        return {"truncation": self.truncation,
                "terms": [{"wi": list(wi), "wj": list(wj),
                           "poly": dual_to_json(dual_from_terms(self.terms[(wi, wj)]), K)}
                          for wi, wj in self.keys()]}

    @classmethod
    def from_json(cls, data):
        terms = {}
        for t in data["terms"]:
            terms[(MultiIndex(t["wi"]), MultiIndex(t["wj"]))] = dual_from_json(t["poly"])
        return cls(terms, data["truncation"])


def stable_product_eval(phi, u, v):
    """``sum lam_ij s_wi(u) s_wj(v)``."""
    total = None
    cache_u, cache_v = {}, {}
    for wi, wj in phi.keys():
        if wi not in cache_u:
            cache_u[wi] = act(SElement({wi: 1}), u)
        if wj not in cache_v:
            cache_v[wj] = act(SElement({wj: 1}), v)
        a, b = cache_u[wi], cache_v[wj]
        if a.is_zero() or b.is_zero():
            continue
        term = dual_from_terms(phi.terms[(wi, wj)]) * a * b
        total = term if total is None else total + term
    if total is None:
        return (u * v) * 0
    return total


class PhiRecoveryError(ArithmeticError):
    def __init__(self, weight, message):
        super().__init__(f"weight {weight}: {message}")
        self.weight = weight


def _monomial(w):
    return dual_from_terms({MultiIndex(w): 1})


def recover_phi(oracle, W, verify=8, seed=0):
    """Coefficients ``lam_ij`` of a product from its values on dual monomials.

    For ``u = (s*)^a`` and ``v = (s*)^b`` only the terms with ``|wi| <= |a|``
    and ``|wj| <= |b|`` survive, and ``s_a(u) = s_b(v) = 1``; so ``lam_ab``
    is ``u o v`` minus the already recovered terms.  Pairs are processed by
    total weight, then in graded-lex order.  Afterwards the result is checked
    on ``verify`` random integer combinations.
    """
    one = _monomial(())
    if dual_terms(oracle(one, one)) == {}:
        raise PhiRecoveryError(0, "1 o 1 = 0, no product series has a zero unit row")
    pairs = sorted(((a, b) for a in basis_up_to(W) for b in basis_up_to(W - a.weight)),
                   key=lambda p: (p[0].weight + p[1].weight, p[0].sort_key(), p[1].sort_key()))
    phi = PhiSeries({}, W)
    for a, b in pairs:
        u, v = _monomial(a), _monomial(b)
        value = oracle(u, v)
        known = stable_product_eval(phi, u, v)
        lam = value - known
        if not lam.is_zero():
            try:
                phi.terms[(a, b)] = dual_terms(lam.drop_unused())
            except ValueError:
                raise PhiRecoveryError(a.weight + b.weight, "oracle value is not a dual element")
    rng = random.Random(seed)
    for _ in range(verify):
        for n in range(W + 1):
            for m in range(W - n + 1):
                u = _random_combo(rng, n)
                v = _random_combo(rng, m)
                if not (stable_product_eval(phi, u, v) - oracle(u, v)).is_zero():
                    raise PhiRecoveryError(n + m, "oracle is not given by any product series")
    return phi


def _random_combo(rng, n):
    return dual_from_terms({w: rng.randint(-3, 3) for w in basis_of_weight(n)})


def dumps_phi(phi):
    return json.dumps(phi.to_json(), sort_keys=True)
