"""The Landweber-Novikov Hopf algebra S and its dual S*.

Basis elements ``s_w`` of S are indexed by multisets ``w`` of positive
integers (:class:`MultiIndex`).  The product of S is computed through the
representation on products of geometric cobordism elements
``x_1 * ... * x_N``, where ``s_(k)`` sends ``x`` to ``x**(k+1)``, longer
``s_w`` kill ``x``, and actions on products follow the coproduct.

Elements of S* are polynomials in the generators ``s*k`` (series variables
named ``"s*1"``, ``"s*2"``, ...).  The monomial ``s*k1 * ... * s*kl`` is the
dual basis vector of ``s_(k1,...,kl)``; :func:`dual_basis_check` confirms this
against the coproduct instead of assuming it.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import comb

from .series import DUAL_PREFIX, GradedSeries, _norm


class MultiIndex(tuple):
    """Multiset of positive integers, stored in descending order."""

    __slots__ = ()

    def __new__(cls, parts=()):
        parts = tuple(sorted((int(k) for k in parts), reverse=True))
        if parts and parts[-1] < 1:
            raise ValueError(f"parts must be positive integers, got {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self):
        return sum(self)

    @property
    def parts(self):
        return tuple(self)

    def multiplicities(self):
        out = {}
        for k in self:
            out[k] = out.get(k, 0) + 1
        return out

    def union(self, other):
        return MultiIndex(self + other)

    def sort_key(self):
        return (self.weight, tuple(reversed(self)))

    def __repr__(self):
        return "s_(" + ",".join(map(str, self)) + ")" if self else "s_()"


EMPTY = MultiIndex()


def partitions(n, largest=None):
    """Partitions of ``n`` as descending tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def basis_of_weight(n):
    return tuple(sorted((MultiIndex(p) for p in partitions(n)), key=MultiIndex.sort_key))


def basis_up_to(W):
    """All multi-indices of weight <= W, ordered by weight then parts."""
    return [w for n in range(W + 1) for w in basis_of_weight(n)]


@lru_cache(maxsize=None)
def splittings(w):
    """Ordered pairs ``(w', w'')`` of multisets with ``w' + w'' = w``, each once."""
    mult = sorted(w.multiplicities().items())
    out = []
    for counts in iproduct(*(range(m + 1) for _, m in mult)):
        left, right = [], []
        for (k, m), c in zip(mult, counts):
            left += [k] * c
            right += [k] * (m - c)
        out.append((MultiIndex(left), MultiIndex(right)))
    return tuple(out)


def coproduct(w):
    """``Delta s_w`` as a mapping ``(w', w'') -> 1``."""
    return {pair: 1 for pair in splittings(MultiIndex(w))}


# -- elements of S ---------------------------------------------------------


class SElement:
    """Finite rational combination of basis elements ``s_w``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for w, c in (terms or {}).items():
            if c:
                w = MultiIndex(w)
                clean[w] = _norm(Fraction(clean.get(w, 0)) + c)
                if not clean[w]:
                    del clean[w]
        self.terms = clean

    @classmethod
    def basis(cls, *parts):
        return cls({MultiIndex(parts): 1})

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: t[0].sort_key()))

    def __add__(self, other):
        other = _as_selement(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return SElement(out)

    __radd__ = __add__

    def __neg__(self):
        return SElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_selement(other))

    def __rsub__(self, other):
        return _as_selement(other) - self

    def __mul__(self, other):
        if isinstance(other, SElement):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return SElement({w: c * other for w, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        other = _as_selement(other)
        return self.terms == other.terms

    __hash__ = None

    def coeff(self, w):
        return self.terms.get(MultiIndex(w), 0)

    def homogeneous_parts(self):
        out = {}
        for w, c in self.terms.items():
            out.setdefault(w.weight, {})[w] = c
        return {n: SElement(t) for n, t in sorted(out.items())}

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{w!r}" for w, c in self)


def _as_selement(x):
    if isinstance(x, SElement):
        return x
    if isinstance(x, MultiIndex):
        return SElement({x: 1})
    if isinstance(x, (int, Fraction)):
        return SElement({EMPTY: x})
    raise TypeError(f"cannot interpret {x!r} as an element of S")


def s(*parts):
    """Shorthand for the basis element ``s_(parts)``."""
    return SElement.basis(*parts)


def counit(a):
    return _as_selement(a).coeff(())


# -- action on geometric cobordism elements --------------------------------


@lru_cache(maxsize=None)
def act_basis_on_monomial(w, exponent):
    """``s_w`` applied to ``x_1**e_1 * ... * x_N**e_N`` with all ``x_i`` geometric.

    Returns a tuple of ``(exponent, coefficient)`` pairs.  Each copy of a
    part ``k`` of ``w`` lands on a distinct geometric factor and raises it by
    ``k``; the count of placements gives the coefficient.
    """
    states = {(tuple(exponent), tuple(exponent)): 1}  # (free slots, result exponent)
    for k, m in sorted(MultiIndex(w).multiplicities().items()):
        nxt = {}
        for (free, res), coef in states.items():
            for counts in _distribute(m, free):
                c = coef
                for r, ci in zip(free, counts):
                    c *= comb(r, ci)
                key = (tuple(r - ci for r, ci in zip(free, counts)),
                       tuple(e + ci * k for e, ci in zip(res, counts)))
                nxt[key] = nxt.get(key, 0) + c
        states = nxt
    out = {}
    for (_, res), c in states.items():
        out[res] = out.get(res, 0) + c
    return tuple(sorted(out.items()))


def _distribute(m, caps):
    if not caps:
        if m == 0:
            yield ()
        return
    for c in range(min(m, caps[0]) + 1):
        for rest in _distribute(m - c, caps[1:]):
            yield (c,) + rest


def act_geometric(a, monomial, names=None):
    """Action of ``a`` in S on a monomial in geometric variables.

    ``monomial`` is an exponent tuple over ``x1..xN`` (or over ``names``).
    Returns an exact :class:`GradedSeries`.
    """
    a = _as_selement(a)
    monomial = tuple(monomial)
    if names is None:
        names = tuple(f"x{i + 1}" for i in range(len(monomial)))
    variables = tuple((n, 1) for n in names)
    out = {}
    for w, c in a.terms.items():
        for e, k in act_basis_on_monomial(w, monomial):
            out[e] = out.get(e, 0) + c * k
    return GradedSeries(variables, out, None)


# -- product of S ----------------------------------------------------------


class DecompositionError(ArithmeticError):
    """The product did not decompose cleanly over the basis (internal fault)."""


@lru_cache(maxsize=None)
def multiply_basis(a, b):
    """Structure constants of ``s_a * s_b`` as a tuple of ``(w, coeff)``.

    ``s_a * s_b`` acts on ``X = x_1 ... x_N`` as ``s_a(s_b(X))`` with
    ``N = len(a) + len(b)``.  ``s_w(X)`` contains the distinguished monomial
    ``x_1^(k_1+1) ... x_l^(k_l+1) x_(l+1) ... x_N`` with coefficient 1 and no
    other ``s_v`` of the same weight does, which identifies the coefficients.
    """
    a, b = MultiIndex(a), MultiIndex(b)
    n = len(a) + len(b)
    X = (1,) * n
    image = {}
    for e, c in act_basis_on_monomial(b, X):
        for f, d in act_basis_on_monomial(a, e):
            image[f] = image.get(f, 0) + c * d
    image = {e: c for e, c in image.items() if c}
    result = {}
    for w in basis_of_weight(a.weight + b.weight):
        if len(w) > n:
            continue
        marker = tuple(k + 1 for k in w) + (1,) * (n - len(w))
        c = image.get(marker, 0)
        if c:
            result[w] = c
    residual = dict(image)
    for w, c in result.items():
        for e, k in act_basis_on_monomial(w, X):
            residual[e] = residual.get(e, 0) - c * k
    if any(residual.values()):
        raise DecompositionError(f"nonzero residual decomposing s_{a} * s_{b}")
    return tuple(sorted(result.items(), key=lambda t: t[0].sort_key()))


def multiply(a, b):
    a, b = _as_selement(a), _as_selement(b)
    out = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            for w, k in multiply_basis(wa, wb):
                out[w] = out.get(w, 0) + ca * cb * k
    return SElement(out)


def structure_constants_json(W):
    """Rows ``{"a", "b", "product"}`` for all basis pairs of total weight <= W."""
    rows = []
    for a in basis_up_to(W):
        for b in basis_up_to(W - a.weight):
            rows.append({
                "a": list(a),
                "b": list(b),
                "product": [{"w": list(w), "coef": str(c)} for w, c in multiply_basis(a, b)],
            })
    return rows


# -- the dual S* -----------------------------------------------------------


def dual_name(k):
    return f"{DUAL_PREFIX}{k}"


def dual_variables(K):
    return tuple((dual_name(k), k) for k in range(1, K + 1))


def _dual_index(name):
    return int(name[len(DUAL_PREFIX):])


def s_star(k, truncation=None):
    """The generator ``s*k`` of S*."""
    return GradedSeries(((dual_name(k), k),), {(1,): 1}, truncation)


def dual_monomial(w, c=1, truncation=None):
    """``c * s*k1 * ... * s*kl`` for ``w = (k1, ..., kl)``."""
    w = MultiIndex(w)
    if not w:
        return GradedSeries((), {(): c}, truncation)
    K = max(w)
    mult = w.multiplicities()
    return GradedSeries(dual_variables(K), {tuple(mult.get(k, 0) for k in range(1, K + 1)): c},
                        truncation)


def dual_from_terms(terms, truncation=None):
    """Build a dual element from ``{MultiIndex: coeff}``."""
    terms = {MultiIndex(w): c for w, c in terms.items() if c}
    K = max((max(w) for w in terms if w), default=0)
    out = {}
    for w, c in terms.items():
        mult = w.multiplicities()
        e = tuple(mult.get(k, 0) for k in range(1, K + 1))
        out[e] = out.get(e, 0) + c
    return GradedSeries(dual_variables(K), out, truncation)


def split_exponent(series):
    """Positions of dual and geometric variables of a series."""
    dual = [(i, _dual_index(n)) for i, n in enumerate(series.names) if n.startswith(DUAL_PREFIX)]
    geo = [i for i, n in enumerate(series.names) if not n.startswith(DUAL_PREFIX)]
    return dual, geo


def exponent_to_multi(e, dual_pos):
    parts = []
    for i, k in dual_pos:
        parts += [k] * e[i]
    return MultiIndex(parts)


def dual_terms(lam):
    """``{MultiIndex: coeff}`` for a series in dual variables only."""
    dual, geo = split_exponent(lam)
    if any(any(e[i] for i in geo) for e in lam.terms):
        raise ValueError("series has non-dual variables")
    return {exponent_to_multi(e, dual): c for e, c in lam.terms.items()}


@lru_cache(maxsize=None)
def _pair_monomial(kseq, w):
    """Number of ways the iterated coproduct of ``s_w`` puts ``s_(k_i)`` in slot i."""
    if not kseq:
        return 1 if not w else 0
    total = 0
    first = MultiIndex((kseq[0],))
    for left, right in splittings(w):
        if left == first:
            total += _pair_monomial(kseq[1:], right)
    return total


def pairing(lam, a):
    """The bilinear pairing of S* with S, computed from the coproduct."""
    a = _as_selement(a)
    total = 0
    for u, c in dual_terms(lam).items():
        for w, d in a.terms.items():
            if u.weight == w.weight:
                total += c * d * _pair_monomial(tuple(u), w)
    return _norm(Fraction(total))


def dual_basis_check(W):
    """True iff monomials in ``s*k`` pair with ``{s_w}`` as the identity through weight W."""
    for n in range(W + 1):
        for u in basis_of_weight(n):
            for w in basis_of_weight(n):
                if _pair_monomial(tuple(u), w) != (1 if u == w else 0):
                    return False
    return True


@lru_cache(maxsize=None)
def r_star_basis(v, u):
    """``R*_{s_v}`` applied to the dual monomial of ``u``, as ``((s', coeff), ...)``.

    The value on ``s'`` is the coefficient of ``s_u`` in ``s' * s_v``.  That
    is read off the structure constants only for a single generator; a longer
    monomial is split as ``s*k`` times the rest, and ``R*_{s_v}`` of a product
    follows the coproduct of ``s_v`` because the product of S is compatible
    with its coproduct.
    """
    v, u = MultiIndex(v), MultiIndex(u)
    n = u.weight - v.weight
    if n < 0:
        return ()
    if not v:
        return ((u, 1),)
    if len(u) == 1:
        out = []
        for sp in basis_of_weight(n):
            c = dict(multiply_basis(sp, v)).get(u, 0)
            if c:
                out.append((sp, c))
        return tuple(out)
    head, rest = MultiIndex(u[:1]), MultiIndex(u[1:])
    acc = {}
    for v1, v2 in splittings(v):
        left = r_star_basis(v1, head)
        if not left:
            continue
        for sp2, c2 in r_star_basis(v2, rest):
            for sp1, c1 in left:
                w = sp1.union(sp2)
                acc[w] = acc.get(w, 0) + c1 * c2
    return tuple(sorted(((w, c) for w, c in acc.items() if c), key=lambda t: t[0].sort_key()))


def r_star(a, lam):
    """Right-multiplication dual: the functional ``s' -> <lam, s' * a>``.

    Lowers weight by the weight of ``a``; the result is again a polynomial in
    the ``s*k``.  The truncation, if any, drops by the top weight of ``a``.
    """
    a = _as_selement(a)
    out = {}
    for u, c in dual_terms(lam).items():
        for v, d in a.terms.items():
            for sp, k in r_star_basis(v, u):
                out[sp] = out.get(sp, 0) + c * d * k
    trunc = lam.truncation
    if trunc is not None and a.terms:
        trunc = max(trunc - max(w.weight for w in a.terms), 0)
    return dual_from_terms(out, trunc)


def multi_to_json(w):
    return list(MultiIndex(w))


def dumps_structure_constants(W):
    return json.dumps(structure_constants_json(W), sort_keys=True)


def dual_to_json(d, K=None):
    """Terms of a dual polynomial as ``[{"mono": [exponents of s*1..s*K], "coef"}]``."""
    terms = dual_terms(d)
    if K is None:
        K = max((max(w) for w in terms if w), default=0)
    poly = dual_from_terms(terms).extend(dual_variables(K)) if K else dual_from_terms(terms)
    return [{"mono": list(e), "coef": str(c)} for e, c in poly.sorted_terms()]


def dual_from_json(rows):
    if not rows:
        return GradedSeries((), {}, None)
    K = len(rows[0]["mono"])
    terms = {}
    for r in rows:
        if len(r["mono"]) != K:
            raise ValueError("inconsistent monomial lengths")
        terms[tuple(int(k) for k in r["mono"])] = Fraction(r["coef"])
    return GradedSeries(dual_variables(K), terms, None)
