"""Truncated multivariate power series over weighted variables.

Coefficients are exact rationals (``int`` when integral, ``Fraction``
otherwise).  Every variable carries a positive integer weight and a series
is truncated by total weight: a term ``c * x^e`` is kept only when
``sum(e_i * w_i) <= truncation``.  A truncation of ``None`` means the series
is an exact polynomial and nothing is ever discarded.

Variables named ``s*1``, ``s*2``, ... are the multiplicative generators of
the dual Landweber-Novikov algebra.  They are ordinary series variables here;
the algebraic meaning lives in :mod:`cobordalg.hopf`.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from numbers import Rational

DUAL_PREFIX = "s*"

_NAME_RE = re.compile(r"(.*?)(\d*)")


def _var_key(name):
    stem, digits = _NAME_RE.fullmatch(name).groups()
    return (name.startswith(DUAL_PREFIX), stem, int(digits) if digits else -1)


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _min_trunc(*ts):
    finite = [t for t in ts if t is not None]
    return min(finite) if finite else None


def _check_scalar(c):
    if isinstance(c, bool) or not isinstance(c, Rational):
        raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")
    return c


class SeriesError(ValueError):
    """Raised when a series operation's precondition does not hold."""


class GradedSeries:
    """Immutable truncated power series.

    ``variables`` is a tuple of ``(name, weight)`` pairs kept in a canonical
    order, ``terms`` maps exponent tuples to nonzero coefficients.
    """

    __slots__ = ("variables", "truncation", "terms", "_weights")

    def __init__(self, variables=(), terms=None, truncation=None, *, _trusted=False):
        variables = tuple((str(n), int(w)) for n, w in variables)
        terms = dict(terms or {})
        if not _trusted:
            names = [n for n, _ in variables]
            if len(set(names)) != len(names):
                raise SeriesError(f"duplicate variable names in {names}")
            for n, w in variables:
                if w < 1:
                    raise SeriesError(f"variable {n!r} must have weight >= 1")
            if truncation is not None and truncation < 0:
                raise SeriesError("truncation must be non-negative")
            order = sorted(range(len(variables)), key=lambda i: _var_key(variables[i][0]))
            cleaned = {}
            for e, c in terms.items():
                e = tuple(int(k) for k in e)
                if len(e) != len(variables) or min(e, default=0) < 0:
                    raise SeriesError(f"bad exponent vector {e} for {len(variables)} variables")
                c = _check_scalar(c)
                if c == 0:
                    continue
                if truncation is not None and sum(k * w for k, (_, w) in zip(e, variables)) > truncation:
                    continue
                cleaned[tuple(e[i] for i in order)] = _norm(Fraction(c))
            variables = tuple(variables[i] for i in order)
            terms = cleaned
        self.variables = variables
        self.truncation = truncation
        self.terms = terms
        self._weights = tuple(w for _, w in variables)

    # -- construction -------------------------------------------------------

    @classmethod
    def constant(cls, c, variables=(), truncation=None):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c}, truncation)

    @classmethod
    def gen(cls, name, variables, truncation=None):
        """The series consisting of the single variable ``name``."""
        variables = tuple(variables)
        names = [n for n, _ in variables]
        e = [0] * len(variables)
        e[names.index(name)] = 1
        return cls(variables, {tuple(e): 1}, truncation)

    @classmethod
    def from_monomials(cls, variables, monomials, truncation=None):
        """Build from ``{ {name: power}: coeff }`` style input given as pairs."""
        variables = tuple(variables)
        names = [n for n, _ in variables]
        terms = {}
        for powers, c in monomials:
            e = [0] * len(names)
            for n, k in powers.items():
                e[names.index(n)] += k
            terms[tuple(e)] = terms.get(tuple(e), 0) + c
        return cls(variables, terms, truncation)

    def _new(self, terms, truncation, variables=None):
        variables = self.variables if variables is None else variables
        if truncation is not None:
            ws = tuple(w for _, w in variables)
            terms = {e: c for e, c in terms.items()
                     if c and sum(k * w for k, w in zip(e, ws)) <= truncation}
        else:
            terms = {e: c for e, c in terms.items() if c}
        return GradedSeries(variables, {e: _norm(c) for e, c in terms.items()}, truncation,
                            _trusted=True)

    # -- basic queries ------------------------------------------------------

    @property
    def names(self):
        return tuple(n for n, _ in self.variables)

    def weight_of(self, e):
        return sum(k * w for k, w in zip(e, self._weights))

    def min_weight(self):
        """Lowest weight of a stored term, or ``None`` for the zero series."""
        return min((self.weight_of(e) for e in self.terms), default=None)

    def max_weight(self):
        return max((self.weight_of(e) for e in self.terms), default=None)

    def is_zero(self):
        return not self.terms

    def constant_term(self):
        return self.terms.get((0,) * len(self.variables), 0)

    def coeff(self, exponent):
        """Coefficient of a monomial given as exponent tuple or ``{name: power}``."""
        if isinstance(exponent, dict):
            e = [0] * len(self.variables)
            for n, k in exponent.items():
                if n not in self.names:
                    if k:
                        return 0
                    continue
                e[self.names.index(n)] = k
            exponent = tuple(e)
        return self.terms.get(tuple(exponent), 0)

    def sorted_terms(self):
        """Terms in graded-lexicographic order (weight, then exponent)."""
        return sorted(self.terms.items(), key=lambda t: (self.weight_of(t[0]), t[0]))

    def homogeneous_part(self, d):
        return self._new({e: c for e, c in self.terms.items() if self.weight_of(e) == d},
                         self.truncation)

    def truncate(self, truncation):
        return self._new(self.terms, _min_trunc(self.truncation, truncation))

    def with_truncation(self, truncation):
        """Reinterpret an exact polynomial at a finite truncation (or back)."""
        return self._new(self.terms, truncation)

    def degree_in(self, name):
        i = self.names.index(name)
        return max((e[i] for e in self.terms), default=0)

    def coefficient(self, name, k):
        """Coefficient of ``name**k`` as a series in the remaining variables."""
        if name not in self.names:
            if k == 0:
                return self
            return self._new({}, self.truncation)
        i = self.names.index(name)
        w = self._weights[i]
        rest = self.variables[:i] + self.variables[i + 1:]
        terms = {e[:i] + e[i + 1:]: c for e, c in self.terms.items() if e[i] == k}
        trunc = None if self.truncation is None else self.truncation - k * w
        if trunc is not None and trunc < 0:
            return GradedSeries(rest, {}, 0, _trusted=True)
        return GradedSeries(rest, terms, trunc, _trusted=True)

    def drop_unused(self):
        used = [i for i in range(len(self.variables)) if any(e[i] for e in self.terms)]
        variables = tuple(self.variables[i] for i in used)
        terms = {tuple(e[i] for i in used): c for e, c in self.terms.items()}
        return GradedSeries(variables, terms, self.truncation, _trusted=True)

    def extend(self, variables):
        """Same series viewed over a larger variable set."""
        merged = _merge_vars(self.variables, tuple(variables))
        return GradedSeries(merged, _remap(self.terms, self.variables, merged),
                            self.truncation, _trusted=True)

    # -- integrality --------------------------------------------------------

    def denominators(self):
        return sorted({c.denominator for c in self.terms.values() if type(c) is Fraction})

    def is_integral(self):
        return not self.denominators()

    def in_localization(self, m):
        """True when every denominator divides a power of ``m``."""
        return all(_divides_power_of(d, m) for d in self.denominators())

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GradedSeries):
            return other
        if isinstance(other, Rational) and not isinstance(other, bool):
            return GradedSeries.constant(other, self.variables, None)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        vs, ta, tb = _align(self, other)
        out = dict(ta)
        for e, c in tb.items():
            out[e] = out.get(e, 0) + c
        return self._new(out, _min_trunc(self.truncation, other.truncation), vs)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()}, self.truncation)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            if other == 0:
                return self._new({}, self.truncation)
            return self._new({e: c * other for e, c in self.terms.items()}, self.truncation)
        if not isinstance(other, GradedSeries):
            return NotImplemented
        vs, ta, tb = _align(self, other)
        trunc = _min_trunc(self.truncation, other.truncation)
        ws = tuple(w for _, w in vs)
        return GradedSeries(vs, _mul_terms(ta, tb, ws, trunc), trunc, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division of a series by zero")
            return self * (Fraction(1) / other)
        if isinstance(other, GradedSeries):
            return exact_divide(self, other)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise SeriesError("only non-negative integer powers are supported")
        result = GradedSeries.constant(1, self.variables, self.truncation)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        """Equality through the common truncation of both operands."""
        other = self._coerce(other) if not isinstance(other, GradedSeries) else other
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def agrees_through(self, other, weight):
        diff = self - other
        return all(diff.weight_of(e) > weight for e in diff.terms)

    # -- composition --------------------------------------------------------

    def compose(self, mapping):
        """Substitute series for variables simultaneously.

        ``mapping`` sends variable names to series (or rationals).  With a
        finite truncation every substituted series must have zero constant
        term and minimal weight at least that of the variable it replaces,
        so the result is exact through the common truncation.
        """
        mapping = {n: (v if isinstance(v, GradedSeries) else GradedSeries.constant(v))
                   for n, v in mapping.items() if n in self.names}
        if not mapping:
            return self
        trunc = _min_trunc(self.truncation, *(v.truncation for v in mapping.values()))
        sub_idx = [i for i, n in enumerate(self.names) if n in mapping]
        keep_idx = [i for i, n in enumerate(self.names) if n not in mapping]
        keep_vars = tuple(self.variables[i] for i in keep_idx)
        if trunc is not None:
            for i in sub_idx:
                name, w = self.variables[i]
                inner = mapping[name]
                if inner.constant_term() != 0:
                    raise SeriesError(f"substituted series for {name!r} has a nonzero constant term")
                mw = inner.min_weight()
                if mw is not None and mw < w:
                    raise SeriesError(
                        f"substituted series for {name!r} has weight {mw} < variable weight {w}")
        vs = keep_vars
        for inner in mapping.values():
            vs = _merge_vars(vs, inner.variables)
        ws = tuple(w for _, w in vs)
        inners = {}
        for i in sub_idx:
            name = self.variables[i][0]
            inner = mapping[name]
            inners[i] = _remap(inner.terms, inner.variables, vs)
        keep_pos = [vs.index(v) for v in keep_vars]

        groups = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in sub_idx)
            rest = [0] * len(vs)
            for j, i in enumerate(keep_idx):
                rest[keep_pos[j]] = e[i]
            groups.setdefault(key, {})
            r = tuple(rest)
            groups[key][r] = groups[key].get(r, 0) + c

        one = {(0,) * len(vs): 1}
        power_cache = {}

        def power(i, k):
            if k == 0:
                return one
            if (i, k) not in power_cache:
                power_cache[(i, k)] = _mul_terms(power(i, k - 1), inners[i], ws, trunc)
            return power_cache[(i, k)]

        out = {}
        for key, rest_terms in sorted(groups.items()):
            prod = one
            for i, k in zip(sub_idx, key):
                if k:
                    prod = _mul_terms(prod, power(i, k), ws, trunc)
                    if not prod:
                        break
            if not prod:
                continue
            for e, c in _mul_terms(rest_terms, prod, ws, trunc).items():
                out[e] = out.get(e, 0) + c
        return GradedSeries(vs, {e: _norm(c) for e, c in out.items() if c}, trunc, _trusted=True)

    def substitute(self, inner, name=None):
        """Replace the variable ``name`` (default: the only variable) by ``inner``."""
        if name is None:
            if len(self.variables) != 1:
                raise SeriesError("substitute needs a variable name for multivariate series")
            name = self.variables[0][0]
        if isinstance(inner, GradedSeries) and inner.constant_term() != 0:
            raise SeriesError("inner series must have zero constant term")
        return self.compose({name: inner})

    def revert(self, name=None):
        """Compositional inverse in the variable ``name``.

        Requires the part of degree one in ``name`` to be exactly ``name``
        and no part of degree zero.  Computed by fixed-point iteration
        ``r <- t - h(r)`` where ``s = t + h(t)``; each pass fixes at least
        one more weight.
        """
        name = self._single_var(name)
        if self.truncation is None:
            raise SeriesError("reversion needs a finite truncation")
        i = self.names.index(name)
        t = GradedSeries.gen(name, self.variables, self.truncation)
        if any(e[i] == 0 for e in self.terms):
            raise SeriesError("series to revert has terms of degree 0 in the variable")
        if self.coefficient(name, 1) != GradedSeries.constant(1, (), None):
            raise SeriesError("linear coefficient must be exactly 1")
        h = self - t
        r = t
        for _ in range(self.truncation + 1):
            nxt = t - h.compose({name: r})
            if nxt == r:
                break
            r = nxt
        return r

    def reciprocal(self):
        c0 = self.constant_term()
        if c0 == 0:
            raise SeriesError("reciprocal needs a nonzero constant term")
        if self.truncation is None:
            raise SeriesError("reciprocal needs a finite truncation")
        u = self * (Fraction(1) / c0) - 1
        return _binomial_series(u, Fraction(-1), self.truncation) * (Fraction(1) / c0)

    def nth_root(self, n):
        """The series ``r`` with ``r**n == self``, constant term 1, by the binomial series."""
        if not isinstance(n, int) or n < 1:
            raise SeriesError("root order must be a positive integer")
        if self.constant_term() != 1:
            raise SeriesError("nth_root needs constant term 1")
        if n == 1:
            return self
        if self.truncation is None:
            raise SeriesError("nth_root needs a finite truncation")
        return _binomial_series(self - 1, Fraction(1, n), self.truncation)

    def _single_var(self, name):
        if name is not None:
            return name
        free = [n for n in self.names if not n.startswith(DUAL_PREFIX)]
        if len(free) != 1:
            raise SeriesError("cannot infer the series variable; pass it explicitly")
        return free[0]

    # -- presentation -------------------------------------------------------

    def __repr__(self):
        return f"GradedSeries({self})"

    def __str__(self):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for e, c in self.sorted_terms():
                mono = "*".join(n if k == 1 else f"{n}^{k}"
                                for (n, _), k in zip(self.variables, e) if k)
                if not mono:
                    parts.append(str(c))
                elif c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(f"{c}*{mono}")
            body = " + ".join(parts).replace("+ -", "- ")
        if self.truncation is not None:
            body += f" + O(w^{self.truncation + 1})"
        return body

    def to_json(self):
        return {
            "variables": [{"name": n, "weight": w} for n, w in self.variables],
            "truncation": self.truncation,
            "terms": [{"exp": list(e), "num": str(Fraction(c).numerator),
                       "den": str(Fraction(c).denominator)}
                      for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data):
        variables = tuple((v["name"], v["weight"]) for v in data["variables"])
        terms = {tuple(t["exp"]): Fraction(int(t["num"]), int(t["den"])) for t in data["terms"]}
        return cls(variables, terms, data["truncation"])


def _divides_power_of(d, m):
    d = abs(d)
    while d > 1:
        g = gcd(d, m)
        if g == 1:
            return False
        while d % g == 0:
            d //= g
    return True


def _merge_vars(a, b):
    if a == b:
        return a
    weights = dict(a)
    for n, w in b:
        if weights.setdefault(n, w) != w:
            raise SeriesError(f"variable {n!r} has weight {weights[n]} and {w}")
    return tuple(sorted(weights.items(), key=lambda v: _var_key(v[0])))


def _remap(terms, old, new):
    if old == new:
        return terms
    pos = [new.index(v) for v in old]
    n = len(new)
    out = {}
    for e, c in terms.items():
        f = [0] * n
        for p, k in zip(pos, e):
            f[p] = k
        out[tuple(f)] = c
    return out


def _align(a, b):
    if a.variables == b.variables:
        return a.variables, a.terms, b.terms
    vs = _merge_vars(a.variables, b.variables)
    return vs, _remap(a.terms, a.variables, vs), _remap(b.terms, b.variables, vs)


def _mul_terms(ta, tb, ws, trunc):
    if not ta or not tb:
        return {}
    lb = sorted(((sum(k * w for k, w in zip(e, ws)), e, c) for e, c in tb.items()),
                key=lambda t: t[0])
    out = {}
    for ea, ca in ta.items():
        wa = sum(k * w for k, w in zip(ea, ws))
        for wb, eb, cb in lb:
            if trunc is not None and wa + wb > trunc:
                break
            e = tuple([x + y for x, y in zip(ea, eb)])
            out[e] = out.get(e, 0) + ca * cb
    return {e: _norm(c) for e, c in out.items() if c}


def _binomial_series(u, exponent, truncation):
    """``(1 + u)**exponent`` for ``u`` without constant term."""
    if u.constant_term() != 0:
        raise SeriesError("binomial series needs u with zero constant term")
    result = GradedSeries.constant(1, u.variables, truncation)
    mw = u.min_weight()
    if mw is None:
        return result
    term = result
    binom = Fraction(1)
    for k in range(1, truncation // mw + 1):
        binom = binom * (exponent - k + 1) / k
        term = term * u
        if term.is_zero():
            break
        result = result + term * binom
    return result


def exact_divide(p, a):
    """Quotient ``q`` with ``q * a == p``, asserting a zero remainder.

    Works in the power-series ring: the lowest-weight part of ``a`` divides
    each successive lowest-weight part of the residual as a polynomial.  The
    quotient is known through ``p.truncation - min_weight(a)``.
    """
    if a.is_zero():
        raise ZeroDivisionError("exact_divide by the zero series")
    vs, tp, ta = _align(p, a)
    ws = tuple(w for _, w in vs)
    d0 = a.min_weight()
    lead = {e: c for e, c in ta.items() if sum(k * w for k, w in zip(e, ws)) == d0}
    trunc = p.truncation
    if a.truncation is not None:
        # only the part of a below its truncation is known; q through a.T - d0 + min(q)
        trunc = _min_trunc(trunc, a.truncation)
    q_trunc = None if trunc is None else trunc - d0
    residual = dict(tp)
    quotient = {}

    def wt(e):
        return sum(k * w for k, w in zip(e, ws))

    while residual:
        low = min(wt(e) for e in residual)
        if q_trunc is not None and low - d0 > q_trunc:
            break
        part = {e: c for e, c in residual.items() if wt(e) == low}
        q_part = _divide_homogeneous(part, lead, p, a)
        for e, c in q_part.items():
            quotient[e] = quotient.get(e, 0) + c
        prod = _mul_terms(q_part, ta, ws, trunc)
        for e, c in prod.items():
            residual[e] = residual.get(e, 0) - c
        residual = {e: c for e, c in residual.items()
                    if c and (trunc is None or wt(e) <= trunc)}
    return GradedSeries(vs, {e: _norm(c) for e, c in quotient.items() if c}, q_trunc,
                        _trusted=True)


def _divide_homogeneous(num, den, p, a):
    num = dict(num)
    lead_e = max(den)
    lead_c = den[lead_e]
    q = {}
    while num:
        e = max(num)
        diff = tuple(x - y for x, y in zip(e, lead_e))
        if min(diff) < 0:
            raise SeriesError(f"{p} is not divisible by {a}")
        c = Fraction(num[e]) / lead_c
        q[diff] = _norm(c)
        for f, d in den.items():
            g = tuple(x + y for x, y in zip(diff, f))
            v = num.get(g, 0) - c * d
            if v:
                num[g] = v
            else:
                num.pop(g, None)
    return q


class SeriesRing:
    """Convenience factory for series over a fixed variable set and truncation."""

    def __init__(self, variables, truncation=None):
        self.variables = GradedSeries(variables).variables
        self.truncation = truncation

    def __call__(self, c=0):
        return GradedSeries.constant(c, self.variables, self.truncation)

    def gen(self, name):
        return GradedSeries.gen(name, self.variables, self.truncation)

    def gens(self):
        return tuple(self.gen(n) for n, _ in self.variables)

    def monomial(self, exponent, c=1):
        return GradedSeries(self.variables, {tuple(exponent): c}, self.truncation)

    def monomials(self, max_weight):
        """All exponent vectors of weight <= ``max_weight`` in graded-lex order."""
        ws = [w for _, w in self.variables]
        out = []

        def rec(i, left, acc):
            if i == len(ws):
                out.append(tuple(acc))
                return
            for k in range(left // ws[i] + 1):
                rec(i + 1, left - k * ws[i], acc + [k])

        rec(0, max_weight, [])
        return sorted(out, key=lambda e: (sum(k * w for k, w in zip(e, ws)), e))
