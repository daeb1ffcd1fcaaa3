"""The universal formal group over S*, its logarithm, and the ring Lambda.

Geometric variables have weight 1 and ``s*k`` has weight k, so the term
``alpha_ij x^i y^j`` has total weight ``2(i+j) - 1``.  A table that knows
every coefficient of weight at most W therefore determines the series
through total weight ``2W + 1`` (:func:`series_truncation`).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .hopf import (basis_of_weight, dual_terms, dual_variables,
                   r_star, s)
from .lattice import IntegerEchelon
from .series import DUAL_PREFIX, GradedSeries, SeriesError


def series_truncation(W):
    return 2 * W + 1


def coefficient_weight_bound(T):
    """Largest coefficient weight fully visible in a series truncated at T."""
    return (T - 1) // 2


def _rename(series, mapping):
    variables = tuple((mapping.get(n, n), w) for n, w in series.variables)
    return GradedSeries(variables, series.terms, series.truncation)


def _t_to_dual(series):
    return _rename(series, {n: DUAL_PREFIX + n[1:] for n in series.names if n.startswith("t")})


def _exact(series):
    return series.drop_unused().with_truncation(None)


# -- tables -----------------------------------------------------------------


class FGLTable:
    """Coefficients ``alpha_ij`` (``i, j >= 1``, ``i + j - 1 <= W``) as dual polynomials."""

    def __init__(self, truncation, entries):
        self.truncation = truncation
        self.entries = {k: _exact(v) for k, v in entries.items()}

    def entry(self, i, j):
        if i + j - 1 > self.truncation:
            raise KeyError(f"alpha_{i}{j} has weight {i + j - 1} > {self.truncation}")
        return self.entries[(i, j)]

    def keys(self):
        return sorted(self.entries, key=lambda k: (k[0] + k[1], k))

    def __eq__(self, other):
        if not isinstance(other, FGLTable) or self.truncation != other.truncation:
            return False
        return self.keys() == other.keys() and all(
            (self.entries[k] - other.entries[k]).is_zero() for k in self.keys())

    __hash__ = None

    def mismatches(self, other):
        return [k for k in self.keys() if not (self.entries[k] - other.entries[k]).is_zero()]

    def series(self, x="x1", y="x2", truncation=None):
        """``f(x, y) = x + y + sum alpha_ij x^i y^j`` as a graded series."""
        T = series_truncation(self.truncation) if truncation is None else truncation
        if T > series_truncation(self.truncation):
            raise SeriesError(f"table of weight {self.truncation} only determines f "
                              f"through {series_truncation(self.truncation)}")
        variables = ((x, 1), (y, 1)) + dual_variables(self.truncation)
        f = GradedSeries.gen(x, variables, T) + GradedSeries.gen(y, variables, T)
        for (i, j), a in self.entries.items():
            if 2 * (i + j) - 1 > T:
                continue
            mono = GradedSeries(((x, 1), (y, 1)), {(i, j): 1}, T)
            f = f + mono * a.with_truncation(T)
        return f

    def to_json(self, lambda_coords=None):
        K = self.truncation
        rows = []
        for i, j in self.keys():
            poly = self.entries[(i, j)].extend(dual_variables(K))
            row = {"i": i, "j": j, "poly": [{"mono": list(e), "coef": str(c)}
                                            for e, c in poly.sorted_terms()]}
            if lambda_coords is not None and (i, j) in lambda_coords:
                row["lambda"] = lambda_coords[(i, j)]
            rows.append(row)
        return {"truncation": K, "entries": rows}

    def to_csv(self):
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["i", "j", "mono", "coef"])
        for row in self.to_json()["entries"]:
            for t in row["poly"]:
                w.writerow([row["i"], row["j"], " ".join(map(str, t["mono"])), t["coef"]])
        return out.getvalue()

    @classmethod
    def from_json(cls, data):
        K = data["truncation"]
        entries = {}
        for row in data["entries"]:
            terms = {tuple(t["mono"]): Fraction(t["coef"]) for t in row["poly"]}
            entries[(row["i"], row["j"])] = GradedSeries(dual_variables(K), terms, None)
        return cls(K, entries)


def _table_from_series(F, W, y1, y2):
    entries = {}
    for n in range(2, W + 2):
        for i in range(1, n):
            entries[(i, n - i)] = F.coefficient(y1, i).coefficient(y2, n - i)
    return FGLTable(W, entries)


# -- the two constructions -------------------------------------------------


def _t_vars(W):
    return tuple((f"t{k}", k) for k in range(1, W + 1))


def phi_t(W, name="y"):
    """``y + sum t_k y^(k+1)``."""
    T = series_truncation(W)
    variables = ((name, 1),) + _t_vars(W)
    terms = {(1,) + (0,) * W: 1}
    for k in range(1, W + 1):
        e = [0] * (W + 1)
        e[0], e[k] = k + 1, 1
        terms[tuple(e)] = 1
    return GradedSeries(variables, terms, T)


def phi_t_inverse(W, name="y"):
    """Compositional inverse of :func:`phi_t` by Lagrange inversion.

    ``[y^n] phi^(-1) = (1/n) [z^(n-1)] (1 + sum t_k z^k)^(-n)``.
    """
    T = series_truncation(W)
    zvars = (("z", 1),) + _t_vars(W)
    base = GradedSeries.constant(1, zvars, T)
    for k in range(1, W + 1):
        e = [0] * (W + 1)
        e[0], e[k] = k, 1
        base = base + GradedSeries(zvars, {tuple(e): 1}, T)
    inv = base.reciprocal()
    yvars = ((name, 1),) + _t_vars(W)
    out = GradedSeries(yvars, {}, T)
    power = GradedSeries.constant(1, zvars, T)
    for n in range(1, W + 2):
        power = power * inv
        # exact through weight T - n + 1, more than the T - n that survives
        c = power.coefficient("z", n - 1).with_truncation(T) * Fraction(1, n)
        out = out + c * GradedSeries.gen(name, yvars, T) ** n
    return out


@lru_cache(maxsize=None)
def universal_fgl(W):
    """``phi_t(phi_t^{-1}(y1) + phi_t^{-1}(y2))`` read off with ``t_k -> s*k``."""
    if W < 1:
        raise ValueError("W must be at least 1")
    psi1 = phi_t_inverse(W, "y1")
    psi2 = phi_t_inverse(W, "y2")
    F = phi_t(W, "y").substitute(psi1 + psi2, "y")
    table = _table_from_series(F, W, "y1", "y2")
    return FGLTable(W, {k: _t_to_dual(v) for k, v in table.entries.items()})


@dataclass(frozen=True)
class LogPair:
    """``exp(t) = t + sum s*k t^(k+1)`` and its compositional inverse ``log(x)``."""

    exp: GradedSeries
    log: GradedSeries

    def round_trip(self):
        t = GradedSeries.gen("t", self.exp.variables, self.exp.truncation)
        x = GradedSeries.gen("x", self.log.variables, self.log.truncation)
        a = self.exp.substitute(_rename(self.log, {"x": "t"}), "t")
        b = self.log.substitute(_rename(self.exp, {"t": "x"}), "x")
        return (a - t).is_zero() and (b - x).is_zero()

    def log_coefficient(self, k):
        return _exact(self.log.coefficient("x", k))

    def exp_coefficient(self, k):
        return _exact(self.exp.coefficient("t", k))


@lru_cache(maxsize=None)
def log_pair(W):
    if W < 1:
        raise ValueError("W must be at least 1")
    T = series_truncation(W)
    variables = (("t", 1),) + dual_variables(W)
    terms = {(1,) + (0,) * W: 1}
    for k in range(1, W + 1):
        e = [0] * (W + 1)
        e[0], e[k] = k + 1, 1
        terms[tuple(e)] = 1
    exp = GradedSeries(variables, terms, T)
    log = _rename(exp.revert("t"), {"t": "x"})
    return LogPair(exp, log)


@lru_cache(maxsize=None)
def fgl_from_log(W):
    """The table of ``exp(log x1 + log x2)``."""
    lp = log_pair(W)
    g1 = _rename(lp.log, {"x": "x1"})
    g2 = _rename(lp.log, {"x": "x2"})
    F = lp.exp.substitute(g1 + g2, "t")
    return _table_from_series(F, W, "x1", "x2")


def fgl_series(T, x="x1", y="x2"):
    """Universal ``f(x, y)`` through total weight T."""
    W = max(1, coefficient_weight_bound(T) + (T % 2 == 0))
    return universal_fgl(W).series(x, y, T)


# -- inverses ----------------------------------------------------------------


def formal_inverse(f, x="x", y="y"):
    """``iota(x)`` with ``f(x, iota(x)) = 0`` for a formal group law ``f(x, y)``.

    Iterates ``v <- -x - (f(x, v) - x - v)``; each pass fixes one more weight.
    The result is a series in ``x`` (and whatever coefficient variables ``f`` has).
    """
    T = f.truncation
    if T is None:
        raise SeriesError("formal_inverse needs a finite truncation")
    X = GradedSeries.gen(x, f.variables, T)
    Y = GradedSeries.gen(y, f.variables, T)
    higher = f - X - Y
    v = -X
    for _ in range(T + 1):
        nxt = -X - higher.compose({y: v})
        if (nxt - v).is_zero():
            break
        v = nxt
    return _without(v, y)


def inverse_series(W, name="x"):
    """``iota(x)`` for the universal formal group, through coefficient weight W."""
    T = series_truncation(W)
    f = universal_fgl(W).series(name, "_y", T)
    return formal_inverse(f, name, "_y").drop_unused().extend(((name, 1),))


def difference_kernel(W=None, f=None, x="x", y="y"):
    """``f(x, iota(y))``; the universal law by default, or any given ``f(x, y)``."""
    if f is None:
        f = universal_fgl(W).series(x, y, series_truncation(W))
    iota_y = _rename(formal_inverse(f, x, y), {x: y})
    return f.compose({y: iota_y})


def _without(series, name):
    if name not in series.names:
        return series
    if series.degree_in(name):
        raise SeriesError(f"series still depends on {name!r}")
    return series.coefficient(name, 0)


# -- Lambda -------------------------------------------------------------------


def _gen_weight(g):
    i, j = g
    return i + j - 1


class LambdaLattice:
    """Per weight, the integer lattice spanned by monomials in the ``alpha_ij``.

    Coordinates are taken in the monomial basis ``(s*)^w`` of weight n,
    ordered as :func:`basis_of_weight`.
    """

    def __init__(self, W):
        self.W = W
        self.table = universal_fgl(W)
        self.generators = [(i, j) for (i, j) in self.table.keys() if i <= j]
        self._levels = {}

    def spanning_monomials(self, n):
        """Multisets of generators of total weight n, as sorted tuples."""
        gens = sorted(self.generators, key=lambda g: (_gen_weight(g), g))
        out = []

        def rec(start, left, acc):
            if left == 0:
                out.append(tuple(acc))
                return
            for idx in range(start, len(gens)):
                g = gens[idx]
                if _gen_weight(g) <= left:
                    rec(idx, left - _gen_weight(g), acc + [g])

        rec(0, n, [])
        return out

    def monomial_value(self, mono):
        value = GradedSeries.constant(1)
        for g in mono:
            value = value * self.table.entry(*g)
        return value

    def vector(self, d, n):
        terms = dual_terms(d) if not d.is_zero() else {}
        basis = basis_of_weight(n)
        if any(w.weight != n for w in terms):
            raise ValueError(f"element is not homogeneous of weight {n}")
        return [terms.get(w, 0) for w in basis]

    def level(self, n):
        if n > self.W:
            raise ValueError(f"weight {n} exceeds available lattice data (W={self.W})")
        if n not in self._levels:
            ech = IntegerEchelon(len(basis_of_weight(n)))
            for mono in self.spanning_monomials(n):
                ech.add(self.vector(self.monomial_value(mono), n), mono)
            self._levels[n] = ech
        return self._levels[n]

    def rank(self, n):
        return self.level(n).rank


@dataclass(frozen=True)
class Membership:
    member: bool
    weight: int
    coordinates: dict | None = None  # generator monomial -> integer
    multiplier: int | None = None  # least q with q*d in Lambda

    def describe(self):
        if self.member:
            return [{"alpha": [list(g) for g in mono], "coef": str(c)}
                    for mono, c in sorted(self.coordinates.items())]
        return {"member": False, "multiplier": self.multiplier}


@lru_cache(maxsize=None)
def lambda_lattice(W):
    return LambdaLattice(W)


def lambda_membership(d, lattice=None):
    """Decide ``d`` in Lambda for a homogeneous dual element ``d``."""
    terms = dual_terms(d)
    weights = {w.weight for w in terms}
    if len(weights) > 1:
        raise ValueError("element is not homogeneous")
    n = weights.pop() if weights else 0
    if lattice is None:
        lattice = lambda_lattice(max(n, 1))
    if n == 0:
        c = terms.get((), 0)
        if Fraction(c).denominator == 1:
            return Membership(True, 0, {(): int(c)} if c else {})
        return Membership(False, 0, multiplier=Fraction(c).denominator)
    ok, info = lattice.level(n).membership(
        [Fraction(c) for c in lattice.vector(d, n)])
    if ok:
        return Membership(True, n, coordinates=info)
    return Membership(False, n, multiplier=info)


def cp_class(m):
    """``(m+1)`` times the coefficient of ``x^(m+1)`` in the logarithm."""
    if m < 1:
        raise ValueError("m must be positive")
    return log_pair(m).log_coefficient(m + 1) * (m + 1)


def check_cp_class(m):
    return r_star(s(m), cp_class(m))


# -- symmetric functions of x and its inverse --------------------------------


@dataclass(frozen=True)
class Reduction:
    ok: bool
    coefficients: tuple = ()  # c_1, c_2, ... with p = sum c_k u^k
    failed_power: int | None = None


def symmetric_reduction(p, iota, x="x"):
    """Write ``p(x)`` as a series in ``u = x * iota(x)``.

    The greedy step kills the lowest power of ``x`` in the residual; ``u``
    starts with ``-x^2``, so an odd leading power means ``p`` is not a series
    in ``u``.  The constant term, if any, becomes ``c_0``.
    """
    T = _min_trunc_pair(p.truncation, iota.truncation)
    X = GradedSeries.gen(x, iota.variables, T)
    u = X * iota
    lead = u.coefficient(x, 2)
    if not (lead - (-1)).is_zero():
        raise SeriesError("x * iota(x) must start with -x^2")
    residual = p.truncate(T)
    coeffs = []
    upow = GradedSeries.constant(1, u.variables, T)
    k = 0
    while not residual.is_zero():
        i = residual.names.index(x) if x in residual.names else None
        low = min(e[i] for e in residual.terms) if i is not None else 0
        if low % 2:
            return Reduction(False, tuple(coeffs), low)
        while 2 * k < low:
            coeffs.append(GradedSeries.constant(0))
            upow = upow * u
            k += 1
        c = residual.coefficient(x, low) * (-1) ** k
        coeffs.append(_exact(c))
        residual = residual - c.with_truncation(T) * upow
        upow = upow * u
        k += 1
    return Reduction(True, tuple(coeffs))


def _min_trunc_pair(a, b):
    vals = [t for t in (a, b) if t is not None]
    return min(vals) if vals else None


def x_times_inverse(W, x="x"):
    iota = inverse_series(W, x)
    return GradedSeries.gen(x, iota.variables, iota.truncation) * iota


def dumps_table(table, fmt="json", lambda_coords=None):
    if fmt == "csv":
        return table.to_csv()
    return json.dumps(table.to_json(lambda_coords), sort_keys=True, indent=1)

