"""Integer row echelon form with transformation tracking.

Used to decide membership in a lattice spanned by integer vectors and to
produce explicit integer coordinates in the spanning set.  The reduction
is the usual extended-gcd elimination behind Hermite normal form.  Entries
above a pivot are reduced modulo that pivot whenever it changes, which keeps
the integers small.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _lead(v):
    for i, c in enumerate(v):
        if c:
            return i
    return None


def _axpy(a, u, b, v):
    return [a * x + b * y for x, y in zip(u, v)]


def _combo(a, u, b, v):
    out = {}
    for k, c in u.items():
        out[k] = a * c
    for k, c in v.items():
        out[k] = out.get(k, 0) + b * c
    return {k: c for k, c in out.items() if c}


class IntegerEchelon:
    """Incrementally maintained triangular basis of an integer lattice.

    Each row carries ``combo``: the integer combination of the inserted
    generators (keyed by the labels given to :meth:`add`) that produces it.
    """

    def __init__(self, dim):
        self.dim = dim
        self.rows = {}  # pivot column -> (vector, combo)

    @property
    def rank(self):
        return len(self.rows)

    def add(self, vector, label):
        v = [int(c) for c in vector]
        if len(v) != self.dim:
            raise ValueError("vector has the wrong dimension")
        combo = {label: 1}
        while True:
            p = _lead(v)
            if p is None:
                return
            if p not in self.rows:
                if v[p] < 0:
                    v = [-c for c in v]
                    combo = {k: -c for k, c in combo.items()}
                self.rows[p] = (v, combo)
                self._reduce_above(p)
                return
            r, rc = self.rows[p]
            g, a, b = _xgcd(r[p], v[p])
            if g < 0:
                g, a, b = -g, -a, -b
            new_r = _axpy(a, r, b, v)
            new_rc = _combo(a, rc, b, combo)
            ra, va = r[p] // g, v[p] // g
            v = _axpy(ra, v, -va, r)
            combo = _combo(ra, combo, -va, rc)
            self.rows[p] = (new_r, new_rc)
            self._reduce_above(p)
            v, combo = self._reduce_vector(v, combo)

    def _reduce_vector(self, v, combo):
        for q in sorted(self.rows):
            if v[q]:
                r, rc = self.rows[q]
                k = v[q] // r[q]
                if k:
                    v = _axpy(1, v, -k, r)
                    combo = _combo(1, combo, -k, rc)
        return v, combo

    def _reduce_above(self, p):
        r, rc = self.rows[p]
        for q in sorted(self.rows):
            if q >= p:
                break
            u, uc = self.rows[q]
            k = u[p] // r[p]
            if k:
                self.rows[q] = (_axpy(1, u, -k, r), _combo(1, uc, -k, rc))

    def solve(self, target):
        """Rational coordinates of ``target`` in the row basis, or ``None``."""
        t = [Fraction(c) for c in target]
        coords = {}
        for p in sorted(self.rows):
            if t[p] == 0:
                continue
            r, _ = self.rows[p]
            q = t[p] / r[p]
            coords[p] = q
            t = [x - q * y for x, y in zip(t, r)]
        if any(t):
            return None
        return coords

    def membership(self, target):
        """``(True, combo)`` with integer generator coordinates, or ``(False, q)``.

        ``q`` is the least positive integer with ``q * target`` in the lattice;
        ``None`` when no multiple lies in the lattice at all.
        """
        coords = self.solve(target)
        if coords is None:
            return False, None
        q = lcm(1, *(c.denominator for c in coords.values()))
        if q != 1:
            return False, q
        combo = {}
        for p, c in coords.items():
            for k, d in self.rows[p][1].items():
                combo[k] = combo.get(k, 0) + int(c) * d
        return True, {k: c for k, c in combo.items() if c}
