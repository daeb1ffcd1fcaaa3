import sys
from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings, strategies as st

from cobordalg.series import GradedSeries

settings.register_profile("default", deadline=None, max_examples=30,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def sym(name):
    return sympy.Symbol(name.replace("*", "_"))


def to_sympy(p):
    """A truncated series as a plain sympy polynomial (its known terms)."""
    syms = [sym(n) for n, _ in p.variables]
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return expr


def sympy_truncate(expr, variables, T):
    """Drop the terms of total weight above T."""
    syms = [sym(n) for n, _ in variables]
    ws = [w for _, w in variables]
    poly = sympy.Poly(sympy.expand(expr), *syms)
    out = sympy.Integer(0)
    for e, c in poly.terms():
        if sum(k * w for k, w in zip(e, ws)) <= T:
            term = c
            for s, k in zip(syms, e):
                term *= s ** k
            out += term
    return out


def same(p, expr):
    """``p`` equals the sympy expression after truncating it to p's truncation."""
    T = p.truncation
    target = expr if T is None else sympy_truncate(expr, p.variables, T)
    return sympy.expand(to_sympy(p) - target) == 0


small_fractions = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


@st.composite
def univariate(draw, name="t", T=None, constant=None, linear=None):
    T = draw(st.integers(1, 5)) if T is None else T
    coeffs = draw(st.lists(small_fractions, min_size=T + 1, max_size=T + 1))
    if constant is not None:
        coeffs[0] = Fraction(constant)
    if linear is not None and T >= 1:
        coeffs[1] = Fraction(linear)
    terms = {(k,): c for k, c in enumerate(coeffs) if c}
    return GradedSeries(((name, 1),), terms, T)


@st.composite
def bivariate(draw, T=None):
    T = draw(st.integers(1, 4)) if T is None else T
    terms = {}
    for i in range(T + 1):
        for j in range(T + 1 - i):
            c = draw(small_fractions)
            if c:
                terms[(i, j)] = c
    return GradedSeries((("x", 1), ("y", 2)), terms, 2 * T)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
