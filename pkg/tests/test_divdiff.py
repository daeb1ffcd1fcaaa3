from fractions import Fraction

import pytest
import sympy

from cobordalg.divdiff import (CriteriaDisagree, DividedDifferenceOp, Inapplicable, LinearOperator,
                               check_divdiff, compose_divdiff, derivative_operator, evaluation_op,
                               formal_group_op, gamma_predicates, identity_operator, is_division,
                               kernel_division_equivalence, kernel_of_pi, lemma12_op, lemma13_op,
                               lemma4_equivalence, localization_denominators, multiplicative_fgl_op,
                               newton_op, operator_report, ore_check, pi_matches_partial,
                               pi_multiplicativity, pi_squared, partial_squared_is,
                               polynomial_carrier, random_lambda_params, reflection_op, solve_gamma,
                               translation_op)
from cobordalg.formal_group import lambda_membership, universal_fgl
from cobordalg.hopf import s_star
from cobordalg.series import _divides_power_of
from conftest import same, sym, to_sympy

W = 6
S1, S2 = s_star(1), s_star(2)
ALPHA11 = S1 * 2
ALPHA12 = S2 * 3 - S1 * S1 * 2


def catalogue():
    x = polynomial_carrier(["x"])
    return {
        "evaluation": evaluation_op(),
        "newton": newton_op(),
        "reflection_i": reflection_op((1, 0), "i"),
        "reflection_ii": reflection_op((1, 2), "ii"),
        "reflection_i_3": reflection_op((1, -1, 2), "i"),
        "translation": translation_op(x.gen("x"), Fraction(1, 2), carrier=x),
        "multiplicative_fgl": multiplicative_fgl_op(W + 2),
    }


@pytest.fixture(scope="module")
def ops():
    return catalogue()


@pytest.mark.parametrize("name", list(catalogue()))
def test_catalogue_identities(ops, name):
    op = ops[name]
    assert check_divdiff(op, W)
    assert pi_multiplicativity(op, W)
    assert lemma4_equivalence(op, W)
    assert pi_matches_partial(op, W)


@pytest.mark.parametrize("name", list(catalogue()))
def test_catalogue_kernel_equivalence(ops, name):
    rep = kernel_division_equivalence(ops[name], 4 if name == "multiplicative_fgl" else W)
    assert rep["consistent"]


# -- oracles through sympy closed forms -------------------------------------------


def _check_against(op, closed, W):
    """Compare d on every monomial with a sympy closed form of the operator."""
    names = [n for n, _ in op.carrier.op_variables]
    syms = [sym(n) for n in names]
    for key, m in op.carrier.monomials(W):
        p = sympy.Integer(1)
        for s_, k in zip(syms, key):
            p *= s_ ** k
        assert same(op.d(m), sympy.cancel(closed(p, syms))), key


def test_newton_matches_closed_form(ops):
    _check_against(ops["newton"], lambda p, v: (p - p.subs({v[0]: v[1], v[1]: v[0]}, simultaneous=True))
                   / (v[0] - v[1]), W)
    x, y = ops["newton"].carrier.gen("x"), ops["newton"].carrier.gen("y")
    assert ops["newton"].d(x * x) == x + y


def test_evaluation_matches_closed_form(ops):
    _check_against(ops["evaluation"], lambda p, v: (p - p.subs(v[0], 0)) / v[0], W)


def test_reflection_matches_closed_form(ops):
    def refl(p, v):
        x1, x2 = v
        a = x1 + 2 * x2
        img = p.subs({x1: x1 - a * 2 * Fraction(1, 5), x2: x2 - a * 2 * Fraction(2, 5)},
                     simultaneous=True)
        return (p - img) / a
    _check_against(ops["reflection_ii"], refl, W)


def test_reflection_ii_sign_flip():
    op = reflection_op((1, 0), "ii")
    c = op.carrier
    x1, x2 = c.gen("x1"), c.gen("x2")
    assert op.pi(x1 * x1 * x1 * x2) == -(x1 * x1 * x1 * x2)
    assert partial_squared_is(op, c(0), W) is None
    assert pi_squared(op, W)[0]


def test_reflection_requires_nonzero_xi():
    with pytest.raises(ValueError):
        reflection_op((0, 0))


def test_translation_requires_alpha_without_constant():
    x = polynomial_carrier(["x"])
    with pytest.raises(ValueError):
        translation_op(x.gen("x") + 1, 1, carrier=x)


def test_multiplicative_fgl_closed_form(ops):
    op = ops["multiplicative_fgl"]
    c = op.carrier
    x, y, a = c.gen("x"), c.gen("y"), c.gen("a")
    assert op.alpha == (x - y) * (1 - a * y).reciprocal()
    assert op.d(x) == 1 - a * y
    assert partial_squared_is(op, a, W) is None


# -- defining identity fails for a plain derivation ------------------------------------


def test_derivative_is_not_divided_difference():
    c = polynomial_carrier(["x"])
    x = c.gen("x")
    d = derivative_operator(c, "x")
    pi = LinearOperator(c, lambda m: m - x * d(m), "pi")
    op = DividedDifferenceOp(c, x, pi, partial=d)
    chk = check_divdiff(op, 2)
    assert not chk and chk.witness == (x, x)
    assert not pi_multiplicativity(op, 2)
    assert lemma4_equivalence(op, 2)


def test_zero_operator_rejected():
    c = polynomial_carrier(["x"])
    op = DividedDifferenceOp(c, c.gen("x"), identity_operator(c), partial=lambda m: m * 0)
    chk = check_divdiff(op, 3)
    assert not chk and chk.witness == "operator is identically zero"


def test_zero_alpha_rejected():
    c = polynomial_carrier(["x"])
    with pytest.raises(ValueError):
        DividedDifferenceOp(c, c(0), identity_operator(c))


# -- division ---------------------------------------------------------------------------


def test_division_examples(ops):
    assert is_division(ops["evaluation"], W)
    assert is_division(ops["reflection_i"], W)
    assert not is_division(ops["newton"], W)
    nw = ops["newton"]
    assert nw.d(nw.alpha) == nw.carrier(2)


def test_division_criteria_disagreement_detected():
    c = polynomial_carrier(["x"])
    x = c.gen("x")
    weird = LinearOperator(c, lambda m: c(1) if m == x else m * 0, "d")
    op = DividedDifferenceOp(c, x, identity_operator(c), partial=weird)
    with pytest.raises(CriteriaDisagree):
        is_division(op, 2)


# -- gamma identities ----------------------------------------------------------------------


def test_gamma_newton(ops):
    op = ops["newton"]
    sol = solve_gamma(op, W)
    assert sol.gamma.is_zero()
    assert gamma_predicates(op, sol.gamma, W) == {"lemma5": True, "pi_squared_identity": True,
                                                 "pi_alpha": True}
    assert op.pi(op.alpha) == -op.alpha


def test_gamma_multiplicative_fgl(ops):
    op = ops["multiplicative_fgl"]
    sol = solve_gamma(op, W)
    assert sol.gamma == op.carrier.gen("a")
    assert all(gamma_predicates(op, sol.gamma, W).values())


def test_gamma_inapplicable_for_evaluation(ops):
    op = ops["evaluation"]
    a = op.carrier.gen("a")
    # d^2(a) = 0 with d(a) = 1 forces gamma = 0, but d^2(a^2) = 1
    assert op.d(op.d(a)).is_zero() and op.d(a) == 1
    assert op.d(op.d(a * a)) == 1
    sol = solve_gamma(op, W)
    assert sol.gamma is None
    with pytest.raises(Inapplicable):
        gamma_predicates(op, sol.gamma, W)
    with pytest.raises(Inapplicable):
        gamma_predicates(op, op.carrier(0), W)


def test_gamma_universal_formal_group():
    op = formal_group_op(truncation=9)
    sol = solve_gamma(op, 5)
    assert sol.gamma is not None
    assert all(gamma_predicates(op, sol.gamma, 5).values())


# -- kernels -------------------------------------------------------------------------------


def test_kernel_examples(ops):
    ev = ops["evaluation"]
    k = kernel_of_pi(ev, 4)
    assert len(k) == 4  # a, a^2, a^3, a^4
    assert kernel_division_equivalence(ev, 4)["projector"]
    rep = kernel_division_equivalence(ops["newton"], W)
    assert (rep["kernel_dim"], rep["division"], rep["projector"]) == (0, False, False)
    assert pi_squared(ops["newton"], W) == (True, False)


def test_kernel_lemma13():
    op = lemma13_op(1, ALPHA11, 5)
    rep = kernel_division_equivalence(op, 5)
    assert rep["kernel_dim"] == 0 and rep["consistent"]
    assert pi_squared(op, 5)[0]


# -- composition and Ore ----------------------------------------------------------------


def test_compose_newton_is_identity(ops):
    nw = ops["newton"]
    comp = compose_divdiff(nw, nw, W)
    assert comp.certificate
    for _, m in nw.carrier.monomials(W):
        assert comp.pi(m) == m and comp.partial(m).is_zero()


def test_compose_evaluation_pairs(ops):
    ev = ops["evaluation"]
    assert compose_divdiff(ev, ev, W).certificate
    a = ev.carrier.gen("a")
    tr = translation_op(a, Fraction(1, 2), "a", ev.carrier)
    assert compose_divdiff(ev, tr, W).certificate
    assert compose_divdiff(tr, ev, W).certificate


def test_compose_requires_same_alpha(ops):
    ev = ops["evaluation"]
    tr = translation_op(ev.carrier.gen("a") * 2, 1, "a", ev.carrier)
    with pytest.raises(ValueError):
        compose_divdiff(ev, tr, W)


def test_ore(ops):
    for name in ("newton", "evaluation", "reflection_ii"):
        assert ore_check(ops[name].partial, ops[name].pi, W)
    c = polynomial_carrier(["x"])
    assert ore_check(derivative_operator(c, "x"), identity_operator(c), W)
    assert not ore_check(ops["newton"].partial, identity_operator(ops["newton"].carrier), W)


# -- Lemma 12 and Lemma 13 -------------------------------------------------------------------


@pytest.mark.parametrize("n, alpha, m", [(1, S1, 1), (1, ALPHA11, 2), (2, ALPHA12, 3)])
def test_lemma12(n, alpha, m):
    T = 6
    op = lemma12_op(n, alpha, random_lambda_params(3, m, seed=1), T)
    assert op.localization == m
    assert op.pi(op.alpha.with_truncation(T)).is_zero()
    assert pi_multiplicativity(op, 4)
    assert is_division(op, 4)
    assert all(_divides_power_of(d, m) for d in localization_denominators(op, T))


def test_lemma12_precondition():
    with pytest.raises(ValueError):
        lemma12_op(2, S1 * S1, (), 4)


def test_lemma13_closed_form():
    T = 8
    op = lemma13_op(1, ALPHA11, T)
    c = op.carrier
    x = c.gen("x")
    assert op.pi(x) == x * (1 + ALPHA11 * x).reciprocal()
    assert op.pi(op.pi(x)) == x
    assert partial_squared_is(op, c(0), 5) is None
    assert localization_denominators(op, 5) == []


def test_lemma13_precondition():
    with pytest.raises(ValueError):
        lemma13_op(1, S1, 4)


def test_lemma13_n2_denominators():
    op = lemma13_op(2, S2 * 4, 6)
    assert all(_divides_power_of(d, 2) for d in localization_denominators(op, 6))
    assert 2 in localization_denominators(op, 6)


def test_random_params_are_in_localized_lambda():
    for a in random_lambda_params(3, 3, seed=4):
        assert any(lambda_membership(a * q).member for q in (1, 3))


def test_operator_report_shape(ops):
    rep = operator_report(ops["newton"], 4)
    assert set(rep) == {"constructor", "params", "checks", "localization_denominators"}
    assert all(c["pass"] for c in rep["checks"])
    names = {c["name"] for c in rep["checks"]}
    assert {"divdiff", "pi_squared_is_1", "partial_squared_zero"} <= names


def test_universal_alpha_spot_values():
    T = universal_fgl(3)
    assert to_sympy(T.entry(1, 1)) == 2 * sympy.Symbol("s_1")
