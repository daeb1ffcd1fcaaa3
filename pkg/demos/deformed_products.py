"""Associativity of x*y = x y + beta d(x) d(y) for two operators d.

The evaluation operator needs beta(0) = 0, while the Newton operator
(d^2 = 0) gives an associative product for any beta.
"""
from cobordalg import products as P
from cobordalg.divdiff import evaluation_op, newton_op

ev = evaluation_op()
a = ev.carrier
for beta in (a.gen("a"), a(1)):
    rep = P.theorem2_certificate(ev, beta, 4)
    print("evaluation, beta =", beta, "->", rep["associative"])

nw = newton_op()
x = nw.carrier.gen("x")
for beta in (x, x * x + 3):
    rep = P.theorem2_certificate(nw, beta, 5)
    print("newton, beta =", beta, "->", rep["associative"]["pass"])
