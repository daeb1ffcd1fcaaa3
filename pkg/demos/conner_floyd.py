"""The projector pair (Pi, delta) on Thom classes of one line bundle.

Solves for alpha and beta, checks the three conditions and associativity of
Pi(Pi(x) Pi(y)) through weight 5.
"""
from cobordalg import products as P
from cobordalg.formal_group import cp_class

Pi, delta = P.conner_floyd_model(1, 5)
x1 = Pi.carrier.gen("x1")
print("Pi(x1)    =", Pi(x1))
print("delta(x1) =", delta(x1))
cert = P.theorem3_certificate(Pi, delta, 5)
print("alpha =", cert["solve_alpha"]["value"], "  [CP^1] =", cp_class(1))
print("beta  =", cert["solve_beta"]["value"], "  2([CP^1]^2 - [CP^2]) =",
      (cp_class(1) ** 2 - cp_class(2)) * 2)
for c in ("condition_1", "condition_2", "condition_3", "associative"):
    print(c, cert[c]["pass"])
