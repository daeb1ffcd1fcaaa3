"""Print the universal formal group coefficients alpha_ij through weight 4,
with their coordinates in the integral lattice where they have them."""
from cobordalg.formal_group import lambda_lattice, lambda_membership, universal_fgl

W = 4
table = universal_fgl(W)
lat = lambda_lattice(W)
for i, j in table.keys():
    a = table.entry(i, j)
    m = lambda_membership(a, lat)
    print(f"alpha_{i}{j} = {a.drop_unused()}    {m.describe() if m.member else ''}")
