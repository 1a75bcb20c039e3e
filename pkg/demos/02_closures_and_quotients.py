"""Generated closures with witnesses, and the two kinds of quotient.

Run with:  python3 demos/02_closures_and_quotients.py
"""

from oalg import SIG1, chain
from oalg.algebra import (
    Homomorphism,
    factor_through,
    leq_theta,
    nonregular_quotient,
    regular_quotient,
)
from oalg.closure import gen_compatible_quasiorder, gen_order_congruence
from oalg.relations import partition_to_pairs, transitive_closure
from oalg.schemes import scheme_to_lines

ch3 = chain(3, SIG1)
print("carrier:", ch3.carrier, " order: e0 <= e1 <= e2, ops are joins")

# Adjoining e2 <= e0 collapses everything: the closure is total.
clo = gen_compatible_quasiorder(ch3, {("e2", "e0")})
print("\nclosure of order + (e2 <= e0):", len(clo.relation), "pairs (total)")
print("witness for e1 <= e0:")
for line in scheme_to_lines(clo.witness("e1", "e0")):
    print("   ", line)

# Generating an order-congruence from e0 <= e1 glues the pair.
cong = gen_order_congruence(ch3, {("e0", "e1")})
print("\ncongruence generated by (e0, e1) glues:",
      sorted(p for p in cong.theta if p[0] != p[1]))

# The regular quotient by that congruence is the two-element chain.
theta = partition_to_pairs([["e0", "e1"], ["e2"]])
q, nat = regular_quotient(ch3, theta)
print("regular quotient carrier:", q.carrier)
print("projected order:", sorted(p for p in q.order if p[0] != p[1]))

# Any map whose directed kernel swallows the chain relation factors
# through the quotient uniquely.
f = Homomorphism(ch3, ch3, {"e0": "e0", "e1": "e0", "e2": "e2"})
g = factor_through(f, theta)
print("factored map:", g.map)

# A non-regular quotient keeps the classes but coarsens the order; with a
# total quasiorder everything collapses to a point.
sigma = transitive_closure(ch3.order | {("e2", "e0")})
one = nonregular_quotient(ch3, sigma)
print("\nnon-regular quotient by the total quasiorder:", one.carrier)
print("chain relation of the glued congruence adds:",
      sorted(leq_theta(ch3, theta) - ch3.order))
