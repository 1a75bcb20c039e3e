"""Special amalgams: glue certificates, normalization, dominions, and a
non-surjective map that fails to be an epimorphism.

Run with:  python3 demos/03_pushout_dominion_epi.py
"""

from oalg import SIG1, chain
from oalg.algebra import Homomorphism, subalgebra
from oalg.amalgam import (
    Budget,
    dominion_special,
    epi_check,
    make_special,
    pushout_equal,
    separator_search,
)
from oalg.schemes import extract_center, normalize, scheme_to_lines
from oalg.terms import leaf

ch3 = chain(3, SIG1)
sp = make_special(ch3, [])
print("base:", ch3.carrier, " core generated by the constants:", sp.c.carrier)
print("copies:", sp.a1.carrier, "and", sp.a2.carrier)

# The two images of a core element are equal in the pushout; the
# certificate is a single glue step each way.
res = pushout_equal(sp, leaf("e0<1>"), leaf("e0<2>"))
print("\nglue certificate for e0:")
for line in scheme_to_lines(res.forward):
    print("   ", line)

# Certificates normalize to single-node form, and the shared element is
# recoverable from the normalized pair.
fwd = normalize(sp, res.forward)
bwd = normalize(sp, res.backward)
print("normalized:", fwd.status, "/ centre:",
      extract_center(sp, fwd.scheme, bwd.scheme))

# The middle element is outside the core: the search finds nothing, which
# is exactly what the theory predicts.
statuses = dominion_special(sp, Budget(max_nodes=5000))
for x, info in statuses.items():
    print(f"dominion status of {x}: {info['status']}")

# An explicit pair of maps agreeing on the core but splitting e1.
sep = separator_search(ch3, sp.c.carrier, "e1", 3)
print("\nseparator codomain:", sep.codomain.carrier)
print("  f(e1) =", sep.f.map["e1"], "   g(e1) =", sep.g.map["e1"])

# Hence the inclusion of the core is not an epimorphism.
incl = Homomorphism(subalgebra(ch3, ["e0", "e2"]), ch3,
                    {"e0": "e0", "e2": "e2"})
print("epi check on the inclusion:", epi_check(incl, 3).verdict)
