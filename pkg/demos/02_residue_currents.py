"""
Residue currents of monomial complete intersections
===================================================

For generators z_k^a the residue current splits into one-variable pieces
dbar[1/z^a].  Multiplying by z^b lowers the pole order to a - b, and the
piece is gone once b >= a.  A polynomial kills the whole current exactly
when every one of its monomials kills at least one piece, which for these
ideals is the same thing as ideal membership.
"""

import itertools

from idealcert import (
    MonomialCI,
    Polynomial,
    annihilates,
    annihilates_projective,
    duality_oracle,
    homogenize,
    onevar_reduce,
    parse,
)

print("z * dbar[1/z^3] = dbar[1/z^%d]" % onevar_reduce(1, 3).pole_order)
print("z^3 * dbar[1/z^3] vanishes:", onevar_reduce(3, 3).vanishes)

ci = MonomialCI.from_polys([parse("z1^2", 2), parse("z2^2", 2)])
for text in ["(z1+z2)^2", "(z1+z2)^3", "(z1+z2)^4"]:
    print(f"{text:>10} kills R: {annihilates(ci, parse(text, 2))}")

# Compare the current test with the exact solver over a small sweep.
agree = total = 0
G = ci.generator_system()
for e in itertools.product(range(5), repeat=2):
    phi = Polynomial.monomial(e)
    agree += annihilates(ci, phi) == duality_oracle(G, phi)
    total += 1
print(f"agreement with the solver: {agree}/{total}")

# Projectively the same test runs on homogeneous sections in z0..z2.
P = MonomialCI(3, ((1, 2), (2, 2)), homogeneous=True)
print("projective (z1+z2)^4:", annihilates_projective(P, homogenize(parse("(z1+z2)^4", 2), 4)))
