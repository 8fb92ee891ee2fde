"""
Division certificates with a degree budget
==========================================

Is Phi in the ideal generated by F_1..F_m, using only cofactors with
deg F_j Q_j <= r?  The answer is a finite linear system, so it can be
settled exactly and the cofactors handed back for anyone to re-check.
"""

import json

from idealcert import (
    GeneratorSystem,
    bezout,
    certificate_from_json,
    certificate_to_json,
    divide,
    noll_threshold,
    parse,
    power_divide,
    verify,
)

# Two squares in the plane.  (z1 + z2)^4 expands into monomials that each
# contain z1^2 or z2^2, so it lies in the ideal at budget 4.
G = GeneratorSystem.parse(["z1^2", "z2^2"], n=2)
phi = parse("(z1 + z2)^2", 2)

cert = divide(G, phi ** 2, r=4)
print("(z1+z2)^4:", [str(Q) for Q in cert.cofactors], "verified:", cert.verified)

# The square root of that target is never in the ideal, however large the
# budget: the cross term 2*z1*z2 is the obstruction, and the solver says so.
for r in (2, 4, 8):
    out = divide(G, phi, r)
    print(f"(z1+z2)^2 at r={r}:", "feasible" if out else f"infeasible, witness {out.witness}")

# power_divide walks nu upward and reports the first power that works.
nu, cert = power_divide(G, phi, nu_max=3, r_of_nu=lambda nu: 2 * nu)
print("smallest power:", nu)

# Bezout identities.  Three lines in general position have no common point,
# so 1 is in the ideal; the classical budget is sum(d_j) - n.
lines = GeneratorSystem.parse(["z1", "z2", "1 - z1 - z2"], n=2)
print("threshold:", noll_threshold(lines.degrees, lines.n))
print("Q =", [str(Q) for Q in bezout(lines, 1).cofactors])

# In one variable z^2 and (1+z)^2 need budget 3, not 2.
pair = GeneratorSystem.parse(["z1^2", "(1 + z1)^2"], n=1)
print("r=2:", bool(bezout(pair, 2)), " r=3:", [str(Q) for Q in bezout(pair, 3).cofactors])

# Certificates serialize to JSON and are checked again from scratch on load.
doc = certificate_to_json(G, phi ** 2, divide(G, phi ** 2, 4))
print(json.dumps(doc, indent=1))
G2, target2, cert2 = certificate_from_json(doc)
print("re-verified:", verify(G2, target2, cert2))
