"""Coordinate arithmetic in the Heisenberg group and its compact quotient.

Elements are coordinate triples (a, b, c); the product twists the third
coordinate by a*b', which is exactly the 3x3 unipotent matrix product.
"""

import numpy as np

from nillab import (dist_group, dist_quotient, element, factorize, heisenberg3,
                    inv, mul, power, psi_norm, quotient_point, validate_group)

H = heisenberg3()
print("group:", H, "\naxioms:", validate_group(H)["errors"], "\n")

a = element(H, [1.0, 0.0, 0.0])
b = element(H, [0.0, 1.0, 0.0])
print("a * b       =", mul(a, b).coord)        # the twist: (1, 1, 1)
print("b * a       =", mul(b, a).coord)        # noncommutative: (1, 1, 0)
print("a^-1        =", inv(a).coord)
g = element(H, [0.3, 0.5, 0.0])
print("g^10        =", power(g, 10).coord, " |g^10| =", psi_norm(power(g, 10)))
print("g^10 third coordinate is 10*9/2 * 0.3 * 0.5 =", 45 * 0.15, "\n")

# reduction to the fundamental domain [0,1)^3: peel lattice generators
x = element(H, [2.7, -1.3, 5.25])
frac, lattice = factorize(x)
print("x           =", x.coord)
print("frac part   =", frac.coord)
print("lattice part=", lattice.coord)
print("recombined  =", mul(frac, lattice).coord, "\n")

# the quotient metric minimizes the one-hop distance over nearby lattice
# translates: wrap-around appears in every coordinate
p = quotient_point(H, [0.05, 0.5, 0.5])
q = quotient_point(H, [0.95, 0.5, 0.5])
print("group distance of reps :", dist_group(p.rep, q.rep))
print("quotient distance      :", dist_quotient(p, q))
