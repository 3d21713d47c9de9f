"""Sturmian words: minimal complexity, and how far IP-independence gets.

The coding of an irrational rotation by the two-arc partition has exactly
n + 1 factors of length n. Its independence sets for the pair of one-symbol
cylinders are correspondingly tiny: one generator can work, but longer
finite IP-sets already demand more patterns than the coding can realize.
"""

import numpy as np

from nillab import (Cylinder, SetTuple, check_independence, find_ip_independence,
                    fs_set, make_sturmian, sturmian_code, sturmian_language)

golden = (np.sqrt(5) - 1) / 2

print("window of the coding of z=0, offsets -8..8:")
print(" ", "".join(str(s) for s in sturmian_code(golden, 0.0, 8).word))

print("\nfactor counts p(n) (always n + 1):")
for n in (1, 2, 3, 5, 10, 20, 30):
    print("  p(%2d) = %2d" % (n, len(sturmian_language(golden, n))))

sturmian = make_sturmian(golden, L=16)
targets = SetTuple((Cylinder((0,), 0), Cylinder((1,), 0)))

print("\npair positions {0, n}: which (w_0, w_n) patterns occur?")
for n in (1, 2, 3):
    rep = check_independence(sturmian, targets, [0, n])
    print("  n=%d: %d of 4 realized -> verified=%s" % (n, rep.realized_patterns,
                                                       rep.verified))

print("\ngenerator scans ({0} + subset sums must realize every pattern):")
for m in (1, 2, 3, 4):
    ip, rep = find_ip_independence(sturmian, targets, m, 50)
    gens = "generators %s" % (ip.generators,) if ip else "exhausted"
    print("  m=%d, bound 50: %-12s (%d tuples scanned)" % (m, rep["status"],
                                                           rep["scanned"]))

print("\nfull shift for contrast: every dyadic FS-set is independent")
from nillab import make_fullshift
fsh = make_fullshift(2, L=8)
for m in (2, 5, 8):
    F = (0,) + fs_set([2 ** i for i in range(m)]).elements
    rep = check_independence(fsh, targets, F)
    print("  m=%d, |F|=%3d: verified=%s (%s)" % (m, len(F), rep.verified,
                                                 rep.method))
