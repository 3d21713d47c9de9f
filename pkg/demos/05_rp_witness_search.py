"""Witness searches for regional proximality of order d.

For a rotation, nearby approximants can never collapse (isometry), so the
scan exhausts its budget. For the skew product, same-fiber pairs collapse at
order 1 but not at order 2, matching its two-step structure. The full shift
realizes every two-point cube pattern outright.
"""

import numpy as np

from nillab import (RPWitness, SearchBudget, cube_criterion, make_fullshift,
                    make_rotation, make_skew_product, rp_test)

golden = (np.sqrt(5) - 1) / 2
budget = SearchBudget(max_candidates=1000, n_range=5000, seed=0)


def describe(res):
    if isinstance(res, RPWitness):
        return "witness n=%s achieved=%.3g" % (res.n, res.achieved_delta)
    return "%s after %d pairs x %d exponents" % (
        res["status"], res["pairs_checked"], res["n_values"])


rot = make_rotation([golden])
print("rotation, pair at distance 0.3, d=1, delta=0.05:")
print(" ", describe(rp_test(rot, np.array([0.1]), np.array([0.4]), 1, 0.05,
                            budget)))

skew = make_skew_product(golden)
p, q = np.array([0.2, 0.1]), np.array([0.2, 0.7])
print("\nskew product, same-fiber pair, delta=0.05:")
print("  d=1:", describe(rp_test(skew, p, q, 1, 0.05, budget)))
print("  d=2:", describe(rp_test(skew, p, q, 2, 0.05,
                                 SearchBudget(max_candidates=400, n_range=60,
                                              seed=0))))

fsh = make_fullshift(2, L=8)
x1 = fsh.construct_point([(-8, np.zeros(17, dtype=np.int8))])
x2 = fsh.construct_point([(-8, np.ones(17, dtype=np.int8))])
rep = cube_criterion(fsh, x1, x2, 2, 0.05, SearchBudget(seed=0))
print("\nfull shift, constant words 0^17 and 1^17, d=2 cube patterns:")
print("  %s (d=%d, %d patterns)" % (rep["verdict"], rep["d"],
                                    len(rep["patterns"])))
one = rep["patterns"]["1221"]
print("  e.g. pattern 1221 realized with n =", one["n"])
