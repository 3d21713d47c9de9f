"""Three growth regimes of the shadowing-net count r(n, eps).

A set F is (n, eps)-shadowing if every point stays eps-close to some member
of F for times 0..n. Rotations need no extra points as n grows (bounded),
the affine skew product T(x, y) = (x + a, y + x) needs polynomially many,
and the full shift needs exponentially many.
"""

import numpy as np

from nillab import (SearchBudget, complexity_curve, make_fullshift,
                    make_rotation, make_skew_product)

golden = (np.sqrt(5) - 1) / 2


def show(curve, label):
    print("%-10s eps=%.2f" % (label, curve.epsilon))
    print("  n:", [int(n) for n in curve.ns()])
    print("  r:", [int(r) for r in curve.rs()])
    fit = dict(curve.fit)
    fit.pop("residuals", None)
    print("  fit:", fit, "\n")


rot = make_rotation([golden])
show(complexity_curve(rot, 0.1, [1, 2, 3, 5, 8, 10, 16, 26, 42, 65, 100]),
     "rotation")

skew = make_skew_product(golden)
show(complexity_curve(skew, 0.1, [1, 2, 3, 4, 6, 9, 13, 19, 28, 41, 60],
                      SearchBudget(grid_divisor=(16.0, 4.0),
                                   max_cells=3_000_000)),
     "skew")

fsh = make_fullshift(2, L=8)
show(complexity_curve(fsh, 0.4, list(range(1, 11)),
                      SearchBudget(max_cells=3_000_000)),
     "fullshift")
