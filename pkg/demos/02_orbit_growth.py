"""How fast do nearby orbits separate on a nilmanifold?

Rotations are isometries (ratio stays 1); on the Heisenberg quotient the
separation of a pair split along the first coordinate grows linearly with the
iteration count, a polynomial orbit-distance bound in action.
"""

import numpy as np

from nillab import (abelian, heisenberg3, make_nilsystem, orbit_distance_growth,
                    quotient_point)

golden = (np.sqrt(5) - 1) / 2

circle = abelian(1)
rot = make_nilsystem(circle, [golden])
x = quotient_point(circle, [0.2])
y = quotient_point(circle, [0.2 + 1e-4])
res = orbit_distance_growth(rot, x, y, 1000)
print("rotation: ratio at n=1000 :", res["ratio"][-1])
print("rotation: fitted slope    : %.4f (isometry => 0)" % res["loglog_slope"])

H = heisenberg3()
nil = make_nilsystem(H, [golden, np.sqrt(2) / 2, 0.0])
x = quotient_point(H, [0.30, 0.40, 0.20])
y = quotient_point(H, [0.30 + 1e-4, 0.40, 0.20])
res = orbit_distance_growth(nil, x, y, 1000)
print("\nheisenberg: base distance :", res["base_distance"])
for n in (1, 10, 100, 1000):
    print("  d(T^%4d x, T^%4d y) / d(x, y) = %8.2f" % (n, n, res["ratio"][n - 1]))
print("heisenberg: fitted log-log slope = %.3f (linear separation)"
      % res["loglog_slope"])
