"""A skew product whose time averages refuse to settle.

The fiber cocycle is a trigonometric series with frequencies locked to
near-resonance with the base rotation. Its transfer function H is a
well-defined truncated series at any K, and h = H(. + a) - H telescopes
exactly; but the resonances make the fiber drift on a timescale near 10^6
steps, so Birkhoff averages oscillate visibly long after a nilsystem has
converged. A desk-scale contrast experiment, not a limit theorem.
"""

import numpy as np

from nillab import (birkhoff, coboundary_residual, coordinate_cos,
                    furstenberg_point, heisenberg3, liouville_recipe,
                    make_default_furstenberg, make_nilsystem,
                    oscillation_contrast, validate_resonances)

golden = (np.sqrt(5) - 1) / 2

alpha, coeffs = liouville_recipe(K=30)
fu_meta_digits = coeffs[-1][0].bit_length() * 30103 // 100000 + 1
print("recipe: %d frequencies, largest around 10^%d" % (len(coeffs), fu_meta_digits))
print("resonance bounds certified:", validate_resonances(alpha, coeffs)["ok"])
print("transfer identity residual (grid 200):",
      coboundary_residual(alpha, coeffs, grid=200))

fu = make_default_furstenberg(K=30, lam=1.0)
start = furstenberg_point(fu, 0.15, 0.35)
trace_f = birkhoff(fu, coordinate_cos(1), start, n_max=10 ** 6)

nil = make_nilsystem(heisenberg3(), [golden, np.sqrt(2) / 2, 0.0])
trace_n = birkhoff(nil, coordinate_cos(2), np.array([0.1, 0.2, 0.3]),
                   n_max=10 ** 6)

print("\npartial averages of the fiber observable cos(2 pi s2):")
print("  %9s %14s %14s" % ("N", "skew product", "nilsystem"))
for i, n in enumerate(trace_f.n_grid):
    if n >= 2 ** 12:
        print("  %9d %14.6f %14.6f" % (n, trace_f.averages[i],
                                       trace_n.averages[i]))

print("\ntail oscillation, skew product : %.4g" % trace_f.oscillation)
print("tail oscillation, nilsystem    : %.4g" % trace_n.oscillation)
print("contrast                       : %.0fx"
      % oscillation_contrast(trace_f, trace_n))
