"""
Why one lattice is not enough: short dual vectors and fooling functions
-----------------------------------------------------------------------
Every two-dimensional lattice with n points has a nonzero dual vector h
with both components at most sqrt(n) (pigeonhole), and the continued
fraction of g1^{-1} g2 / n constructs one explicitly.  The two-mode
function built on h vanishes at every lattice point, so samples cannot
distinguish it from zero, and its L2 error is at least n^{-alpha/2}.  This
floor holds for any reconstruction driven by a single lattice.
"""

import math

import numpy as np

from multilattice import cf_short_vector, fooling_error, pigeonhole_short_vector
from multilattice.lattice import Rank1Lattice, lattice_points
from multilattice.lowerbound import fooling_function_evaluator
from multilattice.primes import primes_above

# %% Both constructions on one example.
n, g = 10007, (3167, 8999)
pig = pigeonhole_short_vector(n, g)
cf = cf_short_vector(n, g)
print(f"n = {n}, g = {g}")
print(f"pigeonhole: h = {pig.h}, max |h_i| = {pig.max_abs} <= sqrt(n) = {math.isqrt(n)}")
print(f"continued fraction: h = {cf.h}, |K| = {abs(cf.h[0])} <= n/q_next = {n / cf.q_next:.2f}")

# %% The fooling function vanishes on the whole lattice.
fe = fooling_error(n, 1.0, cf)
print(f"\nmax |f| over all {n} lattice points: {fe['max_on_lattice']:.2e}")
print(f"L2 error of any single-lattice reconstruction of f: {fe['error_value']:.5f}")
print(f"floor n^(-1/2): {fe['floor']:.5f}")

# %% A sweep over moduli: the error never drops below the floor.
print("\n   n      error     floor   ratio")
gen = primes_above(100)
rng = np.random.default_rng(0)
for _ in range(8):
    p = next(gen)
    for _ in range(40):
        next(gen)  # thin the sequence to spread the moduli
    gg = (int(rng.integers(1, p)), int(rng.integers(1, p)))
    sdv = cf_short_vector(p, gg)
    fe = fooling_error(p, 1.0, sdv)
    print(f"{p:6d}  {fe['error_value']:.5f}  {fe['floor']:.5f}  "
          f"{fe['error_value'] / fe['floor']:5.2f}")
