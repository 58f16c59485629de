"""
Counting destabilizing directions on the round 7-sphere
=======================================================

The linearization window translates into a spectral count: each level l
of the relevant operator contributes eigenvalue -(4 + l) with an exactly
computable multiplicity bound, and the levels whose ratio mu = -(4+l)/4
lands in the destabilizing window add up to a lower bound for the
instability index.  All multiplicities are exact integer divisions.
"""

from fractions import Fraction

from coflow import (
    dim_lower,
    in_window,
    index_lower_bound,
    level_mu,
    multiplicity_d,
    multiplicity_d0,
    multiplicity_d1,
    sphere_eigenvalue,
)

# the three representation-dimension columns and the resulting bound
print(f"{'l':>3} {'eigenvalue':>10} {'d':>10} {'d0':>8} {'d1':>8} {'bound':>8}")
for l in range(9):
    print(f"{l:>3} {sphere_eigenvalue(l):>10} {multiplicity_d(l):>10} "
          f"{multiplicity_d0(l):>8} {multiplicity_d1(l):>8} {dim_lower(l):>8}")

# levels 0..2 contribute nothing: the raw difference d - d0 - d1 is
# non-positive there and the bound clamps at zero
print("\nraw differences at low levels:",
      [multiplicity_d(l) - multiplicity_d0(l) - multiplicity_d1(l)
       for l in range(3)])

# the window depends on the coupling gamma; close to gamma = 2 it pins
# down levels 1..6, of which only 3..6 carry multiplicity
gamma = Fraction(21, 10)
windowed = [l for l in range(30) if in_window(l, gamma)]
print(f"\ngamma = {gamma}: windowed levels {windowed}")
for l in windowed:
    print(f"  l = {l}: mu = {level_mu(l)}, bound {dim_lower(l)}")

total, _ = index_lower_bound(0, 100, gamma)
print("index lower bound:", total)
assert total == 7047

# a larger gamma widens the window and the count grows quickly
for g in (3, 4, 6):
    total, _ = index_lower_bound(0, 100, g)
    print(f"gamma = {g}: index lower bound {total}")
