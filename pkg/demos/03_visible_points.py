"""Visible points, the Hilbert 90 map, and enumeration of unit orbits by norm."""
from normone.field import builtin_field, norm
from normone.hilbert90 import (brute_force_oracle, collision_scan, enumerate_visible, pi_map,
                               visible_decompose)
from normone.units import unit_system

U = unit_system(builtin_field("sqrt2"))
K = U.field
t = K.theta

# pi(a) = a / sigma(a) always has norm one
for a in (2 + t, 1 + t, 3 + t):
    print(a, "->", pi_map(a), norm(pi_map(a)))

# every integer is n times a primitive element, and pi does not see n
g = 6 + 3 * t
n, alpha = visible_decompose(g)
print(n, alpha, pi_map(g) == pi_map(alpha))

# one row per unit orbit of primitive integers with |N| < r
rep = enumerate_visible(U, 8)
print(rep.to_csv())

# the search box is derived from the unit lattice; a blind box agrees
print(brute_force_oracle(U, 20, 8).class_keys() == rep.class_keys())

# classes of different height can land on the same torus point
for group in collision_scan(enumerate_visible(U, 3), 1e-8):
    print([(c.h, c.coords, c.torus_point) for c in group])

# larger runs: the box grows like sqrt(r) per coordinate
big = enumerate_visible(U, 10**4)
print(big.count, big.box_radius, f"{big.wall_clock:.2f}s")
