"""Units, the log lattice, reduction modulo units and torus coordinates."""
import math

from normone.field import builtin_field, norm
from normone.units import log_embed, pell_fundamental_unit, torus_coordinates, unit_reduce, unit_system

# Fundamental units of real quadratic fields from the continued fraction of sqrt(D)
for D in (2, 3, 5, 13, 94):
    K = builtin_field(f"sqrt{D}")
    eps = pell_fundamental_unit(K)
    print(D, eps, norm(eps))

U = unit_system(builtin_field("sqrt2"))
K = U.field
t = K.theta
print("regulator", float(U.regulator), math.log(1 + math.sqrt(2)))

# log ||a||_v at each place; the coordinates sum to log |N(a)|
lv = log_embed(t)
print([float(v) for v in lv.values], float(lv.total()), math.log(2))

# unit_reduce strips powers of the fundamental unit: 3 + 2 sqrt2 = (1 + sqrt2)^2
print(unit_reduce(3 + 2 * t, U))
print(unit_reduce(-(7 + 5 * t) * (3 - t), U))  # sign and unit factors disappear

# Norm-one elements live in ker Sigma; their class mod log U is a point on R/Z
x = (11 + 6 * t) / 7
print(norm(x), torus_coordinates(x, U))
print(torus_coordinates(3 + 2 * t, U))  # a unit sits at the origin
