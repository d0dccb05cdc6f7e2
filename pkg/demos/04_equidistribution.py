"""Weyl sums, star discrepancy and the counting constant for Q(sqrt 2)."""
from normone.field import builtin_field
from normone.hilbert90 import enumerate_visible
from normone.lseries import residue_prediction
from normone.torus import counting_fit, star_discrepancy, weyl_sum
from normone.units import unit_system

U = unit_system(builtin_field("sqrt2"))
bounds = (10**3, 10**4, 10**5)
reports = [enumerate_visible(U, r) for r in bounds]

# normalized |S_k| shrinks as r grows, for every nontrivial character
for k in (1, 2, 3, -1):
    print(k, [round(weyl_sum(rep, k).normalized, 5) for rep in reports])

# the trivial character just counts
print([weyl_sum(rep, 0).S for rep in reports])

# exact one-dimensional star discrepancy
print([round(star_discrepancy(rep), 5) for rep in reports])

# count ~ C r with C from the class number formula
fit = counting_fit(reports)
pred = residue_prediction(U)
print(fit.C_hat, pred.C, fit.exponent)
print([rep.count / rep.bound for rep in reports])
