"""Truncated L-series over visible classes against the ideal series divided by zeta(ds)."""
from normone.field import builtin_field
from normone.hilbert90 import enumerate_visible
from normone.lseries import identity_check, l_truncated, xi1_truncated, zeta
from normone.units import unit_system

U = unit_system(builtin_field("sqrt2"))
print(zeta(2), zeta(4))

# small cutoffs by hand: classes h = 1, 2 and the n = 2 multiple of the unit class
print(l_truncated(U, 0, 2, 2).value, xi1_truncated(U, 0, 2, 4).value)

rep = enumerate_visible(U, 10**4 + 1)
for k in (0, 1, 2):
    for X in (10, 100, 1000, 10**4):
        chk = identity_check(rep, k, 2, X)
        print(k, X, f"{chk.residual:.2e}", f"{chk.residual2:.2e}", chk.verdict,
              "(insufficient cutoff)" if chk.insufficient_cutoff else "")
