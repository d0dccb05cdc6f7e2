"""The same pipeline on a cyclic cubic, where the torus is two-dimensional."""
import numpy as np

from normone.field import builtin_field
from normone.hilbert90 import enumerate_visible
from normone.lseries import residue_prediction
from normone.torus import star_discrepancy, weyl_sum
from normone.units import unit_system

U = unit_system(builtin_field("cubic13"))
print(U.describe())  # fundamental units come from the config and are flagged as trusted

rep = enumerate_visible(U, 10**4)
print(rep.count, residue_prediction(U).C * 10**4)

for k in ((1, 0), (0, 1), (1, 1), (2, -1), (3, 1)):
    print(k, round(weyl_sum(rep, k).normalized, 5))

# two-dimensional discrepancy is a grid approximation
print(star_discrepancy(rep, grid=64), star_discrepancy(rep, grid=256))

# sigma permutes the classes, so the point cloud has a threefold symmetry
pts = rep.points()
print(np.histogram2d(pts[:, 0], pts[:, 1], bins=4, range=[[0, 1], [0, 1]])[0].astype(int))
