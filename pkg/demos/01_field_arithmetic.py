"""Exact arithmetic in a cyclic field, with sigma and the archimedean embeddings."""
from normone.field import Element, apply_sigma, builtin_field, embed, norm, trace

K = builtin_field("sqrt2")
t = K.theta  # sqrt(2), coordinates (0, 1) over the basis {1, theta}
print(K.describe()["min_poly"])  # ascending coefficients of x^2 - 2

# Elements carry exact Fraction coordinates, so products and quotients are exact
print((1 + t) * (1 - t))  # -1
print((3 + t) / (1 + 2 * t))  # rational coordinates are allowed
print(apply_sigma(3 + t))  # the Galois generator sends theta to -theta

# Norm is a determinant over the rationals, never a float product
print(norm(3 + 2 * t), norm(t), trace(3 + 2 * t))  # 1 -2 6

# Embeddings are diagnostics: 192-bit values plus an absolute error bound
vals, err = embed(t)
print([float(v) for v in vals], err)

# The shipped simplest cubic: sigma is a 3x3 integer matrix acting on coordinates
C = builtin_field("cubic13")
x = C.theta
print(C.signature, C.discriminant)
print([apply_sigma(x, k) for k in range(3)])
print(x ** 3 - x ** 2 - 4 * x - 1)  # zero element
print(norm(x), norm(1 + x))  # both units
