"""
Exact exterior calculus on the invariant forms
==============================================

Every form the library touches lives in a 40-dimensional space spanned by
wedge products of three vertical one-forms e1, e2, e3 with the horizontal
forms 1, w1, w2, w3, vol.  Coefficients are rational numbers, so every
identity below is checked exactly, not to a tolerance.
"""

from fractions import Fraction

from coflow import (
    GeometryParams,
    all_monomials,
    exterior_derivative,
    form,
    hodge_star,
    inner_product,
    total_integral,
    volume_form,
    wedge,
)

# the basis splits by degree as 1, 3, 6, 10, 10, 6, 3, 1
by_degree = {}
for m in all_monomials():
    by_degree.setdefault(m.degree, []).append(m)
print("degree profile:", {d: len(ms) for d, ms in sorted(by_degree.items())})

# structure equations: each vertical one-form differentiates into a
# vertical 2-form plus its horizontal partner
e1 = form([("e1", 1)])
print("d(e1) =", exterior_derivative(e1))

# d is nilpotent on the whole basis
assert all(exterior_derivative(exterior_derivative(form([(m.key, 1)]))).is_zero()
           for m in all_monomials())
print("d(d(x)) = 0 for all 40 basis monomials")

# wedge follows the graded sign rule; the horizontal 2-forms square to
# twice the horizontal volume
w1 = form([("w1", 1)])
print("w1 ^ w1 =", wedge(w1, w1))
e12 = wedge(e1, form([("e2", 1)]))
print("(e1 ^ e2) ^ w3 =", wedge(e12, form([("w3", 1)])))

# a geometry point fixes the metric: two horizontal scales a, b and the
# fibre scale q; eps switches the orientation convention
p = GeometryParams(a=Fraction(3, 7), b=Fraction(5, 11), q=Fraction(2, 3), eps=-1)
print("\nmetric point:", p)

# the Hodge star is an exact involution there
x = form([("e1^w2", Fraction(4, 9)), ("e123", -2)])
sx = hodge_star(x, p)
print("star(x)       =", sx)
print("star(star(x)) =", hodge_star(sx, p))
assert hodge_star(sx, p) == x

# and it converts wedge products into inner products against the volume
y = form([("e1^w2", 1), ("e2^w1", Fraction(1, 3))])
lhs = wedge(y, hodge_star(x, p))
rhs = inner_product(y, x, p) * volume_form(p)
assert lhs == rhs
print("y ^ star(x) == <y, x> vol holds exactly:",
      total_integral(lhs, p), "=",
      inner_product(y, x, p) * total_integral(volume_form(p), p))
