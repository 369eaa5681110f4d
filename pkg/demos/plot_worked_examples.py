"""
Three worked orders
===================

Build orders of level 49, 27 and 4889996650 and check each one by
recomputing its reduced discriminant from the trace form.
"""

from fractions import Fraction as F

from quatorders import construct_order, hnf, reduced_discriminant, verify_order
from quatorders.construct import flip_root, closed_form_basis, uncorrected_basis

# Discriminant 7, level 49, with the auxiliary prime fixed to 11.
r = construct_order(7, 49, q_override=11)
print("algebra", r.algebra, "case", r.recipe.case_tag)
for e in r.order.basis:
    print("   ", e)
print("level", r.level)

# The same lattice written with a different third generator.
other = hnf(r.algebra, [(1, 0, 0, 0), (F(1, 2), F(1, 2), 0, 0), (0, 0, F(7, 22), F(-35, 22)), (0, 0, 0, 1)])
print("equal as lattices:", other == r.order)

# Discriminant 3, level 27.  The default presentation is (-3, -73).
r = construct_order(3, 27)
print("\nalgebra", r.algebra, "q =", r.recipe.q, "x =", r.recipe.x)
print("level", r.level)

# With the other square root of a mod q we get a second order of level 27.
flipped = closed_form_basis(flip_root(r.recipe))
print("other root gives level", reduced_discriminant(flipped), "same lattice:", flipped == r.order)

# A larger level: 2 * 5^2 * 7^5 * 11 * 23^2 in the algebra of discriminant 70.
r = construct_order(70, 4889996650)
rc = r.recipe
print(f"\nalgebra {r.algebra}, q = {rc.q}, x = {rc.x}, z = {rc.z}, z' = {rc.zprime}")
print("f, g, h =", rc.f, rc.g, rc.h)
print("predicted exponents", r.predicted_local)
print("verified:", verify_order(r.order, 70, 4889996650).passed)

# Putting 23 into f instead of g gives another order of the same level,
# and the four-case formula without lifting applies to it directly.
alt = construct_order(70, 4889996650, placement={23: "f"})
print("f, g =", alt.recipe.f, alt.recipe.g, "level", alt.level)
for e in uncorrected_basis(alt.recipe).basis:
    print("   ", e)
