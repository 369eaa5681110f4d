"""
Local behaviour and the choice of a and b
=========================================

Hilbert symbols decide where (a, b / Q) ramifies.  The construction
picks a and b so that the ramified primes are exactly those of the
discriminant, and the auxiliary prime q is what makes this possible.
"""

from quatorders import QuatAlgebra, classify_prime
from quatorders.construct import q_conditions, select_ab, split_level
from quatorders.numth import INFINITY, hilbert_symbol

# Hamilton's quaternions ramify at 2 and at infinity only.
H = QuatAlgebra(-1, -1)
print("(-1,-1):", {v: hilbert_symbol(-1, -1, v) for v in (INFINITY, 2, 3, 5)})

# Split the level into its four parts.
split = split_level(4889996650, 70)
print("R1", split.R1, "R2", split.R2, "M1", split.M1, "M2", split.M2)

# Conditions on q: allowed classes mod 8 and the required value of (q/p).
cond = q_conditions(split)
print("q mod 8 in", cond.mod8, "  (q/p) targets", dict(cond.legendre_targets))

# The smallest prime meeting them, and the algebra it produces.
sel = select_ab(split)
A = QuatAlgebra(sel.a, sel.b)
print(f"q = {sel.q}, a = {sel.a}, b = {sel.b}, ramified at {sorted(A.ramified_primes())}")

# How each relevant prime behaves in Q(sqrt a) and in the algebra.
for p in (2, 5, 7, 11, 23, sel.q):
    beh = classify_prime(A, p)
    print(f"{p:>6}  field {beh.field_class:<9} algebra {beh.algebra_class}")
