"""Telling s^k from s^k' with the exact triangle.

The anti-diagonal c- - c+ is killed by the connecting map at k = 0 but not at
kappa = k - k' != 0.  With the identity on the exterior column no map of
triangles exists, and the anti-diagonal is the witness.  Dropping the
identity requirement shows why the fixed boundary matters: scaling one
exterior summand by x^-kappa y^kappa does make the diagram commute.
"""

from sutured_braids.group_algebra import LaurentPoly
from sutured_braids.invariant import diagram_check, distinguish, search_unit_scalings
from sutured_braids.surface_chords import SurfaceSpec, enumerate_chords

chords = enumerate_chords(SurfaceSpec.torus(), 1.5)

v = distinguish(5, 2, chords)
print("verdict:", v.to_dict()["verdict"], "kappa =", v.kappa)
print("witness:", v.witness.element)
print("image:  ", v.witness.image)

grid = [[int(distinguish(k, kp, chords).distinguished) for kp in range(-4, 5)]
        for k in range(-4, 5)]
print("\ndistinguished(k, k') for k, k' in [-4, 4]:")
for row in grid:
    print(" ".join(map(str, row)))

print("\ndiagram_check(1, Id) =", diagram_check(1))
print("uniform unit scalings commuting at kappa = 1:", len(search_unit_scalings(1)))
q = LaurentPoly.monomial(-1, 1)
print("scaling c- by x^-1 y, c+ by 1:", diagram_check(1, (q, LaurentPoly.one())))
print("per-summand scalings commuting at kappa = 1:",
      len(search_unit_scalings(1, per_summand=True)))
