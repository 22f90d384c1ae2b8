"""Cylindrical, wrapped and exterior complexes, and their exact triangle.

Per chord class the wrapped complex is c0 <- (c-, c+) with matrix [1, q],
q = x^-k y^k.  Its homology is one class in degree 1, the exterior complex is
two free classes with zero differential, and the connecting map of the
triangle is (u, v) -> u + q v.
"""

from sutured_braids.complexes import (
    build_triangle,
    homology_unit_pivot,
    serialize_complex,
    verify_d_squared,
    verify_exactness,
)
from sutured_braids.surface_chords import SurfaceSpec, enumerate_chords

chords = enumerate_chords(SurfaceSpec.torus(), 0.8)
t = build_triangle(chords, k=1)
print(serialize_complex(t.total))

for name, c in (("LC", t.sub), ("WLC", t.total), ("ext", t.quotient)):
    h = homology_unit_pivot(c)
    print(f"{name:>4}: d^2 = 0 is {verify_d_squared(c).ok}, homology ranks {h.ranks()}")

gamma = t.total.basis.gammas()[0]
print("\nH_1(WLC) generator for the identity class:",
      homology_unit_pivot(t.total).get(gamma, 1).generators[0])
print("connecting matrix on (c-, c+):", [str(e) for e in t.connecting_matrix(gamma)[0]])

for k in range(-8, 9):
    assert verify_exactness(build_triangle(chords, k)).ok
print("long exact sequence is exact for k in [-8, 8]")
