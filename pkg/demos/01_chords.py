"""Reeb chords between two fibers, indexed by the fundamental group.

On the flat torus a chord is a lattice translate of the displacement d and
its action is a Euclidean length.  On a genus-2 surface we count group
elements by word length and compare with the known growth series.
"""

from sutured_braids.surface_chords import SurfaceSpec, chord_table, enumerate_chords

torus = SurfaceSpec.torus((0.3, 0.0))
chords = enumerate_chords(torus, 1.5)
print(f"torus, d = {torus.displacement}, cutoff 1.5: {len(chords)} chords")
print(chord_table(chords), end="")

# The identity chord is the shortest one; mirror images tie and are ordered
# by their encoding, so the listing is reproducible.

genus2 = SurfaceSpec.hyperbolic(2)
chords = enumerate_chords(genus2, 3)
sizes = [sum(1 for c in chords if c.action == r) for r in range(4)]
print(f"\ngenus 2, elements by word length: {sizes}")
print("an element of length 3:", chords[-1].gamma.encode())
