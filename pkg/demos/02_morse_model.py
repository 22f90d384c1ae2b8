"""The 1-jet Morse model of a local braid s^k.

h has three positive critical points: c0 of index 1 near a = 0 and c-, c+
of index 2 on either side of the twist region.  Each of c-, c+ sends exactly
one rigid gradient line to c0, and the line from c+ winds k times around
the circle, which is where the coefficient x^-k y^k comes from.

Usage: python 02_morse_model.py [k] [svg path]
"""

import sys

from sutured_braids.morse_engine import MorseProblem, morse_differential
from sutured_braids.svg import heatmap_svg

k = int(sys.argv[1]) if len(sys.argv) > 1 else 2
svg_path = sys.argv[2] if len(sys.argv) > 2 else f"morse_k{k}.svg"

report = morse_differential(MorseProblem(k=k))
for c in report.critical_points:
    print(f"{c.tier:>3}: a = {c.a:+.6f}, theta = {c.theta:.6f}, h = {c.value:.6f}, "
          f"index {c.index}")

for tier in ("c-", "c+"):
    (t,) = report.trajectories[tier]
    print(f"{tier} -> c0: winding {t.winding}, {t.fan_size} fan rays in the cluster, "
          f"{len(t.samples)} samples")

print("coefficients:", {t: {m.encode(): n for m, n in c.items()}
                        for t, c in report.coefficients().items()})

with open(svg_path, "w") as fh:
    fh.write(heatmap_svg(report))
print("wrote", svg_path)
