"""Manual smoke run of the moduli pipeline on two 12-line specifications."""

import sys
import time

sys.path.insert(0, "src")

from linemoduli.moduli import IncidenceSpec, normalize, propagate, realize
from linemoduli.parse import poly_str, unipoly_str

FIG_REALIZABLE = [
    [4, 5, 6, 7, 8, 12],
    [1, 2, 3, 12],
    [10, 11, 12],
    [4, 9, 10],
    [5, 9, 11],
    [3, 6, 9],
    [2, 7, 9],
    [1, 8, 9],
    [3, 4, 11],
    [2, 5, 10],
    [1, 6, 11],
    [2, 8, 11],
    [3, 7, 10],
]

spec = IncidenceSpec.make(12, FIG_REALIZABLE)
frame = normalize(spec)
print("anchors:", frame.p_anchor, frame.r_anchor, "shared:", frame.shared_line)
print("pencil vars:", frame.pencil_vars)
system = propagate(frame, spec)
print("variables:", system.variables)
print("free lines:", system.free_lines, "derived:", system.derived_lines)
print("equations (%d):" % len(system.equations))
for e in system.equations:
    print("   ", poly_str(e))
print("inequations:", len(system.inequations))

t0 = time.time()
report = realize(spec)
dt = time.time() - t0
v = report.verdict
print("verdict:", v.kind, "in %.2fs" % dt)
print("moduli points:", v.moduli_points, "quotient:", v.conj_quotient_points)
for b in v.branches:
    print(
        "  branch:",
        b.var,
        unipoly_str(b.modulus, b.var) if b.modulus else "rational",
        "real/nonreal:",
        (b.real_embeddings, b.nonreal_embeddings),
    )
print("discards:", len(v.discarded))
for d in v.discarded[:6]:
    print("   ", d)
print("shortcuts:", report.shortcuts)
