"""
Knitting the Kronecker hearts
=============================

The quiver of H^d for d = 2 and d = 3, its meshes, and the JSON/DOT output.
"""
import json

from heartknit import emit_dot, emit_json, knit, label_string, verify_quiver
from heartknit.dsl import parse_algebra

A = parse_algebra("""
algebra {
  vertices = [1, 2];
  arrow alpha : 1 -> 2 deg 0;
  arrow beta  : 1 -> 2 deg -1;
}
""")

q = knit(A, 2)
print(q.status, len(q.vertices), "vertices", len(q.arrows), "arrows")

for i, it in enumerate(q.vertices):
    mark = "P" if it.projective else ("I" if it.injective else " ")
    tau = label_string(q.vertices[it.tau].obj) if it.tau is not None else "-"
    print(f"{i:2d} {mark} {label_string(it.obj):24s} tau: {tau}")

# every invariant list should come back empty
print(verify_quiver(q))

payload = json.loads(emit_json(q))
print(sorted(payload))
print(emit_dot(q).decode().splitlines()[0])

# one step wider
q3 = knit(A, 3)
print(q3.status, len(q3.vertices), "vertices")
