"""Cohomology of glued squares, and the Mayer-Vietoris sequence of a sphere.

Models are lattice complexes with affine gluings.  Betti numbers come from
exact rational ranks; the long exact sequence is assembled from two caps.
"""
from cubedr import cohomology as coh
from cubedr import io
from cubedr.verify import load_model, read_data

for name in ("point", "circle", "sphere", "torus", "rp2", "wedge"):
    M = load_model(name)
    cc = coh.chain_complex(M)
    print(f"{name:8s} cells {cc.dims}  betti {coh.betti(cc)}")

print("\nthe torus, subdivided once, has the same Betti numbers:",
      coh.model_betti(coh.subdivide_model(load_model("torus"))))

print("\nsphere as the boundary of a box, covered by a top and a bottom cap")
U = io.parse_cover(read_data("sphere_box_caps.cover"))
T = coh.mayer_vietoris(load_model("sphere_box"), U["A"], U["B"])
for r in T.rows:
    print(f"  q={r.q}  H(A)={r.b_A} H(B)={r.b_B} H(AnB)={r.b_AB}  rank delta={r.rank_delta}")
print("  exact:", T.exact, " assembled:", T.assembled, " direct:", T.direct)
