"""Subdividing a plot until every cell lands in one cover set.

The plot squashes the square by (x1, x2) -> (x1^2, x2); the cover is two
balls of radius 4/5 centred on opposite sides.  We print the mesh metrics
before and after one subdivision step.  For this pair the measured
diameter ratio is 1/sqrt(2), above the 2/3 one might expect in two
dimensions: the cells left over touch the bottom edge, whose image sits
outside both balls.
"""
from cubedr import cubicalset as cs
from cubedr.verify import load_pair

pair, U = load_pair("square", "squash", "square_sides45")
before = cs.mesh_metrics(pair, U)
one = cs.subdivide_sd(pair, U)
after = cs.mesh_metrics(one, U)
print(f"before: epsilon {before.epsilon}, d {before.diameter:.6f}")
print(f"after one step: f-vector {one.complex.f_vector()}, d {after.diameter:.6f}")
print(f"ratio {after.diameter / before.diameter:.6f}  (n/(n+1) = {2 / 3:.6f})")
out, r = cs.sd_iterate_until_subordinate(pair, U)
print(f"subordinate after r = {r} steps, f-vector {out.complex.f_vector()}, "
      f"audit ok: {cs.audit(out.complex, carrier_volume=1).ok}")
left = [c for c in one.complex.maximal_cells() if not cs.is_subordinate(pair.plot, c, U)]
print("cells still not subordinate after one step:", len(left))
