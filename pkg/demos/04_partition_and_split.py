"""A smooth partition of unity on plots, and splitting a form across a cover.

The circle is the unit interval with ends glued, covered by a middle arc A and
an arc B around the glued point.  We sample rho^A, rho^B along the identity
plot, then split dx into a piece living on A and a piece living on B.
"""
import numpy as np

from cubedr import io, pou
from cubedr.polyform import PolyForm, PolyMap
from cubedr.verify import ball_cover, read_data

C = ball_cover(io.parse_cover(read_data("circle_arcs.cover")))
pp = pou.PoUBuilder(C).get(PolyMap.identity(1))
xs = np.linspace(0, 1, 9).reshape(-1, 1)
A, B = pp.rho(xs)
for x, a, b in zip(xs[:, 0], A, B):
    print(f"x={x:.3f}  rho^A={a:.6f}  rho^B={b:.6f}")

k1, k2, k = pou.mv_split(PolyForm.dx(1, 1), pp)(xs)
print("\nkappa1 - kappa2 - kappa at the samples:", k1[(1,)] - k2[(1,)] - k[(1,)])
rep = pou.check_mv_split(PolyForm.dx(1, 1), pp, samples=256)
print("reconstruction error:", rep.reconstruction_error, " support violations:", rep.support_violations)
