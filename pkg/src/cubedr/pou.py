"""Smooth partitions of unity on cube plots for a two-set open cover.

Evaluation is double precision.  The construction is inductive in the plot
dimension: near the boundary of the cube a plot copies the values of its
faces, in the interior it uses a partition of unity pulled back from the
model, and a collar function blends the two.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from .polyform import PolyForm, PolyMap
from .polynomial import Polynomial


class CoverageError(ValueError):
    pass


# stabilizer and ramps ------------------------------------------------------------

def _h(t):
    if isinstance(t, complex):
        return cmath.exp(-1 / t) if t.real > 0 else 0.0
    return math.exp(-1.0 / t) if t > 0 else 0.0


def stabilizer_eval(t):
    """``h(t) / (h(t) + h(1 - t))`` with ``h(t) = exp(-1/t)`` for t > 0 and 0 otherwise.

    Accepts complex arguments (analytic continuation on the smooth branch)."""
    re = t.real if isinstance(t, complex) else t
    if re <= 0:
        return 0.0 * t if isinstance(t, complex) else 0.0
    if re >= 1:
        return 1.0 + 0.0 * t if isinstance(t, complex) else 1.0
    a, b = _h(t), _h(1 - t)
    return a / (a + b)


def stabilizer_prime(t):
    re = t.real if isinstance(t, complex) else t
    if re <= 0 or re >= 1:
        return 0.0 * t if isinstance(t, complex) else 0.0
    a, b = _h(t), _h(1 - t)
    da, db = a / (t * t), b / ((1 - t) * (1 - t))
    return (da * b + a * db) / ((a + b) ** 2)


def stabilizer_array(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    out = np.where(t >= 1, 1.0, 0.0)
    mid = (t > 0) & (t < 1)
    if mid.any():
        tm = t[mid]
        a = np.exp(-1.0 / tm)
        b = np.exp(-1.0 / (1.0 - tm))
        out[mid] = a / (a + b)
    return out


def _ramp_params(a, b):
    if not a < b:
        raise ValueError(f"ramp needs a < b, got a={a}, b={b}")
    eps = (b - a) / 4
    return a + eps, b - a - 2 * eps


def lambda_ab(a, b, t):
    """0 for t <= a + eps, 1 for t >= b - eps, eps = (b - a) / 4."""
    lo, width = _ramp_params(a, b)
    return stabilizer_eval((t - lo) / width)


def lambda_ab_prime(a, b, t):
    lo, width = _ramp_params(a, b)
    return stabilizer_prime((t - lo) / width) / width


def lambda_ab_array(a, b, t: np.ndarray) -> np.ndarray:
    lo, width = _ramp_params(a, b)
    return stabilizer_array((np.asarray(t, dtype=float) - lo) / width)


def psi_boundary(n: int, a: float, x) -> float:
    """Collar function: 1 on the boundary of the n-cube, 0 at sup-distance >= 3a/4."""
    if not 0 < a < 0.5:
        raise ValueError("collar width must lie in (0, 1/2)")
    x = np.asarray(x, dtype=float).reshape(-1, n)
    return float(psi_boundary_array(a, x)[0])


def psi_boundary_array(a: float, x: np.ndarray) -> np.ndarray:
    s = np.maximum(x, 1.0 - x).max(axis=1) if x.shape[1] else np.zeros(x.shape[0])
    return lambda_ab_array(1.0 - a, 1.0, s)


# base function on the model ----------------------------------------------------------

@dataclass
class BallCover:
    """Open cover {A, B} where each set is a union of open balls in model coordinates."""
    A: list
    B: list

    @staticmethod
    def _depth(balls, pts):
        out = np.zeros(pts.shape[0])
        for c, r in balls:
            d = np.sqrt(((pts - np.asarray(c, dtype=float)) ** 2).sum(axis=1))
            out = np.maximum(out, float(r) - d)
        return out

    def depth_A(self, pts):
        """Positive exactly inside A: distance to the complement of the nearest-reaching ball."""
        return self._depth(self.A, pts)

    def depth_B(self, pts):
        return self._depth(self.B, pts)


class BaseFunction:
    """Continuous ``rho`` on the model: 0 outside B, 1 outside A."""

    normal = True

    def __init__(self, cover: BallCover):
        self.cover = cover

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        fa = self.cover.depth_A(pts)
        fb = self.cover.depth_B(pts)
        tot = fa + fb
        if (tot <= 0).any():
            raise CoverageError("a sampled plot point lies outside both cover sets")
        return fb / tot


class ThreeValuedBase(BaseFunction):
    """Fallback without a metric: 0 on A-only points, 1/2 on the overlap, 1 on B-only."""

    normal = False

    def __call__(self, pts):
        ina = self.cover.depth_A(pts) > 0
        inb = self.cover.depth_B(pts) > 0
        if (~(ina | inb)).any():
            raise CoverageError("a sampled plot point lies outside both cover sets")
        return np.where(ina & inb, 0.5, np.where(ina, 0.0, 1.0))


# per-plot partitions -------------------------------------------------------------------

def face_plot(P: PolyMap, i: int, eps: int) -> PolyMap:
    return PolyMap.slice_inclusion(P.m - 1, eps, axis=i).then(P)


def degeneracy_plot(P: PolyMap, i: int) -> PolyMap:
    """``P o eps_i``: a plot on the (m+1)-cube ignoring coordinate i."""
    return PolyMap(P.m + 1, [c.insert_var(i - 1) for c in P.components])


@dataclass
class PoUOnPlot:
    plot: PolyMap
    collar: float          # width a of the neighbourhood U_a
    margin: float          # guaranteed distance of rho o P from the thresholds on the support
    builder: "PoUBuilder" = field(repr=False)
    reduced: tuple | None = None   # (plot, kept axes) when the plot is degenerate

    @property
    def constant_width(self) -> float:
        """Faces values are copied exactly along this distance from the boundary."""
        return self.collar / 4

    def rho(self, x: np.ndarray):
        """(rho^A, rho^B) at points x of shape (N, n)."""
        x = np.asarray(x, dtype=float)
        x = x.reshape(-1, self.plot.m) if self.plot.m else x.reshape(max(len(x), 1), 0)
        return self.builder._eval(self, x)

    def rhoA(self, x):
        return self.rho(x)[0]

    def rhoB(self, x):
        return self.rho(x)[1]


class PoUBuilder:
    """Memoized inductive construction over all plots and their faces."""

    def __init__(self, cover: BallCover, normal: bool = True, grid_denominator: int = 32):
        self.cover = cover
        self.base = BaseFunction(cover) if normal else ThreeValuedBase(cover)
        self.grid = grid_denominator
        self._cache: dict = {}
        self._urysohn_cache: dict = {}

    # base partition: rho^B = lambda_{1/3,2/3}(rho), rho^A = 1 - rho^B
    def _interior(self, P: PolyMap, x: np.ndarray):
        vals = self.base(P.eval_array(x))
        if not self.base.normal and P.m > 0:
            vals = self._cube_urysohn(P, x)
        b = lambda_ab_array(1 / 3, 2 / 3, vals)
        return 1.0 - b, b

    def _cube_urysohn(self, P: PolyMap, x: np.ndarray) -> np.ndarray:
        """Urysohn function on the cube from grid distances to the preimages of the complements."""
        trees = self._urysohn_cache.get(P)
        if trees is None:
            g = _grid(P.m, self.grid)
            img = P.eval_array(g)
            trees = tuple(cKDTree(g[depth(img) <= 0]) if (depth(img) <= 0).any() else None
                          for depth in (self.cover.depth_A, self.cover.depth_B))
            self._urysohn_cache[P] = trees
        dA, dB = (np.full(x.shape[0], 10.0) if t is None else t.query(x)[0] for t in trees)
        return dB / (dA + dB)

    def get(self, P: PolyMap) -> PoUOnPlot:
        hit = self._cache.get(P)
        if hit is not None:
            return hit
        n = P.m
        keep = [i for i in range(n) if any(c.depends_on(i) for c in P.components)]
        if len(keep) < n:
            comps = []
            for c in P.components:
                for i in reversed(range(n)):
                    if i not in keep:
                        c = c.drop_var(i)
                comps.append(c)
            red = PolyMap(len(keep), comps)
            inner = self.get(red)
            out = PoUOnPlot(P, inner.collar, inner.margin, self, (inner, tuple(keep)))
        elif n == 0:
            out = PoUOnPlot(P, 0.25, 1 / 12, self)
        else:
            faces = [self.get(face_plot(P, i, e)) for i in range(1, n + 1) for e in (0, 1)]
            prev_const = min(f.constant_width for f in faces)
            prev_margin = min(min(f.margin for f in faces), 1 / 12)
            a_dist = self._support_distance(P, prev_margin)
            a = min(prev_const / 2, a_dist / 2, 0.2)
            out = PoUOnPlot(P, a, prev_margin / 2, self)
        self._cache[P] = out
        return out

    def _support_distance(self, P: PolyMap, margin: float) -> float:
        """Distance over which rho o P moves by less than ``margin / 2``."""
        if not self.base.normal:
            g = _grid(P.m, self.grid)
            img = P.eval_array(g)
            bad = g[(self.cover.depth_A(img) <= 0) | (self.cover.depth_B(img) <= 0)]
            if len(bad) == 0:
                return 1.0
            return max(1.0 / self.grid, 0.25 * _min_gap(bad))
        lip = self._lipschitz(P)
        return 1.0 if lip == 0 else (margin / 2) / lip

    def _lipschitz(self, P: PolyMap) -> float:
        """Grid estimate of max |d(rho o P)/dx_i| with a safety factor of 2."""
        g = _grid(P.m, self.grid)
        h = 1.0 / (4 * self.grid)
        base = self.base(P.eval_array(g))
        worst = 0.0
        for i in range(P.m):
            g2 = g.copy()
            g2[:, i] = np.clip(g2[:, i] + h, 0, 1)
            step = g2[:, i] - g[:, i]
            ok = step > 0
            if not ok.any():
                continue
            diff = np.abs(self.base(P.eval_array(g2[ok])) - base[ok]) / step[ok]
            worst = max(worst, float(diff.max()))
        return 2.0 * worst

    def _eval(self, pp: PoUOnPlot, x: np.ndarray):
        if pp.reduced is not None:
            inner, keep = pp.reduced
            return self._eval(inner, x[:, list(keep)])
        n = pp.plot.m
        N = x.shape[0]
        if n == 0:
            return self._interior(pp.plot, np.zeros((N, 0)))
        a = pp.collar
        psi = psi_boundary_array(a, x)
        ia, ib = self._interior(pp.plot, x)
        ra = (1.0 - psi) * ia
        rb = (1.0 - psi) * ib
        active = psi > 0
        if active.any():
            xs = x[active]
            # nearest face: axis and side with the smallest distance to the boundary
            dist = np.concatenate([xs, 1.0 - xs], axis=1)
            which = dist.argmin(axis=1)
            ha = np.zeros(xs.shape[0])
            hb = np.zeros(xs.shape[0])
            for k in np.unique(which):
                sel = which == k
                i, e = (k % n) + 1, int(k >= n)
                face = self.get(face_plot(pp.plot, i, e))
                y = np.delete(xs[sel], i - 1, axis=1)
                fa, fb = self._eval(face, y)
                ha[sel], hb[sel] = fa, fb
            ra[active] += psi[active] * ha
            rb[active] += psi[active] * hb
        return ra, rb


def _grid(n: int, den: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0))
    axis = np.linspace(0.0, 1.0, den + 1)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _min_gap(pts: np.ndarray) -> float:
    return 1.0 / max(1, int(round(len(pts) ** (1 / max(pts.shape[1], 1)))))


def build_pou(cover: BallCover, plots: Sequence[PolyMap], grid_denominator: int = 32,
              normal: bool = True) -> list:
    """Partition-of-unity evaluators for each plot (faces are built on demand and shared)."""
    builder = PoUBuilder(cover, normal=normal, grid_denominator=grid_denominator)
    return [builder.get(P) for P in sorted(plots, key=lambda P: P.m)]


# verification -----------------------------------------------------------------------------

@dataclass
class PoUReport:
    max_sum_deviation: float = 0.0
    support_violations: int = 0
    degeneracy_residual: float = 0.0
    face_residual: float = 0.0
    collar_residual: float = 0.0
    points: int = 0

    def ok(self, tol: float = 1e-12) -> bool:
        return (self.max_sum_deviation < tol and self.support_violations == 0
                and self.degeneracy_residual < tol and self.face_residual < tol
                and self.collar_residual < tol)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def check_pou(pous: Sequence[PoUOnPlot], grid_denominator: int = 64) -> PoUReport:
    """Evaluate conditions (sum, support, degeneracy, face, collar) on a grid."""
    rep = PoUReport()
    seen = set()
    stack = list(pous)
    while stack:
        pp = stack.pop()
        if pp.plot in seen:
            continue
        seen.add(pp.plot)
        n = pp.plot.m
        den = grid_denominator if n <= 2 else max(8, grid_denominator // 4)
        g = _grid(n, den)
        ra, rb = pp.rho(g)
        rep.points += len(g)
        rep.max_sum_deviation = max(rep.max_sum_deviation, float(np.abs(ra + rb - 1.0).max()))
        builder = pp.builder
        img = pp.plot.eval_array(g)
        if builder.base.normal:
            r = builder.base(img)
            inGA = (r < 2 / 3) & (builder.cover.depth_A(img) > 0)
            inGB = (r > 1 / 3) & (builder.cover.depth_B(img) > 0)
        else:
            inGA = builder.cover.depth_A(img) > 0
            inGB = builder.cover.depth_B(img) > 0
        rep.support_violations += int(((ra > 0) & ~inGA).sum() + ((rb > 0) & ~inGB).sum())
        # degeneracies: rho(P o eps_i) = rho(P) o eps_i
        for i in range(1, n + 2):
            D = builder.get(degeneracy_plot(pp.plot, i))
            g1 = _grid(n + 1, min(den, 16))
            da, db = D.rho(g1)
            pa, pb = pp.rho(np.delete(g1, i - 1, axis=1))
            rep.degeneracy_residual = max(rep.degeneracy_residual,
                                          float(np.abs(da - pa).max()), float(np.abs(db - pb).max()))
        if n == 0:
            continue
        gf = _grid(n - 1, den)
        for i in range(1, n + 1):
            for e in (0, 1):
                face = builder.get(face_plot(pp.plot, i, e))
                stack.append(face)
                fa, fb = face.rho(gf)
                pts = np.insert(gf, i - 1, float(e), axis=1)
                pa, pb = pp.rho(pts)
                rep.face_residual = max(rep.face_residual,
                                        float(np.abs(fa - pa).max()), float(np.abs(fb - pb).max()))
                for t in np.linspace(0.0, pp.constant_width, 5):
                    pts_t = np.insert(gf, i - 1, float(e + (-1) ** e * t), axis=1)
                    ta, tb = pp.rho(pts_t)
                    rep.collar_residual = max(rep.collar_residual,
                                              float(np.abs(ta - pa).max()), float(np.abs(tb - pb).max()))
    return rep


# Mayer-Vietoris splitting -------------------------------------------------------------------

def mv_split(kappa: PolyForm, pp: PoUOnPlot):
    """Evaluators for ``k1 = rho^B kappa`` (a form on A) and ``k2 = -rho^A kappa`` (on B);
    their difference on the overlap is ``kappa``."""

    def parts(x):
        x = np.asarray(x, dtype=float).reshape(-1, kappa.n)
        ra, rb = pp.rho(x)
        vals = {k: a.eval_array(x) for k, a in kappa.coeffs.items()}
        k1 = {k: rb * v for k, v in vals.items()}
        k2 = {k: -ra * v for k, v in vals.items()}
        return k1, k2, vals

    return parts


@dataclass
class SplitReport:
    reconstruction_error: float
    support_violations: int
    samples: int


def check_mv_split(kappa: PolyForm, pp: PoUOnPlot, samples: int = 256) -> SplitReport:
    n = kappa.n
    side = max(2, int(round(samples ** (1 / max(n, 1)))))
    x = _grid(n, side - 1)[:samples] if n else np.zeros((1, 0))
    k1, k2, vals = mv_split(kappa, pp)(x)
    err = 0.0
    for k, v in vals.items():
        err = max(err, float(np.abs(k1[k] - k2[k] - v).max()))
    img = pp.plot.eval_array(x)
    cover = pp.builder.cover
    bad = 0
    for k in vals:
        bad += int(((np.abs(k1[k]) > 0) & (cover.depth_B(img) <= 0)).sum())
        bad += int(((np.abs(k2[k]) > 0) & (cover.depth_A(img) <= 0)).sum())
    return SplitReport(err, bad, len(x))
