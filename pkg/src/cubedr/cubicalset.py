"""Cubic sets, cubical complexes and the subdivision functors.

A cubic set is built inductively: a rational lattice box, a cone ``sigma * b``
over a lower-dimensional cubic set, or a prism ``sigma x I`` along a
coordinate axis.  Every cubic set is a convex polytope; its characteristic
map from the unit cube is polynomial and all faces are obtained by
restricting that map to the faces of the cube, so face incidences and
orientations are exact.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import nnls

from . import linalg
from .polyform import PolyMap
from .polynomial import Polynomial, bernstein_bounds, certify_below


class GeometryError(ValueError):
    pass


class SubdivisionError(RuntimeError):
    """Raised when iterated subdivision fails to become subordinate."""

    def __init__(self, message, metrics=None):
        super().__init__(message)
        self.metrics = metrics


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# cells ------------------------------------------------------------------------

class _CachedHash:
    # cells are nested frozen trees of Fractions; hashing them repeatedly is costly
    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self._fields))
            object.__setattr__(self, "_h", h)
        return h


@dataclass(frozen=True)
class Lattice(_CachedHash):
    intervals: tuple
    _fields = ("intervals",)
    __hash__ = _CachedHash.__hash__

    def __post_init__(self):
        iv = tuple((_fr(a), _fr(b)) for a, b in self.intervals)
        for a, b in iv:
            if b < a:
                raise GeometryError(f"empty interval [{a},{b}]")
        object.__setattr__(self, "intervals", iv)


@dataclass(frozen=True)
class Cone(_CachedHash):
    base: object
    apex: tuple
    _fields = ("base", "apex")
    __hash__ = _CachedHash.__hash__

    def __post_init__(self):
        object.__setattr__(self, "apex", tuple(_fr(x) for x in self.apex))


@dataclass(frozen=True)
class Product(_CachedHash):
    base: object
    axis: int
    _fields = ("base", "axis")
    __hash__ = _CachedHash.__hash__


CubicSet = Lattice | Cone | Product


def point(coords: Sequence) -> Lattice:
    return Lattice(tuple((c, c) for c in coords))


def box(intervals: Sequence) -> Lattice:
    return Lattice(tuple(intervals))


def ambient_dim(s) -> int:
    if isinstance(s, Lattice):
        return len(s.intervals)
    if isinstance(s, Cone):
        return len(s.apex)
    return ambient_dim(s.base)


def dim(s) -> int:
    if isinstance(s, Lattice):
        return sum(1 for a, b in s.intervals if b > a)
    return dim(s.base) + 1


_vert_cache: dict = {}


def vertices(s) -> frozenset:
    """Vertex set (all points are rational tuples)."""
    v = _vert_cache.get(s)
    if v is not None:
        return v
    if isinstance(s, Lattice):
        v = frozenset(itertools.product(*[(a,) if a == b else (a, b) for a, b in s.intervals]))
    elif isinstance(s, Cone):
        v = vertices(s.base) | {s.apex}
    else:
        k = s.axis - 1
        v = frozenset(itertools.chain.from_iterable(
            (p, p[:k] + (p[k] + 1,) + p[k + 1:]) for p in vertices(s.base)))
    _vert_cache[s] = v
    return v


def barycenter(s) -> tuple:
    vs = vertices(s)
    m = len(vs)
    return tuple(sum(c) / m for c in zip(*vs))


def bounding_box(s) -> tuple:
    vs = list(vertices(s))
    return tuple((min(c), max(c)) for c in zip(*vs))


def affine_rank(points: Iterable) -> int:
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    return linalg.rank(rows) if rows else 0


def cone(base, apex: Sequence) -> "CubicSet":
    """``base * apex``; the cone over nothing (``base=None``) is the apex point."""
    apex = tuple(_fr(x) for x in apex)
    if base is None:
        return point(apex)
    if len(apex) != ambient_dim(base):
        raise GeometryError("apex has the wrong number of coordinates")
    vs = vertices(base)
    if affine_rank(list(vs) + [apex]) != dim(base) + 1:
        raise GeometryError("apex lies in the affine hull of the base")
    return Cone(base, apex)


def product_with_I(base, axis: int) -> "CubicSet":
    """The prism ``base x I`` along coordinate ``axis`` (1-based)."""
    n = ambient_dim(base)
    if not 1 <= axis <= n:
        raise GeometryError(f"axis {axis} out of range 1..{n}")
    if any(v[axis - 1] != 0 for v in vertices(base)):
        raise GeometryError(f"base does not lie in the hyperplane x{axis} = 0")
    return Product(base, axis)


def translate(s, axis: int, amount=1):
    """Shift a cell by ``amount`` along ``axis`` (1-based)."""
    amount = _fr(amount)
    k = axis - 1
    if isinstance(s, Lattice):
        iv = list(s.intervals)
        a, b = iv[k]
        iv[k] = (a + amount, b + amount)
        return Lattice(tuple(iv))
    if isinstance(s, Cone):
        ap = s.apex[:k] + (s.apex[k] + amount,) + s.apex[k + 1:]
        return Cone(translate(s.base, axis, amount), ap)
    if s.axis == axis:
        raise GeometryError("cannot translate a prism along its own axis")
    return Product(translate(s.base, axis, amount), s.axis)


def embed(s, value=0):
    """Append a trailing coordinate fixed at ``value``."""
    value = _fr(value)
    if isinstance(s, Lattice):
        return Lattice(s.intervals + ((value, value),))
    if isinstance(s, Cone):
        return Cone(embed(s.base, value), s.apex + (value,))
    return Product(embed(s.base, value), s.axis)


def char_map(s) -> PolyMap:
    """Characteristic map from the unit ``dim(s)``-cube onto ``s``."""
    q = dim(s)
    n = ambient_dim(s)
    if isinstance(s, Lattice):
        comps = []
        k = 0
        for a, b in s.intervals:
            if b > a:
                comps.append(Polynomial.const(q, a) + Polynomial.var(q, k) * (b - a))
                k += 1
            else:
                comps.append(Polynomial.const(q, a))
        return PolyMap(q, comps)
    if isinstance(s, Cone):
        base = char_map(s.base)
        t = Polynomial.var(q, 0)
        comps = []
        for c, b in zip(base.components, s.apex):
            lifted = c.insert_var(0)
            comps.append(t * lifted + (1 - t) * b)
        return PolyMap(q, comps)
    base = char_map(s.base)
    comps = [c.insert_var(q - 1) for c in base.components]
    comps[s.axis - 1] = comps[s.axis - 1] + Polynomial.var(q, q - 1)
    return PolyMap(q, comps)


def param_face(s, i: int, eps: int):
    """The cell parametrized by ``char_map(s) o d^eps_i``; ``None`` if that
    restriction collapses (is independent of some parameter)."""
    q = dim(s)
    if not 1 <= i <= q:
        raise GeometryError(f"face index {i} out of range for a {q}-cell")
    if isinstance(s, Lattice):
        iv = list(s.intervals)
        free = [k for k, (a, b) in enumerate(iv) if b > a]
        k = free[i - 1]
        a, b = iv[k]
        iv[k] = (b, b) if eps else (a, a)
        return Lattice(tuple(iv))
    if isinstance(s, Cone):
        if i == 1:
            if eps == 1:
                return s.base
            return point(s.apex) if q == 1 else None
        f = param_face(s.base, i - 1, eps)
        return None if f is None else Cone(f, s.apex)
    if i == q:
        return s.base if eps == 0 else translate(s.base, s.axis)
    f = param_face(s.base, i, eps)
    return None if f is None else Product(f, s.axis)


def facets(s) -> list:
    """Non-degenerate codimension-one parameter faces with their signs
    ``(-1)^i * (+1 for eps=1, -1 for eps=0)``."""
    out = []
    for i in range(1, dim(s) + 1):
        for eps in (1, 0):
            f = param_face(s, i, eps)
            if f is not None:
                out.append((f, (-1) ** i * (1 if eps else -1)))
    return out


_faces_cache: dict = {}


def all_faces(s) -> frozenset:
    """Every face of ``s`` including ``s`` itself (the empty face is implicit)."""
    r = _faces_cache.get(s)
    if r is not None:
        return r
    out = {s}
    for f, _ in facets(s):
        out |= all_faces(f)
    r = frozenset(out)
    _faces_cache[s] = r
    return r


def proper_faces(s) -> frozenset:
    return all_faces(s) - {s}


def volume(s) -> Fraction:
    """Exact ``dim(s)``-volume for full-dimensional cells (|integral of det J|)."""
    q = dim(s)
    if q != ambient_dim(s):
        raise GeometryError("volume needs a full-dimensional cell")
    if q == 0:
        return Fraction(1)
    jac = char_map(s).jacobian()
    det = _poly_det([list(r) for r in jac])
    return abs(det.integrate_all_unit())


def _poly_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = None
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _poly_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return Polynomial.zero(m[0][0].n)
    return total


def cell_id(s) -> str:
    """Canonical text id for lattice cells, e.g. ``[0,0]x[0,1]``."""
    if isinstance(s, Lattice):
        return "x".join(f"[{_fmt(a)},{_fmt(b)}]" for a, b in s.intervals)
    raise GeometryError("only lattice cells have interval ids")


def sort_key(s):
    return (dim(s), sorted(vertices(s)), repr(s))


# complexes ----------------------------------------------------------------------

class CubicalComplex:
    """A finite face-closed family of cubic sets in R^n (the empty face is implicit)."""

    def __init__(self, ambient: int, cells: Iterable, close: bool = True):
        self.ambient_dim = ambient
        cs = set()
        for c in cells:
            if ambient_dim(c) != ambient:
                raise GeometryError("cell lives in a different ambient space")
            cs |= all_faces(c) if close else {c}
        self.cells = frozenset(cs)
        self._sorted = None

    @classmethod
    def from_lattice(cls, boxes: Iterable) -> "CubicalComplex":
        boxes = [b if isinstance(b, Lattice) else Lattice(tuple(b)) for b in boxes]
        if not boxes:
            raise GeometryError("a complex needs at least one cell")
        return cls(ambient_dim(boxes[0]), boxes)

    @classmethod
    def standard_cube(cls, n: int) -> "CubicalComplex":
        return cls(n, [Lattice(((0, 1),) * n)])

    def __contains__(self, s):
        return s in self.cells

    def __iter__(self):
        return iter(self.sorted_cells())

    def __len__(self):
        return len(self.cells)

    def __eq__(self, other):
        return isinstance(other, CubicalComplex) and self.cells == other.cells

    def __hash__(self):
        return hash(self.cells)

    def sorted_cells(self) -> list:
        if self._sorted is None:
            self._sorted = sorted(self.cells, key=sort_key)
        return self._sorted

    def of_dim(self, q: int) -> list:
        return [c for c in self.sorted_cells() if dim(c) == q]

    @property
    def dim(self) -> int:
        return max((dim(c) for c in self.cells), default=-1)

    def maximal_cells(self, among=None) -> list:
        pool = self.cells if among is None else set(among)
        covered = set()
        for c in pool:
            covered |= proper_faces(c)
        return sorted((c for c in pool if c not in covered), key=sort_key)

    def f_vector(self) -> list:
        out = [0] * (self.dim + 1)
        for c in self.cells:
            out[dim(c)] += 1
        return out

    def subcomplex(self, cells: Iterable) -> "CubicalComplex":
        return CubicalComplex(self.ambient_dim, cells)


@dataclass
class AuditReport:
    missing_faces: list = field(default_factory=list)
    bad_intersections: list = field(default_factory=list)
    volume: Fraction | None = None
    expected_volume: Fraction | None = None

    @property
    def ok(self) -> bool:
        vol_ok = self.volume is None or self.volume == self.expected_volume
        return not self.missing_faces and not self.bad_intersections and vol_ok


def audit(K: CubicalComplex, carrier_volume=None) -> AuditReport:
    """Check face closure, intersections and (optionally) the carrier volume.

    Intersections are checked combinatorially: the vertices two cells share
    must be exactly the vertex set of a common face (or empty).
    """
    rep = AuditReport()
    for c in K.cells:
        for f in proper_faces(c):
            if f not in K.cells:
                rep.missing_faces.append((c, f))
    by_verts: dict = {}
    for c in K.cells:
        by_verts.setdefault(vertices(c), set()).add(c)
    cells = K.sorted_cells()
    verts = [vertices(c) for c in cells]
    face_verts = [{vertices(f) for f in all_faces(c)} for c in cells]
    # only pairs sharing a vertex can meet in a face; pairs that overlap without
    # a shared vertex are caught by the volume check
    incident: dict = {}
    for k, vs in enumerate(verts):
        for v in vs:
            incident.setdefault(v, []).append(k)
    seen = set()
    for ks in incident.values():
        for a, b in itertools.combinations(ks, 2):
            if (a, b) in seen:
                continue
            seen.add((a, b))
            shared = verts[a] & verts[b]
            if shared not in (face_verts[a] & face_verts[b]):
                rep.bad_intersections.append((cells[a], cells[b]))
    if carrier_volume is not None:
        n = K.ambient_dim
        rep.expected_volume = _fr(carrier_volume)
        rep.volume = sum((volume(c) for c in K.cells if dim(c) == n), Fraction(0))
    return rep


# covers and subordination -----------------------------------------------------------

@dataclass(frozen=True)
class Ball:
    """Open Euclidean ball in model coordinates."""
    center: tuple
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(_fr(x) for x in self.center))
        object.__setattr__(self, "radius", _fr(self.radius))

    def contains(self, p) -> bool:
        return sum((_fr(a) - c) ** 2 for a, c in zip(p, self.center)) < self.radius ** 2

    def contains_box(self, bx) -> bool:
        far = 0
        for (lo, hi), c in zip(bx, self.center):
            far += max((lo - c) ** 2, (hi - c) ** 2)
        return far < self.radius ** 2

    def contains_float(self, pts: np.ndarray) -> np.ndarray:
        c = np.array([float(x) for x in self.center])
        return ((pts - c) ** 2).sum(axis=1) < float(self.radius) ** 2


@dataclass(frozen=True)
class Box:
    """Union of closed model cells given as boxes (``cells(...)`` covers)."""
    intervals: tuple

    def contains(self, p) -> bool:
        return all(lo <= _fr(x) <= hi for x, (lo, hi) in zip(p, self.intervals))

    def contains_box(self, bx) -> bool:
        return all(lo <= a and b <= hi for (a, b), (lo, hi) in zip(bx, self.intervals))

    def contains_float(self, pts: np.ndarray) -> np.ndarray:
        ok = np.ones(len(pts), dtype=bool)
        for k, (lo, hi) in enumerate(self.intervals):
            ok &= (pts[:, k] >= float(lo)) & (pts[:, k] <= float(hi))
        return ok


@dataclass
class CoverSet:
    name: str
    pieces: list

    def contains(self, p) -> bool:
        return any(pc.contains(p) for pc in self.pieces)

    def contains_float(self, pts: np.ndarray) -> np.ndarray:
        ok = np.zeros(len(pts), dtype=bool)
        for pc in self.pieces:
            ok |= pc.contains_float(pts)
        return ok


@dataclass
class SubdivPair:
    complex: CubicalComplex
    plot: PolyMap

    def __post_init__(self):
        if self.plot.m != self.complex.ambient_dim:
            raise GeometryError("plot domain does not match the complex")

    @property
    def n(self) -> int:
        return self.complex.ambient_dim


def image_box(plot: PolyMap, s) -> tuple:
    """Certified enclosure of ``plot(s)``: Bernstein bounds of ``plot o char_map(s)``."""
    if plot.is_affine():
        imgs = [plot(v) for v in vertices(s)]
        return tuple((min(c), max(c)) for c in zip(*imgs))
    comp = char_map(s).then(plot)
    return tuple(bernstein_bounds(c) for c in comp.components)


def is_subordinate(plot: PolyMap, s, cover: Sequence[CoverSet]) -> bool:
    """Sound test that ``plot(s)`` lies in one cover set.

    For affine plots the image is the convex hull of the vertex images, so
    checking vertices against a single convex piece is exact.  Otherwise a
    Bernstein box enclosure must fit inside one piece; failure to certify
    counts as "not subordinate".
    """
    if plot.is_affine():
        imgs = [plot(v) for v in vertices(s)]
        for U in cover:
            for pc in U.pieces:
                if all(pc.contains(p) for p in imgs):
                    return True
        return False
    comp = char_map(s).then(plot)
    bx = tuple(bernstein_bounds(c) for c in comp.components)
    for U in cover:
        for pc in U.pieces:
            if pc.contains_box(bx):
                return True
            if isinstance(pc, Ball):
                # tighter: bound the squared distance to the center directly
                g = Polynomial.zero(comp.m)
                for c, x0 in zip(comp.components, pc.center):
                    g = g + (c - x0) * (c - x0)
                if certify_below(g, pc.radius ** 2):
                    return True
    return False


def subordinate_cells(pair: SubdivPair, cover: Sequence[CoverSet]) -> CubicalComplex:
    keep = [c for c in pair.complex.cells if is_subordinate(pair.plot, c, cover)]
    return CubicalComplex(pair.n, keep, close=False)


class _Subdivider:
    """Memoized recursion: subdivision of a cell depends only on the cell,
    the plot and the cover, which makes the construction functorial."""

    def __init__(self, plot: PolyMap, cover):
        self.plot = plot
        self.cover = cover
        self._sub: dict = {}
        self._sd: dict = {}
        self._td: dict = {}

    def subordinate(self, s) -> bool:
        r = self._sub.get(s)
        if r is None:
            r = is_subordinate(self.plot, s, self.cover)
            self._sub[s] = r
        return r

    def sd(self, s) -> frozenset:
        """Cells of Sd restricted to ``s`` (closed under faces)."""
        r = self._sd.get(s)
        if r is not None:
            return r
        if self.subordinate(s):
            r = all_faces(s)
        else:
            b = barycenter(s)
            boundary = set()
            for f in proper_faces(s):
                boundary |= self.sd(f)
            r = set(boundary)
            r.add(point(b))
            for rho in boundary:
                r.add(Cone(rho, b))
            r = frozenset(r)
        self._sd[s] = r
        return r

    def td(self, s) -> frozenset:
        """Cells of Td restricted to ``s x I`` (last coordinate is the I axis)."""
        r = self._td.get(s)
        if r is not None:
            return r
        n1 = ambient_dim(s) + 1
        if self.subordinate(s):
            r = set()
            for f in all_faces(s):
                e = embed(f)
                r |= {e, translate(e, n1), Product(e, n1)}
            r = frozenset(r)
        else:
            b = barycenter(s) + (Fraction(1),)
            side = set()
            for f in proper_faces(s):
                side |= self.td(f)
            bottom = embed(s)
            r = set(side)
            r.add(bottom)
            r |= {translate(embed(c), n1) for c in self.sd(s)}
            for rho in side | {bottom}:
                if all(v[-1] == 1 for v in vertices(rho)):
                    continue
                r.add(Cone(rho, b))
            r = frozenset(r)
        self._td[s] = r
        return r


def subdivide_sd(pair: SubdivPair, cover, _sub: _Subdivider | None = None) -> SubdivPair:
    sub = _sub or _Subdivider(pair.plot, cover)
    cells = set()
    for c in pair.complex.cells:
        cells |= sub.sd(c)
    return SubdivPair(CubicalComplex(pair.n, cells, close=False), pair.plot)


def all_subordinate(pair: SubdivPair, cover) -> bool:
    return all(is_subordinate(pair.plot, c, cover) for c in pair.complex.cells)


def covers_image(pair: SubdivPair, cover, denominator: int = 16) -> bool:
    """Sampled check that every plot value lies in some cover set."""
    for x in itertools.product([Fraction(k, denominator) for k in range(denominator + 1)],
                               repeat=pair.n):
        y = pair.plot(x)
        if not any(U.contains(y) for U in cover):
            return False
    return True


def sd_iterate_until_subordinate(pair: SubdivPair, cover, max_iters: int = 10):
    if not covers_image(pair, cover):
        raise SubdivisionError("the cover misses part of the plot image",
                               metrics=mesh_metrics(pair, cover))
    r = 0
    cur = pair
    while not all_subordinate(cur, cover):
        if r >= max_iters:
            raise SubdivisionError(
                f"not subordinate after {max_iters} subdivisions",
                metrics=mesh_metrics(cur, cover))
        cur = subdivide_sd(cur, cover)
        r += 1
    return cur, r


def prism_td(pair: SubdivPair, cover) -> SubdivPair:
    sub = _Subdivider(pair.plot, cover)
    cells = set()
    for c in pair.complex.cells:
        cells |= sub.td(c)
    n = pair.n
    comps = [Polynomial.var(n + 1, i) for i in range(n)]
    proj = PolyMap(n + 1, comps)
    return SubdivPair(CubicalComplex(n + 1, cells, close=False), proj.then(pair.plot))


def slice_cells(K: CubicalComplex, value) -> set:
    """Cells of a complex on R^n x I lying in the slice ``last coordinate = value``,
    with the last coordinate dropped."""
    value = _fr(value)
    out = set()
    for c in K.cells:
        if all(v[-1] == value for v in vertices(c)):
            out.add(_drop_last(c))
    return out


def _drop_last(s):
    if isinstance(s, Lattice):
        return Lattice(s.intervals[:-1])
    if isinstance(s, Cone):
        return Cone(_drop_last(s.base), s.apex[:-1])
    return Product(_drop_last(s.base), s.axis)


# mesh metrics -----------------------------------------------------------------

def point_polytope_distance(x, verts) -> float:
    """Euclidean distance from ``x`` to the convex hull of ``verts``.

    Solved as non-negative least squares with the convexity constraint
    appended as a heavily weighted row.
    """
    V = np.array([[float(c) for c in v] for v in verts])
    x = np.array([float(c) for c in x])
    if len(V) == 1:
        return float(np.linalg.norm(V[0] - x))
    w = 100.0
    A = np.vstack([V.T, w * np.ones(len(V))])
    b = np.concatenate([x, [w]])
    try:
        lam, _ = nnls(A, b, maxiter=50 * A.shape[1] + 500)
    except RuntimeError:
        # fall back to the nearest vertex, an upper bound
        return float(np.min(np.linalg.norm(V - x, axis=1)))
    lam = lam / lam.sum()
    return float(np.linalg.norm(lam @ V - x))


@dataclass
class MeshMetrics:
    epsilon: float | None
    diameter: float


def _cells_meet(a, b) -> bool:
    # cells of one complex meet iff they share a face, hence a vertex
    return bool(vertices(a) & vertices(b))


def mesh_metrics(pair: SubdivPair, cover, denominator: int | None = None) -> MeshMetrics:
    """Distance data between subordinate and non-subordinate parts.

    ``epsilon``: least distance from a maximal subordinate cell to a sampled
    point outside the preimage of a cover set containing that cell's image.
    ``diameter``: largest distance from a maximal subordinate cell to a point
    of a non-subordinate cell meeting it (attained at vertices by convexity);
    0 when nothing is left to subdivide.
    """
    n = pair.n
    if denominator is None:
        denominator = {0: 1, 1: 64, 2: 24, 3: 8}.get(n, 4)
    K = pair.complex
    sub = {c for c in K.cells if is_subordinate(pair.plot, c, cover)}
    nonsub = [c for c in K.sorted_cells() if c not in sub]
    maximal = K.maximal_cells(sub)
    if n:
        grid = np.array(list(itertools.product(np.linspace(0.0, 1.0, denominator + 1), repeat=n)))
    else:
        grid = np.zeros((1, 0))
    img = pair.plot.eval_array(grid)
    outside = {U.name: grid[~U.contains_float(img)] for U in cover}
    eps = None
    for tau in maximal:
        bx = np.array([[float(lo), float(hi)] for lo, hi in bounding_box(tau)])
        for U in cover:
            pts = outside[U.name]
            if not len(pts) or not is_subordinate(pair.plot, tau, [U]):
                continue
            # box distance is a lower bound; refine only promising points
            gap = np.maximum(bx[:, 0] - pts, 0) + np.maximum(pts - bx[:, 1], 0)
            lower = np.sqrt((gap ** 2).sum(axis=1))
            for k in np.argsort(lower):
                if eps is not None and lower[k] >= eps:
                    break
                dd = point_polytope_distance(pts[k], vertices(tau))
                eps = dd if eps is None else min(eps, dd)
    diam = 0.0
    by_vertex: dict = {}
    for s in nonsub:
        for v in vertices(s):
            by_vertex.setdefault(v, []).append(s)
    for tau in maximal:
        touching = {s for v in vertices(tau) for s in by_vertex.get(v, ())}
        for s in touching:
            for v in vertices(s):
                diam = max(diam, point_polytope_distance(v, vertices(tau)))
    return MeshMetrics(eps, diam)


# serialization ------------------------------------------------------------------

def serialize(K: CubicalComplex) -> str:
    """Text form: maximal lattice cells as interval lines, other cells as
    ``cone``/``prism`` lines referring to earlier ids."""
    ids: dict = {}
    lines = []
    counter = itertools.count(1)

    def emit(s):
        if s in ids:
            return ids[s]
        if isinstance(s, Lattice):
            ids[s] = cell_id(s)
            return ids[s]
        if isinstance(s, Cone):
            base = emit(s.base)
            cid = f"c{next(counter)}"
            apex = ",".join(_fmt(a) for a in s.apex)
            lines.append(f"cone {cid} base={base} apex=({apex})")
        else:
            base = emit(s.base)
            cid = f"p{next(counter)}"
            lines.append(f"prism {cid} base={base} axis={s.axis}")
        ids[s] = cid
        return cid

    lattice_lines = []
    maximal = sorted(K.maximal_cells(), key=sort_key)
    for s in maximal:
        if isinstance(s, Lattice):
            lattice_lines.append(cell_id(s).replace("]x[", "] x ["))
    for s in maximal:
        if not isinstance(s, Lattice):
            emit(s)
    return "\n".join(lattice_lines + lines) + "\n"
