"""Line integrals of closed 1-forms along piecewise-polynomial paths."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .cohomology import (CellComplexModel, ModelError, _affine_point, check_compatible,
                         chain_complex, betti, integrate_cell)
from .cubicalset import Lattice, all_faces, char_map, dim, image_box, vertices
from .polyform import (CellwiseForm, FormError, PolyForm, PolyMap, exterior_derivative,
                       integrate_top, pullback)
from .polynomial import Polynomial


class PathError(ValueError):
    pass


def _to_param(cell: Lattice, gamma: PolyMap) -> PolyMap:
    """Express an ambient segment inside ``cell`` in the cell's parameter coordinates."""
    comps = []
    for (a, b), c in zip(cell.intervals, gamma.components):
        if b > a:
            comps.append((c - a) * (1 / (b - a)))
    return PolyMap(gamma.m, comps)


def _point_closure(model: CellComplexModel, p) -> set:
    """All ambient points identified with ``p``."""
    seen = {tuple(p)}
    todo = [tuple(p)]
    while todo:
        q = todo.pop()
        for ident in model.identifications:
            src, dst = ident.source, ident.target
            if all(a <= x <= b for x, (a, b) in zip(q, src.intervals)):
                r = _affine_point(ident.matrix, ident.offset, q)
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
            if all(a <= x <= b for x, (a, b) in zip(q, dst.intervals)):
                for r in _inverse_images(ident, q):
                    if r not in seen:
                        seen.add(r)
                        todo.append(r)
    return seen


def _inverse_images(ident, q):
    M = [list(r) for r in ident.matrix]
    rhs = [Fraction(x) - Fraction(o) for x, o in zip(q, ident.offset)]
    sol = linalg.solve(M, rhs, cols=len(q))
    if sol is None:
        return []
    # the matrix may be singular off the cell; pin free coordinates to the source cell
    pt = tuple(sol)
    src = ident.source.intervals
    if not all(a <= x <= b for x, (a, b) in zip(pt, src)):
        pt = tuple(a if a == b else x for x, (a, b) in zip(pt, src))
    if all(a <= x <= b for x, (a, b) in zip(pt, src)) and \
            _affine_point(ident.matrix, ident.offset, pt) == tuple(q):
        return [pt]
    return []


def same_point(model: CellComplexModel | None, p, q) -> bool:
    if tuple(p) == tuple(q):
        return True
    if model is None:
        return False
    return tuple(q) in _point_closure(model, p)


class PathPlot:
    """Ordered segments ``(cell, map from [0,1] into that cell)``."""

    def __init__(self, segments: Sequence, model: CellComplexModel | None = None):
        if not segments:
            raise PathError("a path needs at least one segment")
        self.segments = list(segments)
        self.model = model
        for cell, g in self.segments:
            if model is not None and cell not in model.complex.cells:
                raise PathError(f"segment cell {cell} is not a cell of the model")
            lo_hi = image_box(g, Lattice(((Fraction(0), Fraction(1)),)))
            if any(lo < a or hi > b for (lo, hi), (a, b) in zip(lo_hi, cell.intervals)):
                raise PathError(f"segment leaves its cell {cell}")
        for (c0, g0), (c1, g1) in zip(self.segments, self.segments[1:]):
            if not same_point(model, g0((Fraction(1),)), g1((Fraction(0),))):
                raise PathError("consecutive segments do not meet")

    @property
    def start(self):
        return self.segments[0][1]((Fraction(0),))

    @property
    def end(self):
        return self.segments[-1][1]((Fraction(1),))

    def is_loop(self) -> bool:
        return same_point(self.model, self.end, self.start)

    def reversed(self) -> "PathPlot":
        one_minus = PolyMap(1, [Polynomial.const(1, 1) - Polynomial.var(1, 0)])
        return PathPlot([(c, one_minus.then(g)) for c, g in reversed(self.segments)], self.model)

    def then(self, other: "PathPlot") -> "PathPlot":
        return PathPlot(self.segments + other.segments, self.model)


def integrate_1form(w: CellwiseForm, path: PathPlot) -> Fraction:
    """Exact integral of a cellwise 1-form along a path."""
    if w.p != 1:
        raise FormError("only 1-forms integrate along paths")
    if path.model is not None:
        check_compatible(path.model, w)
    total = Fraction(0)
    for cell, g in path.segments:
        q = dim(cell)
        if q == 0:
            continue
        local = pullback(_to_param(cell, g), w.get(cell, q))
        total += integrate_top(local)
    return total


# Green's formula ----------------------------------------------------------------------------

def _on_square(w: PolyForm, H: PolyMap) -> PolyForm:
    if H.m != 2:
        raise FormError("the homotopy must be a map from the square")
    return pullback(H, w)


def green_check(w: PolyForm, H: PolyMap) -> Fraction:
    """Circulation of ``w`` around the boundary of the square ``H``, exactly.

    By Green's formula this equals the double integral of ``dw`` over the
    square, so it vanishes for closed ``w``."""
    v = _on_square(w, H)
    total = Fraction(0)
    for i in (1, 2):
        for eps in (0, 1):
            edge = pullback(PolyMap.slice_inclusion(1, eps, axis=i), v)
            sign = (-1) ** (i + 1) * (1 if eps else -1)
            total += sign * integrate_top(edge)
    return total


def green_gap(w: PolyForm, H: PolyMap) -> Fraction:
    """Boundary circulation minus the double integral of ``dw``; always zero."""
    v = _on_square(w, H)
    return green_check(w, H) - integrate_top(exterior_derivative(v))


# primitives ----------------------------------------------------------------------------------

def radial_primitive(w: PolyForm) -> Polynomial:
    """``F(y) = int_0^1 w(s y) . y ds`` on a parameter cube; ``dF = w`` when w is closed."""
    n = w.n
    if w.p != 1:
        raise FormError("radial primitives are built for 1-forms")
    if n == 0:
        return Polynomial.zero(0)
    s = Polynomial.var(n + 1, 0)
    ys = [Polynomial.var(n + 1, i + 1) for i in range(n)]
    acc = Polynomial.zero(n + 1)
    for (i,), a in w.coeffs.items():
        acc = acc + a.compose([s * y for y in ys]) * ys[i - 1]
    return acc.integrate_unit(0).drop_var(0)


def _edge_integral(w: CellwiseForm, edge) -> Fraction:
    return integrate_cell(w, edge)


@dataclass
class DefectReport:
    integrals: list
    primitive: CellwiseForm | None
    verified: bool


def exactness_defect(model: CellComplexModel, w: CellwiseForm, loops: Sequence[PathPlot]) -> DefectReport:
    """Loop integrals of a closed 1-form; when all vanish, build a primitive F
    (vertex values along a spanning forest, radial integrals on cells) and
    check ``dF = w`` together with compatibility of F."""
    if not exterior_derivative_cellwise_zero(w):
        raise FormError("form is not closed")
    vals = [integrate_1form(w, lp) for lp in loops]
    if any(vals):
        return DefectReport(vals, None, False)
    # vertex potentials over identification classes
    reps0 = model.generators.get(0, [])
    pot: dict = {}
    adj: dict = {r: [] for r in reps0}
    for e in model.complex.cells:
        if dim(e) != 1:
            continue
        from .cubicalset import param_face
        a, b = param_face(e, 1, 0), param_face(e, 1, 1)
        ra, rb = model.rep(a)[0], model.rep(b)[0]
        val = _edge_integral(w, e)
        adj[ra].append((rb, val))
        adj[rb].append((ra, -val))
    for r in reps0:
        if r in pot:
            continue
        pot[r] = Fraction(0)
        todo = [r]
        while todo:
            u = todo.pop()
            for v, val in adj[u]:
                want = pot[u] + val
                if v in pot:
                    if pot[v] != want:
                        raise ModelError("loop integrals vanish on the given loops but not on all cycles; "
                                         "the loops do not generate first homology")
                else:
                    pot[v] = want
                    todo.append(v)
    F = CellwiseForm(0)
    for c in model.complex.cells:
        q = dim(c)
        origin = model.rep(_origin_vertex(c))[0]
        base = pot[origin]
        if q == 0:
            F[c] = PolyForm.function(Polynomial.const(0, base))
        else:
            F[c] = PolyForm.function(radial_primitive(w.get(c, q)) + base)
    try:
        check_compatible(model, F)
    except FormError as exc:
        raise ModelError(f"primitive is inconsistent: {exc}") from None
    ok = all(exterior_derivative(F[c]) == w.get(c, dim(c)) for c in model.complex.cells)
    if not ok:
        raise ModelError("primitive does not differentiate back to the form")
    return DefectReport(vals, F, True)


def _origin_vertex(cell):
    return Lattice(tuple((a, a) for a, _ in cell.intervals))


def exterior_derivative_cellwise_zero(w: CellwiseForm) -> bool:
    return w.d().is_zero()


def pairing_matrix(forms: Sequence[CellwiseForm], loops: Sequence[PathPlot]) -> list:
    return [[integrate_1form(w, lp) for lp in loops] for w in forms]


def pairing_rank(forms: Sequence[CellwiseForm], loops: Sequence[PathPlot]) -> int:
    m = pairing_matrix(forms, loops)
    return linalg.rank(m) if m and m[0] else 0
