"""Rational cellular (co)homology of finite cubical models.

A model is a cubical complex together with affine identifications that glue
cells (and all their faces) onto other cells.  Generators of the chain
complex are the identification classes of cells; orientations are
transported through the gluing maps.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .cubicalset import (Ball, Cone, CoverSet, CubicalComplex, Lattice, Product, all_faces,
                         ambient_dim, char_map, dim, facets, vertices, _Subdivider)
from .polyform import (CellwiseForm, FormError, PolyForm, PolyMap, exterior_derivative,
                       integrate_top, pullback)
from .polynomial import Polynomial


class ModelError(ValueError):
    pass


class UnsupportedCoverError(ValueError):
    pass


# affine maps on cells --------------------------------------------------------------

def _affine_point(matrix, offset, p):
    return tuple(sum(Fraction(a) * x for a, x in zip(row, p)) + Fraction(o)
                 for row, o in zip(matrix, offset))


def apply_affine(cell, matrix, offset):
    """Image of a lattice/cone cell under ``x -> M x + o`` (M a signed
    permutation on the relevant axes) and the orientation sign of the induced
    map of parameter cubes."""
    if isinstance(cell, Lattice):
        lo = _affine_point(matrix, offset, [a for a, _ in cell.intervals])
        hi = _affine_point(matrix, offset, [b for _, b in cell.intervals])
        iv = tuple((min(a, b), max(a, b)) for a, b in zip(lo, hi))
        image = Lattice(iv)
        src = [k for k, (a, b) in enumerate(cell.intervals) if b > a]
        dst = [k for k, (a, b) in enumerate(iv) if b > a]
        if len(src) != len(dst):
            raise ModelError("identification collapses a cell")
        sub = [[Fraction(matrix[r][c]) for c in src] for r in dst]
        det = _det(sub) if sub else Fraction(1)
        if det not in (1, -1):
            raise ModelError("identification is not a signed permutation on the cell")
        return image, int(det)
    if isinstance(cell, Cone):
        base, s = apply_affine(cell.base, matrix, offset)
        return Cone(base, _affine_point(matrix, offset, cell.apex)), s
    raise ModelError("identifications of prism cells are not supported")


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum(((-1) ** j) * m[0][j] * _det([r[:j] + r[j + 1:] for r in m[1:]])
               for j in range(n) if m[0][j])


@dataclass
class Identification:
    source: object
    target: object
    matrix: tuple
    offset: tuple


class CellComplexModel:
    """A cubical complex with cells glued by affine identifications."""

    def __init__(self, complex: CubicalComplex, identifications: Sequence[Identification] = (),
                 name: str = ""):
        self.complex = complex
        self.identifications = list(identifications)
        self.name = name
        self._build()

    # union-find with orientation ----------------------------------------------------
    def _build(self):
        parent = {c: c for c in self.complex.cells}
        sign = {c: 1 for c in self.complex.cells}

        def find(c):
            path = []
            while parent[c] != c:
                path.append(c)
                c = parent[c]
            root = c
            # compress; sign[x] is orientation of x relative to its parent
            for x in reversed(path):
                p = parent[x]
                if p != root:
                    sign[x] *= sign[p]
                parent[x] = root
            return root

        def rel(c):
            find(c)
            return sign[c] if parent[c] != c else 1

        for ident in self.identifications:
            img, _ = apply_affine(ident.source, ident.matrix, ident.offset)
            if img != ident.target:
                raise ModelError(f"identification does not map {ident.source} onto {ident.target}")
            for f in all_faces(ident.source):
                g, s = apply_affine(f, ident.matrix, ident.offset)
                if g not in parent:
                    raise ModelError(f"image of face {f} is not a cell of the complex")
                rf, rg = find(f), find(g)
                sf, sg = rel(f), rel(g)
                # orientation: f ~ s * g
                if rf == rg:
                    if sf != s * sg:
                        raise ModelError("identification reverses the orientation of a cell onto itself")
                    continue
                parent[rf] = rg
                sign[rf] = sf * s * sg
        self._rep = {}
        self._orient = {}
        for c in self.complex.cells:
            self._rep[c] = find(c)
            self._orient[c] = rel(c)
        classes: dict = {}
        for c in self.complex.sorted_cells():
            classes.setdefault(self._rep[c], []).append(c)
        self.classes = classes
        by_dim: dict = {}
        for r in sorted(classes, key=lambda c: (dim(c), sorted(vertices(c)), repr(c))):
            by_dim.setdefault(dim(r), []).append(r)
        self.generators = by_dim
        self.index = {q: {r: k for k, r in enumerate(gs)} for q, gs in by_dim.items()}

    @property
    def dim(self) -> int:
        return max(self.generators, default=-1)

    def rep(self, cell):
        """(representative, orientation sign of ``cell`` relative to it)."""
        return self._rep[cell], self._orient[cell]

    def members(self, rep) -> list:
        return self.classes[rep]

    def ranks(self) -> list:
        return [len(self.generators.get(q, [])) for q in range(self.dim + 1)]


# chain complexes -------------------------------------------------------------------

class RationalChainComplex:
    """``dims[q]`` generators in degree q, ``boundaries[q]`` the matrix of
    ``C_q -> C_{q-1}`` (shape dims[q-1] x dims[q]); ``boundaries[0]`` is empty."""

    def __init__(self, dims: Sequence[int], boundaries: Sequence):
        self.dims = list(dims)
        self.boundaries = list(boundaries)

    def boundary(self, q: int):
        if q <= 0 or q >= len(self.dims):
            rows = self.dims[q - 1] if 0 < q <= len(self.dims) else 0
            cols = self.dims[q] if 0 <= q < len(self.dims) else 0
            return [[Fraction(0)] * cols for _ in range(rows)]
        return self.boundaries[q]

    def rank_boundary(self, q: int) -> int:
        if q <= 0 or q >= len(self.dims):
            return 0
        return linalg.rank(self.boundaries[q])

    def check_dd(self) -> bool:
        for q in range(2, len(self.dims)):
            a, b = self.boundaries[q - 1], self.boundaries[q]
            if not a or not b or not b[0]:
                continue
            if not linalg.is_zero(linalg.matmul(a, b)):
                return False
        return True


def cell_boundary(model: CellComplexModel, rep) -> dict:
    """Boundary of a generator as ``{generator: coefficient}``."""
    out: dict = {}
    for f, s in facets(rep):
        r, o = model.rep(f)
        out[r] = out.get(r, 0) + s * o
    return {r: c for r, c in out.items() if c}


def chain_complex(model: CellComplexModel) -> RationalChainComplex:
    top = model.dim
    dims = [len(model.generators.get(q, [])) for q in range(top + 1)]
    bds: list = [[]]
    for q in range(1, top + 1):
        m = linalg.zeros(dims[q - 1], dims[q])
        idx = model.index.get(q - 1, {})
        for j, g in enumerate(model.generators.get(q, [])):
            for r, c in cell_boundary(model, g).items():
                m[idx[r]][j] += c
        bds.append(m)
    cc = RationalChainComplex(dims, bds)
    if not cc.check_dd():
        raise ModelError("boundary of boundary is not zero; identifications are inconsistent")
    return cc


def betti(cc: RationalChainComplex) -> list:
    out = []
    for q in range(len(cc.dims)):
        out.append(cc.dims[q] - cc.rank_boundary(q) - cc.rank_boundary(q + 1))
    return out


def model_betti(model: CellComplexModel) -> list:
    return betti(chain_complex(model))


def disjoint_union_betti(models: Sequence) -> list:
    bs = [m if isinstance(m, (list, tuple)) else model_betti(m) for m in models]
    if not bs:
        return []
    top = max(len(b) for b in bs)
    return [sum(b[q] for b in bs if q < len(b)) for q in range(top)]


def homology_basis(cc: RationalChainComplex, q: int) -> list:
    """Cycles representing a basis of ``H_q`` (as coefficient vectors)."""
    n = cc.dims[q] if q < len(cc.dims) else 0
    if n == 0:
        return []
    Z = linalg.nullspace(cc.boundary(q), cols=n) if q > 0 else linalg.identity(n)
    B_cols = []
    if q + 1 < len(cc.dims) and cc.dims[q + 1]:
        bd = cc.boundaries[q + 1]
        B_cols = [list(col) for col in zip(*bd)]
    basis = []
    current = [c for c in B_cols if any(c)]
    r0 = linalg.rank(linalg.columns_to_matrix(current, n)) if current else 0
    for z in Z:
        trial = current + [z]
        r = linalg.rank(linalg.columns_to_matrix(trial, n))
        if r > r0:
            basis.append(z)
            current = trial
            r0 = r
    return basis


# subdivision of models -------------------------------------------------------------------

def subdivide_model(model: CellComplexModel) -> CellComplexModel:
    """One round of cone subdivision of every cell; identifications are
    carried to the subdivided cells (affine maps preserve vertex centroids)."""
    n = model.complex.ambient_dim
    far = Ball((10 ** 6,) * n, Fraction(1))
    sub = _Subdivider(PolyMap.identity(n), [CoverSet("none", [far])])
    cells = set()
    for c in model.complex.cells:
        cells |= sub.sd(c)
    idents = []
    for ident in model.identifications:
        for c in sub.sd(ident.source):
            img, _ = apply_affine(c, ident.matrix, ident.offset)
            idents.append(Identification(c, img, ident.matrix, ident.offset))
    return CellComplexModel(CubicalComplex(n, cells, close=False), idents, name=model.name + "/Sd")


# subcomplexes and Mayer-Vietoris ----------------------------------------------------------

class SubModel:
    """A union of identification classes closed under faces."""

    def __init__(self, model: CellComplexModel, reps: Iterable):
        self.model = model
        reps = set(reps)
        closed = set()
        for r in reps:
            for c in model.members(r):
                for f in all_faces(c):
                    closed.add(model.rep(f)[0])
        self.reps = closed
        self.generators = {q: [g for g in gs if g in closed] for q, gs in model.generators.items()}
        self.index = {q: {r: k for k, r in enumerate(gs)} for q, gs in self.generators.items()}

    def dims(self, top: int) -> list:
        return [len(self.generators.get(q, [])) for q in range(top + 1)]

    def coboundary(self, q: int) -> list:
        """Matrix of ``C^q -> C^{q+1}`` (the transposed boundary restricted to the subcomplex)."""
        rows = self.generators.get(q + 1, [])
        cols = self.generators.get(q, [])
        m = linalg.zeros(len(rows), len(cols))
        idx = self.index.get(q, {})
        for i, g in enumerate(rows):
            for r, c in cell_boundary(self.model, g).items():
                if r in idx:
                    m[i][idx[r]] += c
        return m

    def intersection(self, other: "SubModel") -> "SubModel":
        return SubModel(self.model, self.reps & other.reps)


def whole(model: CellComplexModel) -> SubModel:
    return SubModel(model, model._rep.values())


def cover_submodel(model: CellComplexModel, cover: CoverSet) -> SubModel:
    """Cells listed explicitly, or cells whose vertices all lie in a ball."""
    picked = set()
    for pc in cover.pieces:
        if isinstance(pc, Ball):
            for c in model.complex.cells:
                if all(pc.contains(v) for v in vertices(c)):
                    picked.add(model.rep(c)[0])
        else:
            lat = Lattice(pc.intervals)
            if lat not in model.complex.cells:
                raise UnsupportedCoverError(f"cover cell {pc.intervals} is not a cell of the model")
            picked.add(model.rep(lat)[0])
    return SubModel(model, picked)


def _cohomology_data(S: SubModel, top: int):
    """Per degree: (dim C^q, cocycle basis Z^q, coboundary columns B^q)."""
    data = []
    dims = S.dims(top + 1)
    for q in range(top + 1):
        n = dims[q]
        dq = S.coboundary(q)
        Z = linalg.nullspace(dq, cols=n) if dq else linalg.identity(n)
        if q > 0 and dims[q - 1]:
            prev = S.coboundary(q - 1)
            B = [list(col) for col in zip(*prev)] if prev else []
        else:
            B = []
        data.append((n, Z, B))
    return data


def _cohom_dim(n, Z, B):
    rb = linalg.rank(linalg.columns_to_matrix(B, n)) if B else 0
    return len(Z) - rb


def _induced_rank(images: list, B_target: list, n_target: int) -> int:
    """Rank of an induced map on cohomology from cocycle images and target coboundaries."""
    if n_target == 0:
        return 0
    rb = linalg.rank(linalg.columns_to_matrix(B_target, n_target)) if B_target else 0
    total = linalg.rank(linalg.columns_to_matrix(list(images) + list(B_target), n_target)) \
        if images or B_target else 0
    return total - rb


def _restrict(vec, src: SubModel, dst: SubModel, q: int):
    idx = src.index.get(q, {})
    return [vec[idx[g]] for g in dst.generators.get(q, [])]


@dataclass
class LESRow:
    q: int
    b_union: int
    b_A: int
    b_B: int
    b_AB: int
    rank_psi: int
    rank_phi: int
    rank_delta: int


@dataclass
class LESTable:
    rows: list
    exact: bool
    failures: list
    assembled: list
    direct: list

    @property
    def agrees(self) -> bool:
        return self.assembled == self.direct

    def to_dict(self) -> dict:
        return {
            "rows": [r.__dict__ for r in self.rows],
            "exact": self.exact,
            "failures": self.failures,
            "assembled_betti": self.assembled,
            "direct_betti": self.direct,
            "agrees": self.agrees,
        }


def mayer_vietoris(model: CellComplexModel, coverA: CoverSet | SubModel,
                   coverB: CoverSet | SubModel) -> LESTable:
    """Long exact sequence of the cochain-level sequence
    ``0 -> C(X) -> C(A) + C(B) -> C(A n B) -> 0`` with all ranks exact."""
    A = coverA if isinstance(coverA, SubModel) else cover_submodel(model, coverA)
    B = coverB if isinstance(coverB, SubModel) else cover_submodel(model, coverB)
    X = whole(model)
    if A.reps | B.reps != X.reps:
        raise UnsupportedCoverError("the two subcomplexes do not cover the model")
    C = A.intersection(B)
    top = model.dim
    dX, dA, dB, dC = (_cohomology_data(S, top + 1) for S in (X, A, B, C))
    rows = []
    rank_psi, rank_phi, rank_delta = [], [], []
    for q in range(top + 2):
        nX, ZX, BX = dX[q]
        nA, ZA, BA = dA[q]
        nB, ZB, BB = dB[q]
        nC, ZC, BC = dC[q]
        # psi: restriction to both pieces
        imgs = [_restrict(z, X, A, q) + _restrict(z, X, B, q) for z in ZX]
        BAB = [b + [Fraction(0)] * nB for b in BA] + [[Fraction(0)] * nA + b for b in BB]
        rank_psi.append(_induced_rank(imgs, BAB, nA + nB))
        # phi: difference of restrictions to the intersection
        imgs = []
        for z in ZA:
            imgs.append(_restrict(z, A, C, q))
        for z in ZB:
            imgs.append([-x for x in _restrict(z, B, C, q)])
        rank_phi.append(_induced_rank(imgs, BC, nC))
        # connecting map: extend by zero on A, apply d, pull back through psi
        if q + 1 < len(dX):
            nX1, _, BX1 = dX[q + 1]
            dA_q = A.coboundary(q)
            psi_rows = _psi_matrix(X, A, B, q + 1)
            imgs = []
            for z in ZC:
                ext = [Fraction(0)] * nA
                idxA = A.index.get(q, {})
                for g, v in zip(C.generators.get(q, []), z):
                    ext[idxA[g]] = v
                da = linalg.matvec(dA_q, ext) if dA_q else []
                rhs = da + [Fraction(0)] * len(B.generators.get(q + 1, []))
                x = linalg.solve(psi_rows, rhs, cols=nX1)
                if x is None:
                    raise ModelError("connecting map lift failed; cover sequence is not exact")
                imgs.append(x)
            rank_delta.append(_induced_rank(imgs, BX1, nX1))
        else:
            rank_delta.append(0)
    betti_of = lambda d, q: _cohom_dim(*d[q])
    failures = []
    for q in range(top + 2):
        hX, hA, hB, hC = (betti_of(d, q) for d in (dX, dA, dB, dC))
        rows.append(LESRow(q, hX, hA, hB, hC, rank_psi[q], rank_phi[q], rank_delta[q]))
        in_X = rank_delta[q - 1] if q > 0 else 0
        if in_X != hX - rank_psi[q]:
            failures.append(f"H^{q}(X)")
        if rank_psi[q] != hA + hB - rank_phi[q]:
            failures.append(f"H^{q}(A)+H^{q}(B)")
        if rank_phi[q] != hC - rank_delta[q]:
            failures.append(f"H^{q}(A n B)")
    assembled = []
    for q in range(top + 1):
        prev = (betti_of(dC, q - 1) - rank_phi[q - 1]) if q > 0 else 0
        assembled.append(prev + betti_of(dA, q) + betti_of(dB, q) - rank_phi[q])
    direct = model_betti(model)
    return LESTable(rows[: top + 1], not failures, failures, assembled, direct)


def _psi_matrix(X: SubModel, A: SubModel, B: SubModel, q: int):
    nX = len(X.generators.get(q, []))
    rows = []
    for S in (A, B):
        idx = X.index.get(q, {})
        for g in S.generators.get(q, []):
            r = [Fraction(0)] * nX
            r[idx[g]] = Fraction(1)
            rows.append(r)
    return rows


# forms on models --------------------------------------------------------------------

def cell_form(ambient: PolyForm, cell) -> PolyForm:
    """Pull an ambient form back to the parameter cube of a cell."""
    return pullback(char_map(cell), ambient)


def cellwise_from_ambient(model: CellComplexModel, pieces: dict, p: int) -> CellwiseForm:
    """Build a form on every cell from ambient forms given on some cells.

    ``pieces`` maps cells to ambient PolyForms.  Each cell gets the pullback
    from a listed cell containing it; all listed cells containing a face must
    agree there, and identified cells must carry matching forms.
    """
    out = CellwiseForm(p)
    for cell, w in pieces.items():
        if w.p != p:
            raise FormError("mixed degrees in one form")
        if cell not in model.complex.cells:
            raise FormError(f"form given on unknown cell {cell}")
        for f in all_faces(cell):
            v = cell_form(w, f)
            if f in out:
                if out[f] != v:
                    raise FormError(f"forms disagree on the shared face {f}")
            else:
                out[f] = v
    for c in model.complex.cells:
        if c not in out:
            out[c] = PolyForm.zero(dim(c), p)
    check_compatible(model, out)
    return out


def param_map(model: CellComplexModel, cell, ident: Identification):
    """Parameter-cube map ``psi`` with ``ident o char(cell) = char(image) o psi``."""
    img, _ = apply_affine(cell, ident.matrix, ident.offset)
    q = dim(cell)
    moved = PolyMap(q, [sum((c * Fraction(a) for c, a in zip(char_map(cell).components, row)),
                            Polynomial.const(q, o))
                        for row, o in zip(ident.matrix, ident.offset)])
    return img, _invert_char(img, moved)


def _invert_char(cell, m: PolyMap) -> PolyMap:
    """Solve ``char(cell) o psi = m`` for affine ``psi`` (cell must be a lattice box)."""
    if not isinstance(cell, Lattice):
        raise ModelError("parameter maps are only computed for lattice cells")
    comps = []
    for (a, b), c in zip(cell.intervals, m.components):
        if b > a:
            comps.append((c - a) * (1 / (b - a)))
    return PolyMap(m.m, comps)


def check_compatible(model: CellComplexModel, w: CellwiseForm):
    """Face restrictions and identifications must transport the form exactly."""
    for c in model.complex.cells:
        wc = w.get(c, dim(c))
        for i in range(1, dim(c) + 1):
            for eps in (0, 1):
                from .cubicalset import param_face
                f = param_face(c, i, eps)
                if f is None:
                    continue
                inc = PolyMap.slice_inclusion(dim(c) - 1, eps, axis=i)
                if pullback(inc, wc) != w.get(f, dim(f)):
                    raise FormError(f"form on {c} does not restrict to the form on its face {f}")
    for ident in model.identifications:
        for f in all_faces(ident.source):
            if not isinstance(f, Lattice):
                continue
            img, psi = param_map(model, f, ident)
            if pullback(psi, w.get(img, dim(img))) != w.get(f, dim(f)):
                raise FormError(f"form is not compatible with the identification of {f}")


def integrate_cell(w: CellwiseForm, cell) -> Fraction:
    return integrate_top(w.get(cell, dim(cell)))


@dataclass
class DeRhamReport:
    degree: int
    pairing: list
    rank: int
    betti: int

    @property
    def full_rank(self) -> bool:
        return self.rank == self.betti


def derham_compare(model: CellComplexModel, forms: Sequence[CellwiseForm]) -> DeRhamReport:
    """Pair closed forms with a homology basis and compare the rank with betti."""
    if not forms:
        raise FormError("no forms supplied")
    p = forms[0].p
    for w in forms:
        if w.p != p:
            raise FormError("forms of different degrees")
        if not w.d().is_zero():
            raise FormError("supplied form is not closed")
        check_compatible(model, w)
    cc = chain_complex(model)
    cycles = homology_basis(cc, p)
    gens = model.generators.get(p, [])
    matrix = []
    for w in forms:
        row = []
        for z in cycles:
            row.append(sum((coef * integrate_cell(w, g) for coef, g in zip(z, gens) if coef),
                           Fraction(0)))
        matrix.append(row)
    r = linalg.rank(matrix) if matrix and matrix[0] else 0
    return DeRhamReport(p, matrix, r, betti(cc)[p] if p < len(cc.dims) else 0)


def pair_cycle(model: CellComplexModel, w: CellwiseForm, cycle: dict) -> Fraction:
    """Integral of a form over a chain ``{cell: coefficient}``."""
    total = Fraction(0)
    for cell, coef in cycle.items():
        total += coef * integrate_cell(w, cell)
    return total


# excision homotopy -------------------------------------------------------------------------

def _lambda01(x):
    from .pou import lambda_ab
    return lambda_ab(0.0, 1.0, x)


def _lambda01_prime(x):
    from .pou import lambda_ab_prime
    return lambda_ab_prime(0.0, 1.0, x)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)
GL_T = 0.5 * (_GL_NODES + 1.0)
GL_W = 0.5 * _GL_WEIGHTS


def _eval_coeffs(w: PolyForm, pts):
    """Coefficient arrays (supports complex points) keyed by index."""
    return {k: a.eval_array(pts) for k, a in w.coeffs.items()}


def _homotopy_pullback_dt_part(w: PolyForm, x: np.ndarray):
    """Coefficients of ``dt ^ dx_J`` in ``H^* w`` at (t_k, x) for all Gauss nodes.

    ``H(t, x)_i = x_i + t (lam(x_i) - x_i)``, so ``dH_i = (lam(x_i) - x_i) dt
    + (1 + t (lam'(x_i) - 1)) dx_i``.  Returns ``{J: array over nodes}``.
    """
    n = w.n
    lam = np.array([_lambda01(xi) for xi in x])
    dlam = np.array([_lambda01_prime(xi) for xi in x])
    T = GL_T[:, None]
    H = x[None, :] + T * (lam - x)[None, :]
    vel = (lam - x)
    scale = 1.0 + T * (dlam - 1.0)[None, :]
    vals = _eval_coeffs(w, H)
    out: dict = {}
    for I, a in vals.items():
        # dH_I = sum over which slot carries dt
        for pos, i in enumerate(I):
            rest = I[:pos] + I[pos + 1:]
            sgn = -1 if pos % 2 else 1
            coef = a * sgn * vel[i - 1]
            for j in rest:
                coef = coef * scale[:, j - 1]
            out[rest] = out.get(rest, 0) + coef
    return out


def _D_value(w: PolyForm, x: np.ndarray) -> dict:
    """``D w`` at x: Gauss-Legendre quadrature of the dt-part over t."""
    parts = _homotopy_pullback_dt_part(w, x)
    return {J: complex(np.dot(GL_W, v)) if np.iscomplexobj(v) else float(np.dot(GL_W, v))
            for J, v in parts.items()}


def _d_of_D(w: PolyForm, x: np.ndarray, h: float = 1e-20) -> dict:
    """Exterior derivative of ``D w`` at x by complex-step differentiation."""
    n = w.n
    out: dict = {}
    for i in range(1, n + 1):
        xc = x.astype(complex)
        xc[i - 1] += 1j * h
        vals = _D_value(w, xc)
        for J, v in vals.items():
            if i in J:
                continue
            deriv = np.imag(v) / h
            pos = sum(1 for j in J if j < i)
            key = tuple(sorted(J + (i,)))
            out[key] = out.get(key, 0.0) + (-1) ** pos * deriv
    return out


def _pullback_lambda(w: PolyForm, x: np.ndarray) -> dict:
    """``((lam^n)^* w)(x)``."""
    lam = np.array([_lambda01(xi) for xi in x])
    dlam = np.array([_lambda01_prime(xi) for xi in x])
    vals = _eval_coeffs(w, lam[None, :])
    out = {}
    for I, a in vals.items():
        c = float(a[0])
        for i in I:
            c *= dlam[i - 1]
        out[I] = c
    return out


def _in1_pullback(w: PolyForm, x: np.ndarray) -> dict:
    """``in_1^* H^* w`` at x, computed from the homotopy (independent of ``_pullback_lambda``)."""
    lam = np.array([_lambda01(xi) for xi in x])
    dlam = np.array([_lambda01_prime(xi) for xi in x])
    H = x + 1.0 * (lam - x)
    scale = 1.0 + 1.0 * (dlam - 1.0)
    vals = _eval_coeffs(w, H[None, :])
    out = {}
    for I, a in vals.items():
        c = float(a[0])
        for i in I:
            c *= scale[i - 1]
        out[I] = c
    return out


@dataclass
class ExcisionReport:
    residual: float
    reparam_residual: float
    samples: int


def excision_homotopy_check(forms: Sequence[PolyForm], points_per_form: int = 8,
                            seed: int = 1) -> ExcisionReport:
    """Check ``d D w + D d w = (lam^n)^* w - w`` numerically.

    ``forms`` are forms on plots (already pulled back to their cubes).  The
    homotopy is ``H(t, x) = x + t (lam(x) - x)`` coordinatewise; the fiber
    integral uses 64-point Gauss-Legendre quadrature, which is exact in t
    because the integrand is polynomial in t.
    """
    from .rng import XorShift64
    rng = XorShift64(seed)
    worst = 0.0
    worst_re = 0.0
    count = 0
    for w in forms:
        dw = exterior_derivative(w)
        for _ in range(points_per_form):
            x = np.array([rng.random() for _ in range(w.n)])
            lhs = _d_of_D(w, x)
            if dw.p <= dw.n:
                for J, v in _D_value(dw, x).items():
                    lhs[J] = lhs.get(J, 0.0) + v
            tilde = _pullback_lambda(w, x)
            direct = {k: float(a.eval_array(x[None, :])[0]) for k, a in w.coeffs.items()}
            keys = set(lhs) | set(tilde) | set(direct)
            for J in keys:
                r = abs(lhs.get(J, 0.0) - (tilde.get(J, 0.0) - direct.get(J, 0.0)))
                worst = max(worst, r)
            in1 = _in1_pullback(w, x)
            for J in set(in1) | set(tilde):
                worst_re = max(worst_re, abs(in1.get(J, 0.0) - tilde.get(J, 0.0)))
            count += 1
    return ExcisionReport(worst, worst_re, count)
