"""Differential forms on cubes with polynomial coefficients.

A p-form on the n-cube is ``sum_I a_I dx_I`` over strictly increasing index
tuples ``I`` (1-based), each ``a_I`` a :class:`Polynomial` in n variables.
All operators are exact over the rationals.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .exterior import MultiIndex, basis, merge_sign
from .polynomial import Polynomial


class FormError(ValueError):
    pass


def _key(k) -> tuple:
    if isinstance(k, MultiIndex):
        return k.indices
    return tuple(k)


class PolyForm:
    __slots__ = ("n", "p", "coeffs")

    def __init__(self, n: int, p: int, coeffs: Mapping | None = None):
        self.n = n
        self.p = p
        clean = {}
        for k, a in (coeffs or {}).items():
            k = _key(k)
            MultiIndex(n, k)
            if len(k) != p:
                raise FormError(f"index {k} has degree {len(k)}, expected {p}")
            if not isinstance(a, Polynomial):
                a = Polynomial.const(n, a)
            if a.n != n:
                raise FormError(f"coefficient has {a.n} variables, expected {n}")
            if a:
                clean[k] = clean[k] + a if k in clean else a
                if not clean[k]:
                    del clean[k]
        self.coeffs = clean

    @classmethod
    def zero(cls, n: int, p: int) -> "PolyForm":
        return cls(n, p)

    @classmethod
    def function(cls, f: Polynomial) -> "PolyForm":
        return cls(f.n, 0, {(): f})

    @classmethod
    def dx(cls, n: int, *idx: int) -> "PolyForm":
        """The constant basis form ``dx_{i1} ^ ... ^ dx_{ip}`` (any order)."""
        s = 1
        lst = list(idx)
        if len(set(lst)) != len(lst):
            return cls(n, len(lst))
        for a in range(len(lst)):
            for b in range(a + 1, len(lst)):
                if lst[a] > lst[b]:
                    s = -s
        return cls(n, len(lst), {tuple(sorted(lst)): Polynomial.const(n, s)})

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check(other)
        out = dict(self.coeffs)
        for k, a in other.coeffs.items():
            out[k] = out[k] + a if k in out else a
        return PolyForm(self.n, self.p, out)

    def __neg__(self):
        return PolyForm(self.n, self.p, {k: -a for k, a in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "PolyForm":
        """Multiply by a scalar or a polynomial function."""
        return PolyForm(self.n, self.p, {k: a * f for k, a in self.coeffs.items()})

    def __mul__(self, f):
        if isinstance(f, PolyForm):
            return wedge(self, f)
        return self.scale(f)

    __rmul__ = scale

    def __xor__(self, other):
        return wedge(self, other)

    def _check(self, other):
        if not isinstance(other, PolyForm):
            raise TypeError("expected a PolyForm")
        if (self.n, self.p) != (other.n, other.p):
            raise FormError(f"forms differ in shape: ({self.n},{self.p}) vs ({other.n},{other.p})")

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.n, self.p, self.coeffs) == (other.n, other.p, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.p, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, idx) -> Polynomial:
        return self.coeffs.get(_key(idx), Polynomial.zero(self.n))

    def max_degree(self) -> int:
        return max((a.degree() for a in self.coeffs.values()), default=-1)

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            a = self.coeffs[k].to_string(names)
            tag = "^".join(f"dx{i}" for i in k)
            parts.append(f"({a})" + (f" {tag}" if tag else ""))
        return " + ".join(parts)

    def __repr__(self):
        return f"PolyForm(n={self.n}, p={self.p}: {self.to_string()})"


class PolyMap:
    """Polynomial map from the m-cube (or R^m) to R^n."""

    __slots__ = ("m", "n", "components", "_jac", "_hash")

    def __init__(self, m: int, components: Sequence[Polynomial]):
        comps = []
        for c in components:
            if not isinstance(c, Polynomial):
                c = Polynomial.const(m, c)
            if c.n != m:
                raise ValueError(f"component has {c.n} variables, expected {m}")
            comps.append(c)
        self.m = m
        self.n = len(comps)
        self.components = tuple(comps)
        self._jac = None
        self._hash = None

    @classmethod
    def identity(cls, n: int) -> "PolyMap":
        return cls(n, [Polynomial.var(n, i) for i in range(n)])

    @classmethod
    def constant(cls, m: int, point: Sequence) -> "PolyMap":
        return cls(m, [Polynomial.const(m, c) for c in point])

    @classmethod
    def affine(cls, matrix: Sequence[Sequence], offset: Sequence) -> "PolyMap":
        """``x -> A x + b`` with ``A`` of shape (n, m)."""
        m = len(matrix[0]) if matrix else 0
        comps = []
        for row, b in zip(matrix, offset):
            c = Polynomial.const(m, b)
            for j, a in enumerate(row):
                if a:
                    c = c + Polynomial.var(m, j) * Fraction(a)
            comps.append(c)
        if not matrix:
            return cls(0, [Polynomial.const(0, b) for b in offset])
        return cls(m, comps)

    @classmethod
    def slice_inclusion(cls, n: int, eps, axis: int = 1) -> "PolyMap":
        """``x -> (x_1..x_{axis-1}, eps, x_axis..x_n)`` from the n-cube."""
        comps = [Polynomial.var(n, i) for i in range(n)]
        comps.insert(axis - 1, Polynomial.const(n, eps))
        return cls(n, comps)

    def __call__(self, point: Sequence) -> tuple:
        return tuple(c.evaluate(point) for c in self.components)

    def eval_array(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts)
        if pts.ndim == 1:
            pts = pts[None, :]
        if not self.components:
            return np.zeros((pts.shape[0], 0))
        return np.stack([c.eval_array(pts) for c in self.components], axis=1)

    def then(self, g: "PolyMap") -> "PolyMap":
        """The composite ``g o self``."""
        if g.m != self.n:
            raise ValueError(f"cannot compose: {self.n} outputs into {g.m} inputs")
        if g.m == 0:
            return PolyMap(self.m, [Polynomial.const(self.m, c.constant_value())
                                    for c in g.components])
        return PolyMap(self.m, [c.compose(self.components) for c in g.components])

    def jacobian(self):
        if self._jac is None:
            self._jac = tuple(tuple(c.diff(j) for j in range(self.m)) for c in self.components)
        return self._jac

    def differential(self, i: int) -> PolyForm:
        """``d f_i`` as a 1-form on the source (``i`` is 1-based)."""
        row = self.jacobian()[i - 1]
        return PolyForm(self.m, 1, {(j + 1,): row[j] for j in range(self.m) if row[j]})

    def is_affine(self) -> bool:
        return all(c.degree() <= 1 for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.m == other.m and self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.m, self.components))
        return self._hash

    def __repr__(self):
        names = [f"y{i + 1}" for i in range(self.m)]
        return "PolyMap(" + ", ".join(c.to_string(names) for c in self.components) + ")"


# operators -----------------------------------------------------------------

def exterior_derivative(w: PolyForm) -> PolyForm:
    out: dict = {}
    for k, a in w.coeffs.items():
        for i in range(1, w.n + 1):
            if i in k:
                continue
            da = a.diff(i - 1)
            if not da:
                continue
            s = merge_sign((i,), k)
            key = tuple(sorted(k + (i,)))
            term = da if s > 0 else -da
            out[key] = out[key] + term if key in out else term
    return PolyForm(w.n, w.p + 1, out)


d = exterior_derivative


def wedge(w: PolyForm, v: PolyForm) -> PolyForm:
    if w.n != v.n:
        raise FormError(f"ambient dimensions differ: {w.n} vs {v.n}")
    out: dict = {}
    for k1, a in w.coeffs.items():
        for k2, b in v.coeffs.items():
            s = merge_sign(k1, k2)
            if not s:
                continue
            key = tuple(sorted(k1 + k2))
            term = a * b if s > 0 else -(a * b)
            out[key] = out[key] + term if key in out else term
    return PolyForm(w.n, w.p + v.p, out)


def pullback(f: PolyMap, w: PolyForm) -> PolyForm:
    """``f^* w``: compose coefficients with ``f`` and wedge the differentials
    ``df_{i1} ^ ... ^ df_{ip}`` (expands to the Jacobian-minor formula)."""
    if w.n != f.n:
        raise FormError(f"form lives on dimension {w.n}, map targets {f.n}")
    m = f.m
    if w.p > m:
        return PolyForm(m, w.p)
    diffs: dict = {}
    prefix_cache: dict = {(): PolyForm(m, 0, {(): Polynomial.const(m, 1)})}

    def wedge_of(idx):
        if idx in prefix_cache:
            return prefix_cache[idx]
        head = wedge_of(idx[:-1])
        i = idx[-1]
        if i not in diffs:
            diffs[i] = f.differential(i)
        val = wedge(head, diffs[i])
        prefix_cache[idx] = val
        return val

    out = PolyForm(m, w.p)
    for k, a in w.coeffs.items():
        frame = wedge_of(k)
        if frame.is_zero():
            continue
        if m == 0 or f.n == 0:
            a2 = Polynomial.const(m, a.constant_value()) if f.n == 0 else a.compose(f.components)
        else:
            a2 = a.compose(f.components)
        out = out + frame.scale(a2)
    return out


def evaluate(w: PolyForm, x: Sequence) -> dict:
    if len(x) != w.n:
        raise FormError(f"point has {len(x)} coordinates, expected {w.n}")
    return {k: a.evaluate(x) for k, a in w.coeffs.items()}


def eval_array(w: PolyForm, pts: np.ndarray) -> dict:
    """Float evaluation at many points: ``{index: array}``."""
    return {k: a.eval_array(pts) for k, a in w.coeffs.items()}


def fiber_integrate(w: PolyForm, t_axis: int = 1) -> PolyForm:
    """Integrate out the ``dt`` part over t in [0, 1]; ``t`` is the first coordinate.

    ``w = dt ^ alpha + beta`` with ``alpha, beta`` free of ``dt`` maps to
    ``int_0^1 alpha dt`` on the remaining coordinates.
    """
    if t_axis != 1:
        raise FormError("the fiber coordinate must be the first one")
    if w.n < 1 or w.p < 1:
        return PolyForm(max(w.n - 1, 0), max(w.p - 1, 0))
    out = {}
    for k, a in w.coeffs.items():
        if k[0] != 1:
            continue
        rest = tuple(i - 1 for i in k[1:])
        out[rest] = a.integrate_unit(0).drop_var(0)
    return PolyForm(w.n - 1, w.p - 1, out)


def homotopy_operator(F: PolyMap, w: PolyForm) -> PolyForm:
    """``D w = int_I F^* w`` for a homotopy ``F`` on I x cube (time first)."""
    if F.m < 1:
        raise FormError("a homotopy needs a time coordinate")
    if w.n != F.n:
        raise FormError(f"form lives on dimension {w.n}, homotopy targets {F.n}")
    return fiber_integrate(pullback(F, w))


def homotopy_identity_residual(F: PolyMap, w: PolyForm) -> PolyForm:
    """``d D w + D d w - (in_1^* - in_0^*) F^* w``; zero for every polynomial homotopy."""
    n = F.m - 1
    lhs = homotopy_operator(F, exterior_derivative(w))
    if w.p > 0:
        # for functions the operator lands in degree -1, i.e. vanishes
        lhs = exterior_derivative(homotopy_operator(F, w)) + lhs
    Fw = pullback(F, w)
    rhs = pullback(PolyMap.slice_inclusion(n, 1), Fw) - pullback(PolyMap.slice_inclusion(n, 0), Fw)
    return lhs - rhs


def check_naturality(f: PolyMap, w: PolyForm) -> bool:
    return pullback(f, exterior_derivative(w)) == exterior_derivative(pullback(f, w))


def integrate_top(w: PolyForm) -> Fraction:
    """Integral of a top-degree form over the unit cube with its standard orientation."""
    if w.p != w.n:
        raise FormError(f"only top-degree forms integrate over the {w.n}-cube")
    return w.coefficient(tuple(range(1, w.n + 1))).integrate_all_unit() if w.n else \
        w.coefficient(()).constant_value()


# random generation for property suites ------------------------------------

def random_polynomial(rng, n: int, max_degree: int, max_terms: int = 4) -> Polynomial:
    """Nonzero polynomial with 1..max_terms terms of total degree <= max_degree."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        e = [0] * n
        for _ in range(rng.randint(0, max_degree)):
            if n:
                e[rng.randrange(n)] += 1
        terms[tuple(e)] = Fraction(rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]), rng.randint(1, 4))
    p = Polynomial(n, terms)
    return p if p else Polynomial.const(n, 1)


def random_form(rng, n: int, p: int, max_degree: int = 3, max_terms: int = 3) -> PolyForm:
    """Nonzero form; each basis coefficient is present with probability 2/3, at least one always."""
    idx = [mi.indices for mi in basis(n, p)]
    keep = [k for k in idx if rng.randrange(3)] or [rng.choice(idx)]
    return PolyForm(n, p, {k: random_polynomial(rng, n, max_degree, max_terms) for k in keep})


def random_map(rng, m: int, n: int, max_degree: int = 2, max_terms: int = 3) -> PolyMap:
    return PolyMap(m, [random_polynomial(rng, m, max_degree, max_terms) for _ in range(n)])


class CellwiseForm:
    """A family of forms indexed by cell id, each on its cell's parameter cube."""

    def __init__(self, p: int, forms: Mapping | None = None):
        self.p = p
        self.forms: dict = {}
        for cid, w in (forms or {}).items():
            self[cid] = w

    def __setitem__(self, cid, w: PolyForm):
        if w.p != self.p:
            raise FormError(f"form on {cid} has degree {w.p}, expected {self.p}")
        self.forms[cid] = w

    def __getitem__(self, cid) -> PolyForm:
        return self.forms[cid]

    def get(self, cid, n: int) -> PolyForm:
        return self.forms.get(cid) or PolyForm.zero(n, self.p)

    def __contains__(self, cid):
        return cid in self.forms

    def items(self):
        return self.forms.items()

    def __add__(self, other: "CellwiseForm") -> "CellwiseForm":
        out = dict(self.forms)
        for cid, w in other.forms.items():
            out[cid] = out[cid] + w if cid in out else w
        return CellwiseForm(self.p, out)

    def scale(self, c) -> "CellwiseForm":
        return CellwiseForm(self.p, {cid: w.scale(c) for cid, w in self.forms.items()})

    def d(self) -> "CellwiseForm":
        return CellwiseForm(self.p + 1, {cid: exterior_derivative(w) for cid, w in self.forms.items()})

    def is_zero(self) -> bool:
        return all(w.is_zero() for w in self.forms.values())
