"""Sparse multivariate polynomials with rational coefficients."""
from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np


class PolynomialParseError(ValueError):
    pass


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        return Fraction(c).limit_denominator() if c != int(c) else Fraction(int(c))
    return Fraction(c)


class Polynomial:
    """Polynomial in ``n`` variables stored as ``{exponent tuple: Fraction}``.

    Zero coefficients are never stored.  Instances are treated as immutable.
    """

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: Mapping | None = None):
        self.n = n
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for {n} variables")
                c = _frac(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n, terms):
        p = cls.__new__(cls)
        p.n = n
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, n: int) -> "Polynomial":
        return cls._raw(n, {})

    @classmethod
    def const(cls, n: int, c) -> "Polynomial":
        c = _frac(c)
        return cls._raw(n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, n: int, i: int) -> "Polynomial":
        """The coordinate function x_{i+1} (``i`` is 0-based)."""
        if not 0 <= i < n:
            raise ValueError(f"variable index {i} out of range for {n} variables")
        e = [0] * n
        e[i] = 1
        return cls._raw(n, {tuple(e): Fraction(1)})

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise ValueError(f"variable counts differ: {self.n} vs {other.n}")
            return other
        return Polynomial.const(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _frac(other)
            if not c:
                return Polynomial.zero(self.n)
            return Polynomial._raw(self.n, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self.n, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = Polynomial.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(0,) * self.n: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.n, Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    # calculus -------------------------------------------------------------
    def diff(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return Polynomial._raw(self.n, out)

    def depends_on(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def integrate_unit(self, i: int) -> "Polynomial":
        """Integrate over x_{i+1} in [0, 1]; the result keeps ``n`` variables
        with exponent 0 in slot ``i``."""
        out: dict = {}
        for e, c in self.terms.items():
            e2 = e[:i] + (0,) + e[i + 1:]
            out[e2] = out.get(e2, 0) + c / (e[i] + 1)
        return Polynomial._raw(self.n, {e: c for e, c in out.items() if c})

    def drop_var(self, i: int) -> "Polynomial":
        """Remove variable ``i``; the polynomial must not depend on it."""
        if self.depends_on(i):
            raise ValueError(f"polynomial depends on variable {i}")
        return Polynomial._raw(self.n - 1, {e[:i] + e[i + 1:]: c for e, c in self.terms.items()})

    def insert_var(self, i: int) -> "Polynomial":
        """Add a new variable at slot ``i`` that the polynomial ignores."""
        return Polynomial._raw(self.n + 1, {e[:i] + (0,) + e[i:]: c for e, c in self.terms.items()})

    def substitute(self, i: int, value) -> "Polynomial":
        """Fix x_{i+1} = value and drop the variable."""
        value = _frac(value)
        out: dict = {}
        for e, c in self.terms.items():
            e2 = e[:i] + e[i + 1:]
            out[e2] = out.get(e2, 0) + c * value ** e[i]
        return Polynomial._raw(self.n - 1, {e: c for e, c in out.items() if c})

    def integrate_all_unit(self) -> Fraction:
        """Integral over the unit cube."""
        total = Fraction(0)
        for e, c in self.terms.items():
            d = 1
            for k in e:
                d *= k + 1
            total += c / d
        return total

    def compose(self, subs: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``subs[i]`` for x_{i+1}; all ``subs`` share a variable count."""
        if len(subs) != self.n:
            raise ValueError(f"need {self.n} substitutions, got {len(subs)}")
        if self.n == 0:
            m = 0
        else:
            m = subs[0].n
        if not self.terms:
            return Polynomial.zero(m)
        powers: list[list] = [[Polynomial.const(m, 1)] for _ in subs]

        def pw(i, k):
            row = powers[i]
            while len(row) <= k:
                row.append(row[-1] * subs[i])
            return row[k]

        out = Polynomial.zero(m)
        for e, c in self.terms.items():
            term = Polynomial.const(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    # evaluation -----------------------------------------------------------
    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (tuple, list)):
            point = tuple(point[0])
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.n}")
        pt = [_frac(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def eval_array(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized float (or complex) evaluation; ``pts`` has shape (N, n)."""
        pts = np.asarray(pts)
        if pts.ndim == 1:
            pts = pts[None, :]
        out = np.zeros(pts.shape[0], dtype=np.result_type(pts.dtype, float))
        for e, c in self.terms.items():
            v = np.full(pts.shape[0], float(c), dtype=out.dtype)
            for i, k in enumerate(e):
                if k:
                    v = v * pts[:, i] ** k
            out = out + v
        return out

    def abs_coeff_sum(self) -> Fraction:
        return sum((abs(c) for c in self.terms.values()), Fraction(0))

    # display --------------------------------------------------------------
    def to_string(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.n)]
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self.to_string()})"

    __str__ = to_string


# parsing ------------------------------------------------------------------

_ALLOWED_NAME = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    """Parse ``text`` using ``+ - * ^`` (or ``**``), parentheses and rationals ``a/b``."""
    n = len(names)
    index = {nm: i for i, nm in enumerate(names)}
    src = text.strip().replace("^", "**")
    if not src:
        raise PolynomialParseError("empty polynomial")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise PolynomialParseError(f"cannot parse {text!r}: {exc.msg}") from None

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                raise PolynomialParseError(f"bad literal {node.value!r}")
            return Polynomial.const(n, Fraction(str(node.value)))
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise PolynomialParseError(f"unknown variable {node.id!r}")
            return Polynomial.var(n, index[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                base = walk(node.left)
                ex = walk(node.right)
                if not ex.is_constant() or ex.constant_value().denominator != 1 \
                        or ex.constant_value() < 0:
                    raise PolynomialParseError("exponents must be non-negative integers")
                return base ** int(ex.constant_value())
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or right.is_zero():
                    raise PolynomialParseError("division only by non-zero constants")
                return left * (1 / right.constant_value())
        raise PolynomialParseError(f"unsupported syntax in {text!r}")

    return walk(tree)


def coordinate_names(n: int, prefix: str = "x") -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def bernstein_bounds(p: Polynomial) -> tuple[Fraction, Fraction]:
    """Certified range enclosure of ``p`` over the unit cube.

    The minimum and maximum Bernstein coefficients (degree elevated to the
    per-variable degrees) bound the polynomial on ``[0,1]^n`` exactly.
    """
    from math import comb
    import itertools

    if not p.terms:
        return Fraction(0), Fraction(0)
    if p.n == 0:
        c = p.constant_value()
        return c, c
    degs = [max(p.degree_in(i), 0) for i in range(p.n)]
    coeffs = {}
    for j in itertools.product(*(range(dg + 1) for dg in degs)):
        total = Fraction(0)
        for e, c in p.terms.items():
            w = c
            for ji, ki, di in zip(j, e, degs):
                if ki > ji:
                    w = 0
                    break
                w = w * Fraction(comb(ji, ki), comb(di, ki))
            if w:
                total += w
        coeffs[j] = total
    vals = coeffs.values()
    return min(vals), max(vals)


def certify_below(p: Polynomial, bound, depth: int = 6) -> bool:
    """True only if ``p < bound`` everywhere on the unit cube is certified.

    Bernstein bounds are refined by bisecting the cube; ``False`` means
    either a violation or that the certificate was not found within
    ``depth`` halvings.
    """
    bound = _frac(bound)
    lo, hi = bernstein_bounds(p)
    if hi < bound:
        return True
    if depth <= 0 or p.n == 0:
        return False
    corner = p.evaluate([Fraction(0)] * p.n)
    if corner >= bound:
        return False
    i = max(range(p.n), key=lambda k: p.degree_in(k))
    if p.degree_in(i) <= 0:
        return False
    half = Fraction(1, 2)
    for shift in (0, half):
        subs = [Polynomial.var(p.n, k) for k in range(p.n)]
        subs[i] = Polynomial.var(p.n, i) * half + shift
        if not certify_below(p.compose(subs), bound, depth - 1):
            return False
    return True
