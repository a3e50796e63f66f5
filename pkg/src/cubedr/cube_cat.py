"""The cube category: boundary maps, degeneracies and their relations.

Points of the cube are tuples of :class:`fractions.Fraction`; every map here
is evaluated exactly.  Indices are 1-based, as in the usual notation
``d^eps_i`` (insert ``eps`` at slot ``i``) and ``e_i`` (delete slot ``i``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .rng import XorShift64


_CONST = (Fraction(0), Fraction(1))


class CubeIndexError(ValueError):
    pass


def _as_point(t: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in t)


def apply_boundary(n: int, i: int, eps: int, t: Sequence) -> tuple[Fraction, ...]:
    """Insert ``eps`` at slot ``i`` of a point of the ``n``-cube."""
    if not 1 <= i <= n + 1:
        raise CubeIndexError(f"boundary index {i} out of range 1..{n + 1}")
    if eps not in (0, 1):
        raise CubeIndexError(f"boundary value must be 0 or 1, got {eps}")
    t = _as_point(t)
    if len(t) != n:
        raise CubeIndexError(f"point has {len(t)} coordinates, expected {n}")
    return t[: i - 1] + (Fraction(eps),) + t[i - 1 :]


def apply_degeneracy(n: int, i: int, t: Sequence) -> tuple[Fraction, ...]:
    """Delete slot ``i`` of a point of the ``(n+1)``-cube."""
    if not 1 <= i <= n + 1:
        raise CubeIndexError(f"degeneracy index {i} out of range 1..{n + 1}")
    t = _as_point(t)
    if len(t) != n + 1:
        raise CubeIndexError(f"point has {len(t)} coordinates, expected {n + 1}")
    return t[: i - 1] + t[i:]


@dataclass(frozen=True)
class Boundary:
    i: int
    eps: int

    def __str__(self):
        return f"d{self.eps}_{self.i}"


@dataclass(frozen=True)
class Degeneracy:
    i: int

    def __str__(self):
        return f"e_{self.i}"


Generator = Boundary | Degeneracy


@dataclass(frozen=True)
class CubeMorphism:
    """A morphism ``source_dim -> target_dim`` given by a word of generators.

    ``word`` lists generators in the order they are applied, so
    ``CubeMorphism(1, 3, (Boundary(1, 0), Boundary(1, 1)))`` is
    ``d1_1 o d0_1``.
    """

    source_dim: int
    target_dim: int
    word: tuple = field(default=())

    def __post_init__(self):
        dim = self.source_dim
        for g in self.word:
            if isinstance(g, Boundary):
                if not 1 <= g.i <= dim + 1:
                    raise CubeIndexError(f"{g} not defined on dimension {dim}")
                dim += 1
            elif isinstance(g, Degeneracy):
                if dim == 0 or not 1 <= g.i <= dim:
                    raise CubeIndexError(f"{g} not defined on dimension {dim}")
                dim -= 1
            else:
                raise TypeError(f"not a cube generator: {g!r}")
        if dim != self.target_dim:
            raise CubeIndexError(
                f"word ends in dimension {dim}, declared target {self.target_dim}")

    @classmethod
    def identity(cls, n: int) -> "CubeMorphism":
        return cls(n, n, ())

    @classmethod
    def from_word(cls, source_dim: int, word: Iterable[Generator]) -> "CubeMorphism":
        word = tuple(word)
        dim = source_dim
        for g in word:
            dim += 1 if isinstance(g, Boundary) else -1
        return cls(source_dim, dim, word)

    def __call__(self, t: Sequence) -> tuple[Fraction, ...]:
        t = _as_point(t)
        if len(t) != self.source_dim:
            raise CubeIndexError(f"point has {len(t)} coordinates, expected {self.source_dim}")
        return self._apply_unchecked(t)

    def _apply_unchecked(self, t: tuple) -> tuple:
        # the word was validated at construction
        for g in self.word:
            if type(g) is Boundary:
                t = t[: g.i - 1] + (_CONST[g.eps],) + t[g.i - 1 :]
            else:
                t = t[: g.i - 1] + t[g.i :]
        return t

    def then(self, other: "CubeMorphism") -> "CubeMorphism":
        """``other o self``."""
        if other.source_dim != self.target_dim:
            raise CubeIndexError("morphisms are not composable")
        return CubeMorphism(self.source_dim, other.target_dim, self.word + other.word)

    def normal_form(self) -> "CubeMorphism":
        """Rewrite with the cube relations until no rule applies.

        The result applies all degeneracies first (strictly decreasing
        indices) and then all boundaries (strictly increasing indices).
        Two words denote the same map iff their normal forms coincide.
        """
        word = list(self.word)
        changed = True
        while changed:
            changed = False
            for k in range(len(word) - 1):
                a, b = word[k], word[k + 1]
                repl = _rewrite(a, b)
                if repl is not None:
                    word[k : k + 2] = repl
                    changed = True
                    break
        return CubeMorphism(self.source_dim, self.target_dim, tuple(word))

    def describe(self) -> tuple:
        """Extensional description: per target slot, a source slot or a constant."""
        slots: list = [("x", k) for k in range(self.source_dim)]
        for g in self.word:
            if isinstance(g, Boundary):
                slots.insert(g.i - 1, ("c", g.eps))
            else:
                del slots[g.i - 1]
        return tuple(slots)

    def __str__(self):
        if not self.word:
            return f"id_{self.source_dim}"
        return " o ".join(str(g) for g in reversed(self.word))


def _rewrite(a: Generator, b: Generator):
    """One rewriting step for the adjacent pair "apply a, then b"."""
    if isinstance(a, Boundary) and isinstance(b, Degeneracy):
        i, j = a.i, b.i
        if i == j:
            return []
        if i > j:
            return [Degeneracy(j), Boundary(i - 1, a.eps)]
        return [Degeneracy(j - 1), Boundary(i, a.eps)]
    if isinstance(a, Degeneracy) and isinstance(b, Degeneracy):
        if a.i <= b.i:
            return [Degeneracy(b.i + 1), Degeneracy(a.i)]
        return None
    if isinstance(a, Boundary) and isinstance(b, Boundary):
        if a.i >= b.i:
            return [Boundary(b.i, b.eps), Boundary(a.i + 1, a.eps)]
        return None
    return None


def sample_points(dim: int, denominator: int = 8, limit: int = 729, seed: int = 1):
    """Deterministic rational sample of the ``dim``-cube.

    The full grid with the given denominator is used while it has at most
    ``limit`` points; above that a fixed pseudo-random subset of grid points
    is taken, always including one point with pairwise distinct coordinates.
    """
    grid = [Fraction(k, denominator) for k in range(denominator + 1)]
    if (denominator + 1) ** dim <= limit:
        return [tuple(p) for p in itertools.product(grid, repeat=dim)]
    rng = XorShift64(seed + 7919 * dim)
    pts = {tuple(Fraction(k + 1, denominator + dim + 1) for k in range(dim))}
    while len(pts) < limit:
        pts.add(tuple(grid[rng.randrange(denominator + 1)] for _ in range(dim)))
    return sorted(pts)


@dataclass
class RelationReport:
    max_dim: int
    counts: dict
    violations: list

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def ok(self) -> bool:
        return not self.violations


def relation_instances(max_dim: int):
    """Yield ``(label, lhs, rhs)`` for every relation instance within ``max_dim``."""
    D = lambda n, *gens: CubeMorphism.from_word(n, gens)
    # face of a face: d^e'_j o d^e_i : n -> n+2
    for n in range(0, max_dim - 1):
        for i in range(1, n + 2):
            for j in range(1, n + 3):
                for e, e2 in itertools.product((0, 1), repeat=2):
                    lhs = D(n, Boundary(i, e), Boundary(j, e2))
                    if i < j:
                        rhs = D(n, Boundary(j - 1, e2), Boundary(i, e))
                    else:
                        rhs = D(n, Boundary(j, e2), Boundary(i + 1, e))
                    yield "face-face", lhs, rhs
    # degeneracy of a degeneracy: e_j o e_i : n+2 -> n
    for n in range(0, max_dim - 1):
        for i in range(1, n + 3):
            for j in range(1, n + 2):
                lhs = D(n + 2, Degeneracy(i), Degeneracy(j))
                if i <= j:
                    rhs = D(n + 2, Degeneracy(j + 1), Degeneracy(i))
                else:
                    rhs = D(n + 2, Degeneracy(j), Degeneracy(i - 1))
                yield "degeneracy-degeneracy", lhs, rhs
    # face after a degeneracy: d^e'_j o e_i : n+1 -> n+1
    for n in range(0, max_dim):
        for i in range(1, n + 2):
            for j in range(1, n + 2):
                for e2 in (0, 1):
                    lhs = D(n + 1, Degeneracy(i), Boundary(j, e2))
                    if i >= j:
                        rhs = D(n + 1, Boundary(j, e2), Degeneracy(i + 1))
                    else:
                        rhs = D(n + 1, Boundary(j + 1, e2), Degeneracy(i))
                    yield "face-degeneracy", lhs, rhs
    # degeneracy after a face: e_j o d^e_i : n -> n
    for n in range(0, max_dim):
        for i in range(1, n + 2):
            for j in range(1, n + 2):
                for e in (0, 1):
                    lhs = D(n, Boundary(i, e), Degeneracy(j))
                    if i > j:
                        rhs = D(n, Degeneracy(j), Boundary(i - 1, e))
                    elif i < j:
                        rhs = D(n, Degeneracy(j - 1), Boundary(i, e))
                    else:
                        rhs = CubeMorphism.identity(n)
                    yield "degeneracy-face", lhs, rhs


def check_relations(max_dim: int, denominator: int = 8) -> RelationReport:
    """Verify the four families of face/degeneracy relations pointwise for all cubes of dimension <= max_dim."""
    if max_dim < 1:
        raise CubeIndexError("max_dim must be at least 1")
    counts = dict.fromkeys(("face-face", "degeneracy-degeneracy", "face-degeneracy", "degeneracy-face"), 0)
    violations = []
    samples: dict[int, list] = {}
    for label, lhs, rhs in relation_instances(max_dim):
        counts[label] += 1
        n = lhs.source_dim
        if n not in samples:
            samples[n] = sample_points(n, denominator)
        for t in samples[n]:
            if lhs._apply_unchecked(t) != rhs._apply_unchecked(t):
                violations.append((label, str(lhs), str(rhs), t))
                break
        if lhs.normal_form() != rhs.normal_form():
            violations.append((label, str(lhs), str(rhs), "normal form"))
    return RelationReport(max_dim, counts, violations)
