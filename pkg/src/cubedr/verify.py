"""Seeded property suites used by ``cubedr verify`` and the acceptance tests."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from . import cohomology as coh
from . import cubicalset as cs
from . import hurewicz as hw
from . import io
from . import pou
from .cube_cat import check_relations
from .polyform import (PolyForm, PolyMap, check_naturality, exterior_derivative, homotopy_identity_residual,
                       pullback, random_form, random_map, random_polynomial, wedge)
from .polynomial import Polynomial
from .rng import XorShift64

SUITES = ("forms", "homotopy", "cubes", "relations", "cohomology", "pou", "hurewicz", "excision", "split")
ALIASES = {"all": SUITES}


def data_path(name: str) -> Path:
    return Path(str(resources.files("cubedr") / "data" / name))


def read_data(name: str) -> str:
    return data_path(name).read_text(encoding="utf-8")


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


@dataclass
class SuiteResult:
    suite: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]}


# forms ----------------------------------------------------------------------------------------

def suite_forms(seed: int = 1, cases: int = 200, max_n: int = 4) -> SuiteResult:
    """d d = 0, pullback functoriality, naturality of d, graded commutativity (exact)."""
    res = SuiteResult("forms")
    rng = XorShift64(seed)
    bad = {"dd": 0, "functorial": 0, "natural": 0, "graded": 0}
    for _ in range(cases):
        n = rng.randint(1, max_n)
        p = rng.randint(0, n)
        w = random_form(rng, n, p, max_degree=3)
        if not exterior_derivative(exterior_derivative(w)).is_zero():
            bad["dd"] += 1
        m = rng.randint(1, max_n)
        k = rng.randint(1, max_n)
        f = random_map(rng, m, n, max_degree=2)
        g = random_map(rng, k, m, max_degree=1)
        w2 = random_form(rng, n, min(p, m, k), max_degree=2, max_terms=2)
        if pullback(g.then(f), w2) != pullback(g, pullback(f, w2)):
            bad["functorial"] += 1
        if not check_naturality(f, random_form(rng, n, min(p, m), max_degree=2, max_terms=2)):
            bad["natural"] += 1
        q = rng.randint(0, n - p)
        v = random_form(rng, n, q, max_degree=3)
        if wedge(w, v) != wedge(v, w).scale((-1) ** (p * q)):
            bad["graded"] += 1
    for key, label in (("dd", "d d = 0"), ("functorial", "(f g)^* = g^* f^*"),
                       ("natural", "f^* d = d f^*"), ("graded", "a ^ b = (-1)^pq b ^ a")):
        res.add(f"{label} on {cases} cases", bad[key] == 0, f"failures {bad[key]}")
    return res


def suite_homotopy(seed: int = 1, cases: int = 100, max_n: int = 3) -> SuiteResult:
    """d D + D d = in_1^* - in_0^* on random polynomial homotopies (exact)."""
    res = SuiteResult("homotopy")
    rng = XorShift64(seed ^ 0x5EED)
    bad = 0
    for _ in range(cases):
        n = rng.randint(0, max_n - 1)
        m = rng.randint(1, max_n)
        F = random_map(rng, n + 1, m, max_degree=2)
        w = random_form(rng, m, rng.randint(0, min(m, n + 1)), max_degree=2, max_terms=2)
        if not homotopy_identity_residual(F, w).is_zero():
            bad += 1
    res.add(f"d D + D d = in_1^* - in_0^* on {cases} homotopies", bad == 0, f"failures {bad}")
    return res


# cubes ------------------------------------------------------------------------------------------

SHIPPED_PAIRS = (
    ("interval", "identity1", "segment_halves"),
    ("square", "identity2", "square_sides"),
    ("square", "squash", "square_sides45"),
    ("square", "average", "segment_halves"),
    ("cube", "identity3", "cube_sides"),
)


def load_pair(model: str, plot: str, cover: str):
    K = io.parse_complex(read_data(f"{model}.model"))
    P = io.parse_plots(read_data(f"{plot}.plot"))[0]
    U = list(io.parse_cover(read_data(f"{cover}.cover")).values())
    return cs.SubdivPair(K, P), U


def trivial_cover(pair: cs.SubdivPair) -> list:
    m = pair.plot.n
    return [cs.CoverSet("X", [cs.Ball((0,) * m, Fraction(10 ** 6))])]


def suite_cubes(seed: int = 1, cases: int = 0) -> SuiteResult:
    """Sd fixes subordinate pairs, terminates on shipped covers, diameter ratio,
    Td slices, audits."""
    res = SuiteResult("cubes")
    for model, plot, cover in SHIPPED_PAIRS:
        pair, U = load_pair(model, plot, cover)
        tag = f"{model}/{plot}/{cover}"
        T = trivial_cover(pair)
        fixed = cs.subdivide_sd(pair, T).complex.cells == pair.complex.cells
        res.add(f"Sd fixes subordinate pair {tag}", fixed)
        try:
            _, r = cs.sd_iterate_until_subordinate(pair, U, max_iters=10)
            res.add(f"sd_iterate terminates on {tag}", r <= 6, f"r={r}")
        except cs.SubdivisionError as exc:
            res.add(f"sd_iterate terminates on {tag}", False, str(exc))
            continue
        before = cs.mesh_metrics(pair, U).diameter
        after = cs.mesh_metrics(cs.subdivide_sd(pair, U), U).diameter
        n = pair.n
        bound = n / (n + 1)
        ratio = 0.0 if before == 0 else after / before
        res.add(f"diameter ratio on {tag}", ratio <= bound + 1e-9,
                f"d {before:.6g} -> {after:.6g}, ratio {ratio:.6g}, bound {bound:.6g}")
    for n in (1, 2, 3):
        K = cs.CubicalComplex.standard_cube(n)
        pair = cs.SubdivPair(K, PolyMap.identity(n))
        far = [cs.CoverSet("none", [cs.Ball((10 ** 6,) * n, Fraction(1))])]
        sd = cs.subdivide_sd(pair, far)
        td = cs.prism_td(pair, far)
        low = cs.slice_cells(td.complex, 0) == set(K.cells)
        high = cs.slice_cells(td.complex, 1) == set(sd.complex.cells)
        res.add(f"Td slices equal K and Sd K, n={n}", low and high)
        a1 = cs.audit(sd.complex, carrier_volume=1)
        a2 = cs.audit(td.complex, carrier_volume=1)
        res.add(f"Sd/Td complexes pass the audit, n={n}", a1.ok and a2.ok,
                f"f-vectors {sd.complex.f_vector()} / {td.complex.f_vector()}")
    return res


def suite_relations(seed: int = 1, cases: int = 0, max_dim: int = 5) -> SuiteResult:
    res = SuiteResult("relations")
    rep = check_relations(max_dim)
    res.add(f"cube-category relations through dimension {max_dim}", rep.ok,
            f"instances {rep.total}, violations {len(rep.violations)}")
    return res


# cohomology ---------------------------------------------------------------------------------------

EXPECTED_BETTI = {
    "point": [1], "interval": [1, 0], "circle": [1, 1], "circle4": [1, 1], "sphere": [1, 0, 1],
    "sphere_box": [1, 0, 1], "torus": [1, 2, 1], "torus2": [1, 2, 1], "rp2": [1, 0, 0], "wedge": [1, 2],
}

MV_CASES = (("circle4", "circle4_arcs"), ("sphere_box", "sphere_box_caps"),
            ("torus2", "torus2_cylinders"), ("circle4", "circle4_whole"))


def load_model(name: str) -> coh.CellComplexModel:
    return io.parse_model(read_data(f"{name}.model"), name=name)


def suite_cohomology(seed: int = 1, cases: int = 0) -> SuiteResult:
    res = SuiteResult("cohomology")
    for name, want in EXPECTED_BETTI.items():
        M = load_model(name)
        got = coh.model_betti(M)
        res.add(f"betti({name})", got == want, f"{got}")
        sub = coh.model_betti(coh.subdivide_model(M))
        res.add(f"betti({name}) after subdivision", sub == want, f"{sub}")
    for model, cover in MV_CASES:
        M = load_model(model)
        U = io.parse_cover(read_data(f"{cover}.cover"))
        T = coh.mayer_vietoris(M, U["A"], U["B"])
        res.add(f"Mayer-Vietoris {model}/{cover}", T.exact and T.agrees,
                f"assembled {T.assembled}, direct {T.direct}")
    return res


# partitions of unity ------------------------------------------------------------------------------

POU_CASES = (("segment_halves", "segment_family"), ("square_sides", "square_family"))


def ball_cover(cover: dict) -> pou.BallCover:
    sets = []
    for key in ("A", "B"):
        if key not in cover:
            raise coh.UnsupportedCoverError(f"cover set {key} is missing")
        balls = []
        for pc in cover[key].pieces:
            if not isinstance(pc, cs.Ball):
                raise coh.UnsupportedCoverError("partitions of unity need ball covers")
            balls.append((pc.center, pc.radius))
        sets.append(balls)
    return pou.BallCover(*sets)


def suite_pou(seed: int = 1, cases: int = 0, grid_denominator: int = 64, tol: float = 1e-12) -> SuiteResult:
    res = SuiteResult("pou")
    worst = 0.0
    for cover, family in POU_CASES:
        C = ball_cover(io.parse_cover(read_data(f"{cover}.cover")))
        plots = io.parse_plots(read_data(f"{family}.plot"))
        built = pou.build_pou(C, plots)
        rep = pou.check_pou(built, grid_denominator)
        worst = max(worst, rep.max_sum_deviation)
        tag = f"{family}/{cover}"
        res.add(f"sum rho^A + rho^B = 1 on {tag}", rep.max_sum_deviation < tol,
                f"max-sum-deviation {rep.max_sum_deviation:.3g}")
        res.add(f"support containment on {tag}", rep.support_violations == 0,
                f"violations {rep.support_violations}")
        res.add(f"degeneracy/face compatibility on {tag}",
                rep.degeneracy_residual < tol and rep.face_residual < tol,
                f"residuals {rep.degeneracy_residual:.3g} / {rep.face_residual:.3g}")
        res.add(f"collar constancy on {tag}", rep.collar_residual < tol,
                f"residual {rep.collar_residual:.3g}")
    res.add("max-sum-deviation over all families", worst < tol, f"{worst:.3g}")
    return res


def split_case():
    C = ball_cover(io.parse_cover(read_data("circle_arcs.cover")))
    builder = pou.PoUBuilder(C)
    pp = builder.get(PolyMap.identity(1))
    kappa = PolyForm.dx(1, 1)
    return kappa, pp


def suite_split(seed: int = 1, cases: int = 0, tol: float = 1e-10) -> SuiteResult:
    res = SuiteResult("split")
    kappa, pp = split_case()
    rep = pou.check_mv_split(kappa, pp, samples=256)
    res.add("Mayer-Vietoris splitting of the circle generator", rep.reconstruction_error < tol
            and rep.support_violations == 0,
            f"reconstruction error {rep.reconstruction_error:.3g} at {rep.samples} points, "
            f"support violations {rep.support_violations}")
    return res


# Hurewicz ---------------------------------------------------------------------------------------

def load_form(name: str):
    deg, pieces, header = io.parse_form(read_data(name))
    M = load_model(Path(header["model"]).stem)
    return M, coh.cellwise_from_ambient(M, pieces, deg)


def load_path(M, name: str) -> hw.PathPlot:
    return hw.PathPlot(io.parse_path(read_data(name)), M)


GENERATORS = {
    "circle": (["circle.form"], ["circle.path"]),
    "torus": (["torus_a.form", "torus_b.form"], ["torus_a.path", "torus_b.path"]),
    "wedge": (["wedge_a.form", "wedge_b.form"], ["wedge_a.path", "wedge_b.path"]),
}


def random_closed_form(rng, n: int) -> PolyForm:
    return exterior_derivative(PolyForm.function(random_polynomial(rng, n, 4, 5)))


def suite_hurewicz(seed: int = 1, cases: int = 50) -> SuiteResult:
    res = SuiteResult("hurewicz")
    M, w = load_form("circle.form")
    loop = load_path(M, "circle.path")
    res.add("circle generator pairs to 1", hw.integrate_1form(w, loop) == 1,
            f"{hw.integrate_1form(w, loop)}")
    M, e = load_form("circle_exact.form")
    rep = hw.exactness_defect(M, e, [loop])
    res.add("exact form on the circle: loop integral 0, primitive recovered",
            rep.integrals == [0] and rep.verified)
    M, e = load_form("interval_square.form")
    val = hw.integrate_1form(e, load_path(M, "interval.path"))
    res.add("d(x^2) along the segment gives 1", val == 1, f"{val}")
    for name, (forms, loops) in GENERATORS.items():
        Mx = load_model(name)
        ws = [load_form(f)[1] for f in forms]
        ls = [load_path(Mx, p) for p in loops]
        r = hw.pairing_rank(ws, ls)
        b1 = coh.model_betti(Mx)[1]
        res.add(f"pairing rank = b1 on {name}", r == b1, f"rank {r}, b1 {b1}")
        zero = all(hw.integrate_1form(ex, lp) == 0
                   for ex in [_exact_on(Mx)] for lp in ls)
        res.add(f"exact form has zero loop integrals on {name}", zero)
    rng = XorShift64(seed ^ 0x6EE4)
    worst = Fraction(0)
    for _ in range(cases):
        n = rng.randint(1, 3)
        w = random_closed_form(rng, n)
        H = random_map(rng, 2, n, max_degree=2)
        worst = max(worst, abs(hw.green_check(w, H)))
    res.add(f"green_check = 0 on {cases} random closed forms", worst == 0, f"max |residual| {worst}")
    return res


def _exact_on(M: coh.CellComplexModel):
    """d of a compatible cellwise function that vanishes at every vertex."""
    n = M.complex.ambient_dim
    out = {c: exterior_derivative(PolyForm.function(_localize_cell(c, n)))
           for c in M.complex.maximal_cells(M.complex.cells)}
    return coh.cellwise_from_ambient(M, out, 1)


def _localize_cell(c, n):
    """``sum_i (x_i - a_i)(b_i - x_i)`` over the free axes of the lattice cell."""
    xs = [Polynomial.var(n, i) for i in range(n)]
    g = Polynomial.const(n, 0)
    for i, (a, b) in enumerate(c.intervals):
        if b > a:
            g = g + (xs[i] - a) * (Polynomial.const(n, b) - xs[i])
    return g


# excision ----------------------------------------------------------------------------------------

def suite_excision(seed: int = 1, cases: int = 20, tol: float = 1e-8) -> SuiteResult:
    """Numeric check of the excision homotopy identity on sampled plots and forms."""
    res = SuiteResult("excision")
    rng = XorShift64(seed ^ 0xE8C1)
    forms = []
    for _ in range(cases):
        n = rng.randint(1, 3)
        m = rng.randint(1, 3)
        P = random_map(rng, n, m, max_degree=2)
        w = random_form(rng, m, rng.randint(0, min(m, n)), max_degree=2, max_terms=3)
        forms.append(pullback(P, w))
    rep = coh.excision_homotopy_check(forms, points_per_form=8, seed=seed)
    res.add(f"d D + D d = w~ - w on {cases} plots/forms", rep.residual < tol,
            f"max residual {rep.residual:.3g} at {rep.samples} points, 64 Gauss nodes")
    res.add("w~ equals (lambda^n)^* w", rep.reparam_residual < tol, f"max residual {rep.reparam_residual:.3g}")
    return res


RUNNERS = {
    "forms": suite_forms, "homotopy": suite_homotopy, "cubes": suite_cubes,
    "relations": suite_relations, "cohomology": suite_cohomology, "pou": suite_pou,
    "hurewicz": suite_hurewicz, "excision": suite_excision, "split": suite_split,
}


def run_suite(name: str, seed: int = 1, cases: int | None = None, **kw) -> list:
    names = ALIASES.get(name, (name,))
    out = []
    for nm in names:
        if nm not in RUNNERS:
            raise KeyError(nm)
        t = time.time()
        args = {"seed": seed}
        if cases is not None and nm in ("forms", "homotopy", "hurewicz", "excision"):
            args["cases"] = cases
        args.update({k: v for k, v in kw.items() if k in RUNNERS[nm].__code__.co_varnames})
        r = RUNNERS[nm](**args)
        r.seconds = time.time() - t
        out.append(r)
    return out
