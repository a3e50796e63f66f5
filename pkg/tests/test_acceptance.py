"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
import sys
import time

import pytest

from cubedr import cohomology as coh
from cubedr import io, verify

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:
    ACCEPTANCE_LINES = {}

TITLES = {
    1: "operator identities (d d, functoriality, naturality, graded commutativity)",
    2: "homotopy formula d D + D d = in_1^* - in_0^*",
    3: "cube-category relations through dimension 5",
    4: "Betti numbers of point, S1, S2, T2, RP2, S1 v S1",
    5: "Mayer-Vietoris exactness and assembled Betti",
    6: "subdivision: fixing, termination, diameter ratio, Td slices",
    7: "partition of unity on shipped plot families",
    8: "Hurewicz pairing",
    9: "excision homotopy residual",
    10: "Mayer-Vietoris splitting",
}
LIMITS = {1: 30, 2: 30, 3: 10, 4: 10, 5: 10, 6: 60, 7: 60, 8: 30, 9: 60, 10: 10}


def _record(k, checks, seconds):
    ok = all(c.passed for c in checks) and seconds < LIMITS[k]
    failed = [c for c in checks if not c.passed]
    detail = "; ".join(f"{c.name}: {c.detail}" for c in failed) if failed else \
        "; ".join(c.detail for c in checks if c.detail)[:160]
    line = f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {TITLES[k]}  [{seconds:.2f}s < {LIMITS[k]}s]  {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    return ok, line


def _suite(name, **kw):
    t = time.time()
    res = verify.run_suite(name, seed=1, **kw)[0]
    return res.checks, time.time() - t


def criterion_1():
    return _suite("forms", cases=200)


def criterion_2():
    return _suite("homotopy", cases=100)


def criterion_3():
    return _suite("relations")


def criterion_4():
    t = time.time()
    res = verify.SuiteResult("betti")
    for name in ("point", "circle", "sphere", "torus", "rp2", "wedge"):
        got = coh.model_betti(verify.load_model(name))
        res.add(f"betti({name})", got == verify.EXPECTED_BETTI[name], f"{name} {got}")
    return res.checks, time.time() - t


def criterion_5():
    t = time.time()
    res = verify.SuiteResult("mv")
    for model, cover in (("circle4", "circle4_arcs"), ("sphere_box", "sphere_box_caps"),
                         ("torus2", "torus2_cylinders")):
        U = io.parse_cover(verify.read_data(f"{cover}.cover"))
        T = coh.mayer_vietoris(verify.load_model(model), U["A"], U["B"])
        res.add(f"{model}/{cover}", T.exact and T.agrees, f"{model} {T.assembled}")
    return res.checks, time.time() - t


def criterion_6():
    return _suite("cubes")


def criterion_7():
    return _suite("pou", grid_denominator=64, tol=1e-12)


def criterion_8():
    return _suite("hurewicz", cases=50)


def criterion_9():
    return _suite("excision", cases=20, tol=1e-8)


def criterion_10():
    return _suite("split", tol=1e-10)


RUN = {k: globals()[f"criterion_{k}"] for k in TITLES}


@pytest.mark.parametrize("k", sorted(TITLES))
def test_criterion(k):
    ok, line = _record(k, *RUN[k]())
    assert ok, line


if __name__ == "__main__":
    results = [_record(k, *RUN[k]())[0] for k in sorted(TITLES)]
    sys.exit(0 if all(results) else 1)
