"""Command-line entry point ``cubedr``.

Exit codes: 0 success, 1 a computed property failed, 2 parse error or unknown
suite, 3 model or form violation, 4 unsupported or non-covering cover,
5 subdivision did not terminate.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cohomology as coh
from . import cubicalset as cs
from . import hurewicz as hw
from . import io
from . import pou
from . import verify
from .polyform import FormError

EXIT_FAIL, EXIT_PARSE, EXIT_MODEL, EXIT_COVER, EXIT_SUBDIV = 1, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}")


def _model(path: str) -> coh.CellComplexModel:
    try:
        return io.parse_model(_read(path), name=Path(path).stem, source=path)
    except io.ParseError as exc:
        raise CliError(EXIT_PARSE, str(exc))
    except (coh.ModelError, cs.GeometryError) as exc:
        raise CliError(EXIT_MODEL, f"{path}: {exc}")


def _cover(path: str) -> dict:
    try:
        return io.parse_cover(_read(path), source=path)
    except io.ParseError as exc:
        raise CliError(EXIT_PARSE, str(exc))


def _emit(args, data: dict, text: str):
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True, default=str))
    else:
        print(text)


def cmd_cohomology(args) -> int:
    M = _model(args.model)
    try:
        cc = coh.chain_complex(M)
    except coh.ModelError as exc:
        raise CliError(EXIT_MODEL, str(exc))
    b = coh.betti(cc)
    lines = [f"model: {M.name}", f"cells per degree: {' '.join(map(str, cc.dims))}",
             f"b: {' '.join(map(str, b))}"]
    _emit(args, {"model": M.name, "cells": cc.dims, "betti": b}, "\n".join(lines))
    return 0


def _table(T: coh.LESTable) -> str:
    head = ["q", "H(X)", "H(A)", "H(B)", "H(AnB)", "rk psi", "rk phi", "rk delta"]
    rows = [[str(r.q), str(r.b_union), str(r.b_A), str(r.b_B), str(r.b_AB),
             str(r.rank_psi), str(r.rank_phi), str(r.rank_delta)] for r in T.rows]
    widths = [max(len(h), *(len(r[k]) for r in rows)) for k, h in enumerate(head)]
    fmt = lambda cells: "  ".join(c.rjust(w) for c, w in zip(cells, widths))
    out = [fmt(head)] + [fmt(r) for r in rows]
    out.append(f"exact: {'yes' if T.exact else 'no: ' + ', '.join(T.failures)}")
    out.append(f"assembled: {' '.join(map(str, T.assembled))}")
    out.append(f"direct: {' '.join(map(str, T.direct))}")
    return "\n".join(out)


def cmd_mv(args) -> int:
    M = _model(args.model)
    U = _cover(args.cover)
    if "A" not in U or "B" not in U:
        raise CliError(EXIT_COVER, "cover file must define sets A and B")
    try:
        T = coh.mayer_vietoris(M, U["A"], U["B"])
    except coh.UnsupportedCoverError as exc:
        raise CliError(EXIT_COVER, str(exc))
    except coh.ModelError as exc:
        raise CliError(EXIT_MODEL, str(exc))
    _emit(args, T.to_dict(), _table(T))
    return 0 if T.exact and T.agrees else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.suite not in verify.RUNNERS and args.suite not in verify.ALIASES:
        print(f"unknown suite {args.suite!r}; choose from "
              f"{', '.join(list(verify.SUITES) + list(verify.ALIASES))}", file=sys.stderr)
        return EXIT_PARSE
    kw = {}
    if args.grid_denominator:
        kw["grid_denominator"] = args.grid_denominator
    if args.tolerance is not None:
        kw["tol"] = args.tolerance
    results = verify.run_suite(args.suite, seed=args.seed, cases=args.cases, **kw)
    lines = []
    for r in results:
        lines.append(f"[{r.suite}] {'pass' if r.passed else 'FAIL'}")
        lines.extend("  " + c.line() for c in r.checks)
    ok = all(r.passed for r in results)
    lines.append("all passed" if ok else "some checks failed")
    _emit(args, {"seed": args.seed, "passed": ok, "suites": [r.to_dict() for r in results]},
          "\n".join(lines))
    return 0 if ok else EXIT_FAIL


def cmd_subdivide(args) -> int:
    try:
        K = io.parse_complex(_read(args.model), source=args.model)
        plots = io.parse_plots(_read(args.plot), source=args.plot)
    except io.ParseError as exc:
        raise CliError(EXIT_PARSE, str(exc))
    U = list(_cover(args.cover).values())
    P = plots[0]
    try:
        pair = cs.SubdivPair(K, P)
    except cs.GeometryError as exc:
        raise CliError(EXIT_MODEL, str(exc))
    if any(isinstance(pc, cs.Ball) and len(pc.center) != P.n for U_ in U for pc in U_.pieces):
        raise CliError(EXIT_COVER, "cover lives in a different dimension than the plot image")
    den = args.grid_denominator or 16
    if not cs.covers_image(pair, U, denominator=den):
        raise CliError(EXIT_COVER, "the cover misses part of the plot image")
    before = cs.mesh_metrics(pair, U)
    try:
        out, r = cs.sd_iterate_until_subordinate(pair, U, max_iters=args.iters)
    except cs.SubdivisionError as exc:
        m = exc.metrics
        print(f"no subordinate subdivision within {args.iters} steps", file=sys.stderr)
        if m is not None:
            print(f"epsilon: {m.epsilon}  d: {m.diameter}", file=sys.stderr)
        return EXIT_SUBDIV
    first = cs.subdivide_sd(pair, U) if r else pair
    after = cs.mesh_metrics(first, U)
    n = pair.n
    ratio = 0.0 if before.diameter == 0 else after.diameter / before.diameter
    text = cs.serialize(out.complex).rstrip()
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    report = {"r": r, "f_vector": out.complex.f_vector(),
              "epsilon_before": before.epsilon, "d_before": before.diameter,
              "epsilon_after_one_step": after.epsilon, "d_after_one_step": after.diameter,
              "ratio": ratio, "bound": n / (n + 1)}
    lines = [] if args.output else [text]
    lines += [f"r: {r}", f"f-vector: {' '.join(map(str, report['f_vector']))}",
              f"epsilon before: {before.epsilon}", f"d before: {before.diameter:.12g}",
              f"d after one step: {after.diameter:.12g}",
              f"ratio: {ratio:.12g} (bound n/(n+1) = {n / (n + 1):.12g})"]
    _emit(args, report, "\n".join(lines))
    return 0


def cmd_integrate(args) -> int:
    try:
        deg, pieces, header = io.parse_form(_read(args.form), source=args.form)
        segs = io.parse_path(_read(args.path), source=args.path)
    except io.ParseError as exc:
        raise CliError(EXIT_PARSE, str(exc))
    model_path = args.model or (str(Path(args.form).parent / header["model"]) if "model" in header else None)
    try:
        if model_path:
            M = _model(model_path)
        else:
            cells = set(pieces) | {c for c, _ in segs}
            K = cs.CubicalComplex(len(next(iter(cells)).intervals), cells)
            M = coh.CellComplexModel(K, [])
        w = coh.cellwise_from_ambient(M, pieces, deg)
        path = hw.PathPlot(segs, M)
        val = hw.integrate_1form(w, path)
    except (FormError, hw.PathError, coh.ModelError, cs.GeometryError) as exc:
        raise CliError(EXIT_MODEL, str(exc))
    _emit(args, {"value": str(val), "loop": path.is_loop()}, str(val))
    return 0


def cmd_pou(args) -> int:
    U = _cover(args.cover)
    try:
        plots = io.parse_plots(_read(args.plots), source=args.plots)
    except io.ParseError as exc:
        raise CliError(EXIT_PARSE, str(exc))
    try:
        C = verify.ball_cover(U)
        built = pou.build_pou(C, plots, normal=not args.three_valued)
        rep = pou.check_pou(built, args.grid_denominator or 64)
    except (coh.UnsupportedCoverError, pou.CoverageError) as exc:
        raise CliError(EXIT_COVER, str(exc))
    tol = args.tolerance if args.tolerance is not None else 1e-12
    ok = rep.ok(tol)
    lines = [f"plots: {len(built)}  sample points: {rep.points}",
             f"max-sum-deviation: {rep.max_sum_deviation:.3g}",
             f"support violations: {rep.support_violations}",
             f"degeneracy residual: {rep.degeneracy_residual:.3g}",
             f"face residual: {rep.face_residual:.3g}",
             f"collar residual: {rep.collar_residual:.3g}",
             f"collar widths: {' '.join(f'{b.collar:.4g}' for b in built)}",
             "pass" if ok else "FAIL"]
    _emit(args, dict(rep.to_dict(), passed=ok), "\n".join(lines))
    return 0 if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=lambda s: int(s, 0), default=1, help="PRNG seed (64-bit)")
    common.add_argument("--cases", type=int, default=None, help="randomized case count")
    common.add_argument("--grid-denominator", type=int, default=None, help="sample grid density")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--tolerance", type=float, default=None, help="numeric tolerance override")
    p = argparse.ArgumentParser(prog="cubedr", description="Cubical de Rham toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("cohomology", parents=[common], help="Betti numbers of a model")
    c.add_argument("model")
    c.set_defaults(func=cmd_cohomology)
    c = sub.add_parser("mv", parents=[common], help="Mayer-Vietoris sequence for a two-set cover")
    c.add_argument("model")
    c.add_argument("cover")
    c.set_defaults(func=cmd_mv)
    c = sub.add_parser("verify", parents=[common], help="run a property suite")
    c.add_argument("suite")
    c.set_defaults(func=cmd_verify)
    c = sub.add_parser("subdivide", parents=[common], help="subdivide until subordinate to a cover")
    c.add_argument("model")
    c.add_argument("plot")
    c.add_argument("cover")
    c.add_argument("--iters", type=int, default=10)
    c.add_argument("--output", default=None, help="write the subdivided complex here")
    c.set_defaults(func=cmd_subdivide)
    c = sub.add_parser("integrate", parents=[common], help="integrate a 1-form along a path")
    c.add_argument("form")
    c.add_argument("path")
    c.add_argument("--model", default=None, help="model file (defaults to the form's header)")
    c.set_defaults(func=cmd_integrate)
    c = sub.add_parser("pou", parents=[common], help="build and check a partition of unity")
    c.add_argument("cover")
    c.add_argument("plots")
    c.add_argument("--three-valued", action="store_true", help="use the non-metric base function")
    c.set_defaults(func=cmd_pou)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
