"""Text formats: complexes/models, forms, paths, covers and plots."""
from __future__ import annotations

import ast
import operator
import re
from fractions import Fraction
from pathlib import Path

from .cohomology import CellComplexModel, Identification
from .cubicalset import Ball, Box, Cone, CoverSet, CubicalComplex, Lattice, Product
from .polyform import PolyForm, PolyMap
from .polynomial import PolynomialParseError, coordinate_names, parse_polynomial


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        self.line = line
        self.source = source
        where = f"{source}:" if source else ""
        where += f"line {line}: " if line is not None else ""
        super().__init__(where + message)


def _lines(text: str):
    for k, raw in enumerate(text.splitlines(), start=1):
        s = raw.split("#", 1)[0].strip()
        if s:
            yield k, s


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv}


def rational(text: str) -> Fraction:
    """Evaluate a rational literal expression such as ``-3/4`` or ``1/2 + 1``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"not a rational expression: {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"not a rational expression: {text!r}")

    try:
        return ev(tree)
    except ZeroDivisionError as exc:
        raise ValueError(f"division by zero in {text!r}") from exc


_INTERVAL = r"\[\s*([^\[\],]+?)\s*,\s*([^\[\],]+?)\s*\]"
_CELL_RE = re.compile(_INTERVAL + r"(?:\s*x\s*" + _INTERVAL + r")*")


def parse_cell_id(text: str, lattice: bool = True) -> Lattice:
    """``[a1,b1] x ... x [an,bn]``; with ``lattice`` the ends must be integers with b - a in {0, 1}."""
    text = text.strip()
    if not re.fullmatch(_CELL_RE, text):
        raise ValueError(f"malformed cell id {text!r}")
    ivs = []
    for a, b in re.findall(_INTERVAL, text):
        a, b = rational(a), rational(b)
        if lattice and (a.denominator != 1 or b.denominator != 1 or b - a not in (0, 1)):
            raise ValueError(f"interval [{a},{b}] is not an elementary lattice interval")
        if b < a:
            raise ValueError(f"interval [{a},{b}] is reversed")
        ivs.append((a, b))
    return Lattice(tuple(ivs))


def find_cell_ids(text: str) -> list:
    return [m.group(0) for m in _CELL_RE.finditer(text)]


def _vector(text: str) -> tuple:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    parts = [p for p in _split_top(text) if p.strip()]
    return tuple(rational(p) for p in parts)


def _split_top(text: str, sep: str = ",") -> list:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


# models ------------------------------------------------------------------------------------

_IDENT_RE = re.compile(r"identify\s+(.+?)\s*->\s*(.+?)\s+via\s+(\[.*\])\s*;\s*(.+)$")
_CONE_RE = re.compile(r"cone\s+(\S+)\s+base=(.+?)\s+apex=(\(.*\))$")
_PRISM_RE = re.compile(r"prism\s+(\S+)\s+base=(.+?)\s+axis=(\d+)$")


def parse_complex_lines(text: str, source: str = ""):
    """Cells (downward closure of the listed ones) and identification lines."""
    cells, idents = [], []
    named: dict = {}
    ambient = None

    def lookup(token, k, strict=True):
        token = token.strip()
        if token in named:
            return named[token]
        try:
            return parse_cell_id(token, lattice=strict)
        except ValueError as exc:
            raise ParseError(str(exc), k, source) from None

    for k, s in _lines(text):
        try:
            if s.startswith("identify"):
                m = _IDENT_RE.match(s)
                if not m:
                    raise ParseError("expected 'identify <id> -> <id> via [matrix]; offset'", k, source)
                src, dst = lookup(m.group(1), k), lookup(m.group(2), k)
                try:
                    matrix = ast.literal_eval(m.group(3))
                    matrix = tuple(tuple(Fraction(x) for x in row) for row in matrix)
                except (ValueError, SyntaxError, TypeError):
                    raise ParseError("identification matrix must be a list of integer rows", k, source)
                offset = _vector(m.group(4))
                n = len(src.intervals)
                if len(matrix) != n or any(len(r) != n for r in matrix) or len(offset) != n:
                    raise ParseError(f"identification must use a {n}x{n} matrix and {n} offsets", k, source)
                idents.append((src, dst, matrix, offset, k))
                continue
            if s.startswith("cone"):
                m = _CONE_RE.match(s)
                if not m:
                    raise ParseError("expected 'cone <id> base=<id> apex=(...)'", k, source)
                c = Cone(lookup(m.group(2), k, False), _vector(m.group(3)))
                named[m.group(1)] = c
                cells.append(c)
                continue
            if s.startswith("prism"):
                m = _PRISM_RE.match(s)
                if not m:
                    raise ParseError("expected 'prism <id> base=<id> axis=<i>'", k, source)
                c = Product(lookup(m.group(2), k, False), int(m.group(3)))
                named[m.group(1)] = c
                cells.append(c)
                continue
            c = parse_cell_id(s)
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(str(exc), k, source) from None
        if ambient is None:
            ambient = len(c.intervals)
        elif len(c.intervals) != ambient:
            raise ParseError("cells of different ambient dimensions", k, source)
        cells.append(c)
    if not cells:
        raise ParseError("no cells", None, source)
    if ambient is None:
        from .cubicalset import ambient_dim
        ambient = ambient_dim(cells[0])
    return ambient, cells, idents


def parse_model(text: str, name: str = "", source: str = "") -> CellComplexModel:
    ambient, cells, idents = parse_complex_lines(text, source)
    K = CubicalComplex(ambient, cells)
    out = []
    for src, dst, matrix, offset, k in idents:
        for c in (src, dst):
            if c not in K.cells:
                raise ParseError(f"identified cell {c} is not in the complex", k, source)
        out.append(Identification(src, dst, matrix, offset))
    return CellComplexModel(K, out, name=name)


def parse_complex(text: str, source: str = "") -> CubicalComplex:
    ambient, cells, _ = parse_complex_lines(text, source)
    return CubicalComplex(ambient, cells)


def load_model(path) -> CellComplexModel:
    p = Path(path)
    return parse_model(p.read_text(encoding="utf-8"), name=p.stem, source=str(p))


# forms --------------------------------------------------------------------------------------

_DX_RE = re.compile(r"dx(\d+)")


def parse_form(text: str, source: str = ""):
    """Returns ``(degree, {cell: ambient PolyForm}, header)``; ``header`` holds
    optional ``model <path>`` / ``name <label>`` lines."""
    pieces: dict = {}
    degree = None
    header: dict = {}
    for k, s in _lines(text):
        if s.startswith("model ") or s.startswith("name "):
            key, val = s.split(None, 1)
            header[key] = val.strip()
            continue
        if not s.startswith("on "):
            raise ParseError("expected 'on <cell-id> : <basis> : <polynomial>'", k, source)
        parts = s[3:].split(":")
        if len(parts) != 3:
            raise ParseError("expected exactly two ':' separators", k, source)
        try:
            cell = parse_cell_id(parts[0])
        except ValueError as exc:
            raise ParseError(str(exc), k, source) from None
        n = len(cell.intervals)
        basis = parts[1].strip()
        if basis == "1":
            idx = ()
        else:
            toks = [t.strip() for t in basis.split("^")]
            idx = []
            for t in toks:
                m = _DX_RE.fullmatch(t)
                if not m or not 1 <= int(m.group(1)) <= n:
                    raise ParseError(f"bad basis element {t!r}", k, source)
                idx.append(int(m.group(1)))
            idx = tuple(idx)
        if degree is None:
            degree = len(idx)
        elif degree != len(idx):
            raise ParseError("all terms of a form must have the same degree", k, source)
        try:
            coef = parse_polynomial(parts[2], coordinate_names(n))
        except PolynomialParseError as exc:
            raise ParseError(str(exc), k, source) from None
        term = PolyForm.dx(n, *idx).scale(coef) if idx else PolyForm.function(coef)
        pieces[cell] = pieces[cell] + term if cell in pieces else term
    if degree is None:
        raise ParseError("empty form file", None, source)
    return degree, pieces, header


# paths --------------------------------------------------------------------------------------

_SEG_RE = re.compile(r"segment\s+(.+?)\s*:\s*(\(.*\))$")


def parse_path(text: str, source: str = "") -> list:
    segs = []
    for k, s in _lines(text):
        m = _SEG_RE.match(s)
        if not m:
            raise ParseError("expected 'segment <cell-id> : (p1(t), ..., pn(t))'", k, source)
        try:
            cell = parse_cell_id(m.group(1))
            body = m.group(2).strip()[1:-1]
            comps = [parse_polynomial(c, ["t"]) for c in _split_top(body)]
        except (ValueError, PolynomialParseError) as exc:
            raise ParseError(str(exc), k, source) from None
        if len(comps) != len(cell.intervals):
            raise ParseError("segment components do not match the cell's ambient dimension", k, source)
        segs.append((cell, PolyMap(1, comps)))
    if not segs:
        raise ParseError("empty path file", None, source)
    return segs


# covers -------------------------------------------------------------------------------------

_COVER_RE = re.compile(r"cover\s+(\w+)\s*=\s*(.+)$")
_BALL_RE = re.compile(r"ball\s*\((.*)\)$")
_CELLS_RE = re.compile(r"cells\s*\((.*)\)$")


def parse_cover(text: str, source: str = "") -> dict:
    """``{name: CoverSet}`` preserving file order."""
    out: dict = {}
    for k, s in _lines(text):
        m = _COVER_RE.match(s)
        if not m:
            raise ParseError("expected 'cover <name> = cells(...) | ball(center, radius)'", k, source)
        name, body = m.group(1), m.group(2)
        pieces = []
        for part in _split_top(body, "|"):
            part = part.strip()
            try:
                mb = _BALL_RE.match(part)
                mc = _CELLS_RE.match(part)
                if mb:
                    args = _split_top(mb.group(1))
                    if len(args) < 2:
                        raise ValueError("ball needs a center and a radius")
                    center = _vector(",".join(args[:-1]))
                    radius = rational(args[-1])
                    if radius <= 0:
                        raise ValueError("ball radius must be positive")
                    pieces.append(Ball(center, radius))
                elif mc:
                    ids = find_cell_ids(mc.group(1))
                    if not ids:
                        raise ValueError("cells(...) lists no cell ids")
                    for cid in ids:
                        pieces.append(Box(parse_cell_id(cid).intervals))
                else:
                    raise ValueError(f"unknown cover piece {part!r}")
            except ValueError as exc:
                raise ParseError(str(exc), k, source) from None
        if name in out:
            out[name].pieces.extend(pieces)
        else:
            out[name] = CoverSet(name, pieces)
    if not out:
        raise ParseError("empty cover file", None, source)
    return out


# plots --------------------------------------------------------------------------------------

_PLOT_RE = re.compile(r"plot\s+(\d+)\s*:\s*(\(.*\))$")


def parse_plots(text: str, source: str = "") -> list:
    """``plot <n> : (p1, ..., pm)`` lines with variables x1..xn."""
    plots = []
    for k, s in _lines(text):
        m = _PLOT_RE.match(s)
        if not m:
            raise ParseError("expected 'plot <n> : (p1, ..., pm)'", k, source)
        n = int(m.group(1))
        body = m.group(2).strip()[1:-1]
        try:
            comps = [parse_polynomial(c, coordinate_names(n)) for c in _split_top(body)]
        except PolynomialParseError as exc:
            raise ParseError(str(exc), k, source) from None
        plots.append(PolyMap(n, comps))
    if not plots:
        raise ParseError("empty plot file", None, source)
    return plots
