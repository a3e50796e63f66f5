import sympy

from cubedr.polynomial import Polynomial, coordinate_names

ACCEPTANCE_LINES = {}


def sym(p: Polynomial):
    """Independent sympy expression for a Polynomial (used as an oracle)."""
    names = coordinate_names(p.n)
    return sympy.sympify(p.to_string(names).replace("^", "**"), locals={n: sympy.Symbol(n) for n in names})


def sym_vars(n):
    return sympy.symbols(coordinate_names(n))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
