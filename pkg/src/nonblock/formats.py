"""Edge-list graph and DIMACS-CNF text formats used by the generators."""

from __future__ import annotations

from .errors import ParseError
from .reductions import Cnf3, Graph


def loads_graph(text: str, source: str = "<string>") -> Graph:
    """Parse ``n <count>``, ``e <u> <v>``, ``s <id>`` and ``t <id>`` lines."""
    nodes = s = t = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, *rest = line.split()
        try:
            values = [int(v) for v in rest]
        except ValueError:
            raise ParseError("expected integer arguments", source, lineno) from None
        want = 2 if key == "e" else 1
        if key not in ("n", "e", "s", "t") or len(values) != want:
            raise ParseError(f"malformed line {line!r}", source, lineno)
        if key == "n":
            nodes = values[0]
        elif key == "e":
            edges.append(tuple(values))
        elif key == "s":
            s = values[0]
        else:
            t = values[0]
    if nodes is None or s is None or t is None:
        raise ParseError("graph needs 'n', 's' and 't' lines", source)
    try:
        return Graph(nodes, tuple(edges), s, t)
    except ValueError as exc:
        raise ParseError(str(exc), source) from exc


def dumps_graph(g: Graph) -> str:
    lines = [f"n {g.nodes}"] + [f"e {u} {v}" for u, v in g.edges] + [f"s {g.s}", f"t {g.t}"]
    return "\n".join(lines) + "\n"


def loads_dimacs(text: str, source: str = "<string>") -> Cnf3:
    """DIMACS CNF restricted to width-3 clauses; variables become 0-based."""
    num_vars = None
    clauses = []
    pending = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("expected 'p cnf <vars> <clauses>'", source, lineno)
            num_vars = int(parts[2])
            continue
        if num_vars is None:
            raise ParseError("clause before the 'p cnf' header", source, lineno)
        try:
            lits = [int(v) for v in line.split()]
        except ValueError:
            raise ParseError("clause literals must be integers", source, lineno) from None
        for lit in lits:
            if lit == 0:
                if len(pending) != 3:
                    raise ParseError(f"clause has {len(pending)} literals, expected 3", source, lineno)
                clauses.append(tuple(pending))
                pending = []
            elif abs(lit) > num_vars:
                raise ParseError(f"literal {lit} exceeds {num_vars} variables", source, lineno)
            else:
                pending.append((abs(lit) - 1, lit > 0))
    if num_vars is None:
        raise ParseError("missing 'p cnf' header", source)
    if pending:
        raise ParseError("last clause is not terminated by 0", source)
    try:
        return Cnf3(num_vars, tuple(clauses))
    except ValueError as exc:
        raise ParseError(str(exc), source) from exc


def dumps_dimacs(f: Cnf3) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    for c in f.clauses:
        lines.append(" ".join(str(v + 1 if pos else -(v + 1)) for v, pos in c) + " 0")
    return "\n".join(lines) + "\n"
