"""Plain-text instance files.

One item per line, ``#`` starts a comment::

    v 0 1 2 3 4        # vertices
    source 1 2 3 4     # j_1 .. j_2k
    marked 1 0         # u0 v0
    e 0 1 2            # edge label 0 joins 1 and 2
    c 0 1              # current on edge 0
    t 0 1/3            # tanh J on edge 0 (exact)
    J 0 0.5            # coupling on edge 0 (float)
    lambda 3 1/2       # field weight on vertex 3
    spins 1 1 2 3      # spin multiset for an Ursell function
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .graphs import BaseGraph, Current, GraphError, MultiGraph


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None, path: str | None = None):
        where = f"{path or '<input>'}:{line}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line


@dataclass
class Document:
    vertices: list[int] = field(default_factory=list)
    edges: list[tuple[int, int, int]] = field(default_factory=list)
    sources: list[int] | None = None
    marked: tuple[int, int] | None = None
    current: dict[int, int] = field(default_factory=dict)
    t: dict[int, Fraction] = field(default_factory=dict)
    J: dict[int, float] = field(default_factory=dict)
    lam: dict[int, Fraction] = field(default_factory=dict)
    spins: list[int] | None = None
    path: str | None = None

    def all_vertices(self) -> list[int]:
        vs = set(self.vertices)
        for _, u, v in self.edges:
            vs |= {u, v}
        return sorted(vs | set(self.sources or ()) | set(self.marked or ()))

    def base_graph(self) -> BaseGraph:
        try:
            return BaseGraph(tuple(self.all_vertices()), tuple(self.edges))
        except GraphError as err:
            raise ParseError(str(err), path=self.path) from None

    def multigraph(self) -> MultiGraph:
        if self.marked is None:
            raise ParseError("missing 'marked u0 v0' line", path=self.path)
        try:
            return MultiGraph(tuple(self.all_vertices()), tuple(self.edges), self.marked, tuple(self.sources or ()))
        except GraphError as err:
            raise ParseError(str(err), path=self.path) from None

    def current_on(self, G: BaseGraph) -> Current:
        try:
            return Current(G, self.current)
        except GraphError as err:
            raise ParseError(str(err), path=self.path) from None


def _ints(tokens, lineno, path):
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno, path) from None


def _rational(tok, lineno, path) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {tok!r}", lineno, path) from None


def parse_text(text: str, path: str | None = None) -> Document:
    doc = Document(path=path)
    labels = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, *rest = line.split()
        if key == "v":
            doc.vertices.extend(_ints(rest, lineno, path))
        elif key == "source":
            doc.sources = (doc.sources or []) + _ints(rest, lineno, path)
        elif key == "marked":
            pair = _ints(rest, lineno, path)
            if len(pair) != 2:
                raise ParseError("'marked' takes exactly two vertices", lineno, path)
            doc.marked = (pair[0], pair[1])
        elif key == "e":
            vals = _ints(rest, lineno, path)
            if len(vals) != 3:
                raise ParseError("'e' takes a label and two endpoints", lineno, path)
            if vals[0] in labels:
                raise ParseError(f"duplicate edge label {vals[0]}", lineno, path)
            labels.add(vals[0])
            doc.edges.append(tuple(vals))
        elif key == "c":
            vals = _ints(rest, lineno, path)
            if len(vals) != 2 or vals[1] < 0:
                raise ParseError("'c' takes a label and a nonnegative value", lineno, path)
            doc.current[vals[0]] = vals[1]
        elif key in ("t", "lambda"):
            if len(rest) != 2:
                raise ParseError(f"'{key}' takes an id and a rational p/q", lineno, path)
            (idx,) = _ints(rest[:1], lineno, path)
            x = _rational(rest[1], lineno, path)
            if key == "t":
                if not 0 <= x < 1:
                    raise ParseError(f"t must lie in [0, 1), got {x}", lineno, path)
                doc.t[idx] = x
            else:
                if x < 0:
                    raise ParseError("lambda must be nonnegative", lineno, path)
                doc.lam[idx] = x
        elif key == "J":
            if len(rest) != 2:
                raise ParseError("'J' takes a label and a float", lineno, path)
            (idx,) = _ints(rest[:1], lineno, path)
            try:
                x = float(rest[1])
            except ValueError:
                raise ParseError(f"bad float {rest[1]!r}", lineno, path) from None
            if x < 0:
                raise ParseError("J must be nonnegative", lineno, path)
            doc.J[idx] = x
        elif key == "spins":
            doc.spins = (doc.spins or []) + _ints(rest, lineno, path)
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno, path)
    return doc


def read_file(path: str | Path) -> Document:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as err:
        raise ParseError(f"cannot read {p}: {err.strerror}") from None
    return parse_text(text, str(p))


def write_multigraph(g: MultiGraph) -> str:
    lines = ["v " + " ".join(map(str, g.vertices))]
    if g.sources:
        lines.append("source " + " ".join(map(str, g.sources)))
    lines.append(f"marked {g.marked[0]} {g.marked[1]}")
    for lab, u, v in g.edges:
        lines.append(f"e {lab} {u} {v}")
    return "\n".join(lines) + "\n"


def fmt_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")
