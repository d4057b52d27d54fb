"""The ``.mds`` text format: parsing, building and serializing.

A file consists of sections; ``#`` starts a comment::

    [stack]
    name = "gerby P1"
    grading = [0]            # 0 is Z, other entries are cyclic orders
    var x0 : (2)
    var x1 : (2)
    rel u^2 - v*w            # any number of relations
    irr x0                   # generators of the irrelevant ideal

    [fan]
    dim = 2
    ray a = (1, 0) mult 1
    cone (a, b)

    [gerbe]                  # line-bundle roots over the [stack] section
    root (1) order 2

Degrees and root classes are written in the coordinates of the ``grading``
line of the same file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .abelian import AbelianGroup
from .polynomial import NAME_RE, Polynomial, PolynomialSyntaxError, parse_polynomial
from .stack import GerbeFactorization, StackData
from .toric import StackyFan


class DocumentError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass
class StackDocument:
    name: str = ""
    grading: tuple[int, ...] = ()
    variables: list[tuple[str, tuple[int, ...]]] = field(default_factory=list)
    relations: list[Polynomial] = field(default_factory=list)
    irrelevant: list[Polynomial] = field(default_factory=list)


@dataclass
class FanDocument:
    dim: Optional[int] = None
    rays: list[tuple[str, tuple[int, ...], int]] = field(default_factory=list)
    cones: list[tuple[str, ...]] = field(default_factory=list)


@dataclass
class Document:
    stack: Optional[StackDocument] = None
    fan: Optional[FanDocument] = None
    roots: Optional[list[tuple[tuple[int, ...], int]]] = None


_INT = r"-?\d+"
_TUPLE_RE = re.compile(r"\(\s*((?:-?\d+\s*(?:,\s*-?\d+\s*)*)?)\)")
_NAME_TUPLE_RE = re.compile(r"\(\s*([A-Za-z][A-Za-z0-9_]*(?:\s*,\s*[A-Za-z][A-Za-z0-9_]*)*)?\s*\)")


def _strip_comment(line: str) -> str:
    out, quoted = [], False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        if ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out).rstrip()


def _int_tuple(text: str, lineno: int, col: int) -> tuple[int, ...]:
    m = _TUPLE_RE.fullmatch(text.strip())
    if m is None:
        raise DocumentError(f"expected an integer tuple like (1, 0), got {text.strip()!r}", lineno, col)
    body = m.group(1)
    return tuple(int(x) for x in body.split(",")) if body else ()


class _Reader:
    def __init__(self, text: str):
        self.doc = Document()
        self.section = None
        self.seen_vars: set[str] = set()
        self.seen_rays: set[str] = set()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = _strip_comment(raw)
            if line.strip():
                self.line(lineno, line)

    def line(self, lineno: int, line: str):
        stripped = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            m = re.fullmatch(r"\[\s*(stack|fan|gerbe)\s*\]", stripped)
            if m is None:
                raise DocumentError(f"unknown section header {stripped!r}", lineno, col)
            self.section = m.group(1)
            if getattr(self.doc, "roots" if self.section == "gerbe" else self.section) is not None:
                raise DocumentError(f"duplicate [{self.section}] section", lineno, col)
            if self.section == "stack":
                self.doc.stack = StackDocument()
            elif self.section == "fan":
                self.doc.fan = FanDocument()
            else:
                self.doc.roots = []
            return
        if self.section is None:
            raise DocumentError("content before the first section header", lineno, col)
        getattr(self, f"_{self.section}")(lineno, col, stripped)

    def _stack(self, lineno, col, s):
        doc = self.doc.stack
        keyword, _, rest = s.partition(" ")
        rest_col = col + len(keyword) + 1
        if re.match(r"name\s*=", s):
            m = re.fullmatch(r'name\s*=\s*"([^"]*)"', s)
            if m is None:
                raise DocumentError('expected name = "..."', lineno, col)
            doc.name = m.group(1)
        elif re.match(r"grading\s*=", s):
            m = re.fullmatch(r"grading\s*=\s*\[\s*((?:\d+\s*(?:,\s*\d+\s*)*)?)\]", s)
            if m is None:
                raise DocumentError("expected grading = [f1, ..., fk] with nonnegative integers", lineno, col)
            if doc.variables:
                raise DocumentError("grading must precede variable declarations", lineno, col)
            body = m.group(1)
            doc.grading = tuple(int(x) for x in body.split(",")) if body else ()
        elif keyword == "var":
            m = re.fullmatch(r"var\s+(\S+)\s*:\s*(.*)", s)
            if m is None:
                raise DocumentError("expected var NAME : (c1, ..., ck)", lineno, col)
            name = m.group(1)
            if not NAME_RE.match(name):
                raise DocumentError(f"invalid variable name {name!r}", lineno, col + 4)
            if name in self.seen_vars:
                raise DocumentError(f"duplicate variable {name!r}", lineno, col + 4)
            degree = _int_tuple(m.group(2), lineno, col + m.start(2))
            if len(degree) != len(doc.grading):
                raise DocumentError(
                    f"degree of {name} has {len(degree)} entries but the grading has {len(doc.grading)}",
                    lineno,
                    col + m.start(2),
                )
            self.seen_vars.add(name)
            doc.variables.append((name, degree))
        elif keyword in ("rel", "irr"):
            try:
                poly = parse_polynomial(rest)
            except PolynomialSyntaxError as e:
                raise DocumentError(str(e).split(": ", 1)[1], lineno, rest_col + e.column - 1) from None
            (doc.relations if keyword == "rel" else doc.irrelevant).append(poly)
        else:
            raise DocumentError(f"unknown [stack] statement {keyword!r}", lineno, col)

    def _fan(self, lineno, col, s):
        doc = self.doc.fan
        if re.match(r"dim\s*=", s):
            m = re.fullmatch(r"dim\s*=\s*(\d+)", s)
            if m is None:
                raise DocumentError("expected dim = d", lineno, col)
            doc.dim = int(m.group(1))
        elif s.startswith("ray"):
            m = re.fullmatch(r"ray\s+(\S+)\s*=\s*(\([^)]*\))\s*(?:mult\s+(\d+))?", s)
            if m is None:
                raise DocumentError("expected ray NAME = (v1, ..., vd) mult m", lineno, col)
            name = m.group(1)
            if not NAME_RE.match(name):
                raise DocumentError(f"invalid ray name {name!r}", lineno, col + 4)
            if name in self.seen_rays:
                raise DocumentError(f"duplicate ray {name!r}", lineno, col + 4)
            vec = _int_tuple(m.group(2), lineno, col + m.start(2))
            if doc.dim is not None and len(vec) != doc.dim:
                raise DocumentError(f"ray {name} has {len(vec)} coordinates, expected {doc.dim}", lineno, col + m.start(2))
            self.seen_rays.add(name)
            doc.rays.append((name, vec, int(m.group(3) or 1)))
        elif s.startswith("cone"):
            m = re.fullmatch(r"cone\s*(\(.*\))", s)
            n = _NAME_TUPLE_RE.fullmatch(m.group(1).strip()) if m else None
            if n is None:
                raise DocumentError("expected cone (N1, ..., Nj)", lineno, col)
            names = tuple(x.strip() for x in n.group(1).split(",")) if n.group(1) else ()
            for x in names:
                if x not in self.seen_rays:
                    raise DocumentError(f"cone refers to undeclared ray {x!r}", lineno, col)
            doc.cones.append(names)
        else:
            raise DocumentError(f"unknown [fan] statement {s.split()[0]!r}", lineno, col)

    def _gerbe(self, lineno, col, s):
        m = re.fullmatch(r"root\s*(\([^)]*\))\s*order\s+(\d+)", s)
        if m is None:
            raise DocumentError("expected root (c1, ..., ck) order r", lineno, col)
        degree = _int_tuple(m.group(1), lineno, col + m.start(1))
        order = int(m.group(2))
        if order < 1:
            raise DocumentError("root order must be positive", lineno, col + m.start(2))
        self.doc.roots.append((degree, order))


def parse_document(text: str) -> Document:
    return _Reader(text).doc


def parse_stack(text: str) -> StackDocument:
    doc = parse_document(text)
    if doc.stack is None:
        raise DocumentError("no [stack] section")
    return doc.stack


def parse_fan(text: str) -> FanDocument:
    doc = parse_document(text)
    if doc.fan is None:
        raise DocumentError("no [fan] section")
    return doc.fan


# -- building -----------------------------------------------------------------


def _grading(doc: StackDocument) -> tuple[AbelianGroup, object]:
    group = AbelianGroup.from_factors(doc.grading)
    return AbelianGroup(group.free_rank, group.torsion), group.presentation.projection


def build(doc: StackDocument) -> StackData:
    """Turn a parsed [stack] section into StackData; fails on inhomogeneity."""
    group, proj = _grading(doc)
    names = {v for v, _ in doc.variables}
    for kind, polys in (("relation", doc.relations), ("irrelevant generator", doc.irrelevant)):
        for p in polys:
            unknown = p.variables() - names
            if unknown:
                raise DocumentError(f"{kind} {p} uses undeclared variables {sorted(unknown)}")
    for v, d in doc.variables:
        if len(d) != len(doc.grading):
            raise DocumentError(f"degree of {v} does not match the grading")
    variables = [(v, group.reduce(proj @ d)) for v, d in doc.variables]
    irrelevant = doc.irrelevant or [Polynomial.const(1)]
    return StackData.create(doc.name or "stack", group, variables, doc.relations, irrelevant)


def build_roots(doc: StackDocument, roots) -> list[tuple[tuple[int, ...], int]]:
    group, proj = _grading(doc)
    out = []
    for d, r in roots:
        if len(d) != len(doc.grading):
            raise DocumentError(f"root class {d} does not match the grading")
        out.append((group.reduce(proj @ d), r))
    return out


def build_fan(doc: FanDocument) -> StackyFan:
    if doc.dim is None:
        raise DocumentError("[fan] section needs dim = d")
    index = {name: i for i, (name, _, _) in enumerate(doc.rays)}
    return StackyFan(
        doc.dim,
        tuple(v for _, v, _ in doc.rays),
        tuple(m for _, _, m in doc.rays),
        tuple(tuple(index[x] for x in c) for c in doc.cones),
        tuple(name for name, _, _ in doc.rays),
    )


def degree_in_document(doc: StackDocument, X: StackData, d: tuple[int, ...]) -> tuple[int, ...]:
    """Translate a degree written in the file's grading coordinates."""
    group, proj = _grading(doc)
    if len(d) != len(doc.grading):
        raise DocumentError(f"degree {d} has {len(d)} entries but the grading has {len(doc.grading)}")
    return X.grading.reduce(proj @ d)


# -- serializing --------------------------------------------------------------


def _tuple(d) -> str:
    return "(" + ", ".join(str(x) for x in d) + ")"


def stack_document(X: StackData) -> StackDocument:
    G = X.grading
    return StackDocument(
        X.name,
        G.factors,
        [(v, tuple(d)) for v, d in X.cox.variables],
        list(X.cox.relations),
        list(X.cox.irrelevant),
    )


def serialize_stack_document(doc: StackDocument) -> str:
    order = [v for v, _ in doc.variables]
    lines = ["[stack]", f'name = "{doc.name}"', "grading = [" + ", ".join(str(f) for f in doc.grading) + "]"]
    lines += [f"var {v} : {_tuple(d)}" for v, d in doc.variables]
    lines += [f"rel {p.format(order)}" for p in doc.relations]
    lines += [f"irr {p.format(order)}" for p in doc.irrelevant]
    return "\n".join(lines) + "\n"


def serialize_fan_document(doc: FanDocument) -> str:
    lines = ["[fan]"]
    if doc.dim is not None:
        lines.append(f"dim = {doc.dim}")
    lines += [f"ray {n} = {_tuple(v)} mult {m}" for n, v, m in doc.rays]
    lines += ["cone (" + ", ".join(c) + ")" for c in doc.cones]
    return "\n".join(lines) + "\n"


def serialize_roots(roots) -> str:
    return "[gerbe]\n" + "".join(f"root {_tuple(d)} order {r}\n" for d, r in roots)


def serialize_document(doc: Document) -> str:
    parts = []
    if doc.stack is not None:
        parts.append(serialize_stack_document(doc.stack))
    if doc.fan is not None:
        parts.append(serialize_fan_document(doc.fan))
    if doc.roots is not None:
        parts.append(serialize_roots(doc.roots))
    return "\n".join(parts)


def serialize_stack(X: StackData) -> str:
    return serialize_stack_document(stack_document(X))


def serialize_factorization(f: GerbeFactorization) -> str:
    return serialize_stack(f.rigidified) + "\n" + serialize_roots(f.roots)


def load(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())
