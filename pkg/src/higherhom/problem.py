"""Problem files: a line-oriented description of an algebra, modules and a subcategory.

Grammar (``#`` starts a comment, blank lines are ignored)::

    field rationals
    vertices 1 2 3
    arrow a 1 2
    arrow b 2 3
    relation a.b                    # paths are written in traversal order
    relation 2 a.c - 1/2 b.d        # linear combinations of parallel paths
    max-path-length 8               # optional admissibility bound
    module NAME
      dims 1 1 0
      a 1                           # matrix dims[target] x dims[source]; rows split by ';'
    morphism NAME SOURCE TARGET
      at 1 1                        # component at a vertex; omitted ones are zero
    subcategory NAME NAME ...
    atlas NAME NAME ...
    d 2
    seed 0

Arrows not given inside a module block are zero.  Scalars are integers or
``p/q``; decimals are rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path as FilePath

from .approximation import Subcategory
from .linalg import Matrix
from .modules import Module, ModuleMap, validate_module
from .quiver import AlgebraError, AlgebraTable, Quiver, build_algebra, make_relation

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_NAME = re.compile(r"^[A-Za-z0-9_\[\],'+^*-]+$")
TOP_FIELDS = ("field", "vertices", "arrow", "relation", "max-path-length", "module", "morphism",
              "subcategory", "atlas", "d", "seed")


@dataclass(frozen=True)
class ParseError:
    line: int
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message}"


class ProblemError(ValueError):
    def __init__(self, errors: list[ParseError]):
        super().__init__("\n".join(str(e) for e in errors))
        self.errors = errors


@dataclass
class ProblemFile:
    quiver: Quiver
    algebra: AlgebraTable
    modules: dict[str, Module] = field(default_factory=dict)
    morphisms: dict[str, ModuleMap] = field(default_factory=dict)
    subcategory: list[str] = field(default_factory=list)
    atlas: list[str] = field(default_factory=list)
    d: int = 1
    seed: int = 0
    source: str = ""

    def sub(self) -> Subcategory:
        return Subcategory([self.modules[n] for n in self.subcategory], self.subcategory)

    def atlas_sub(self):
        from .tilting import IndecAtlas

        return IndecAtlas([self.modules[n] for n in self.atlas], self.atlas)


def parse_rational(tok: str) -> Fraction:
    if not _RATIONAL.match(tok):
        raise ValueError(f"malformed rational {tok!r}")
    return Fraction(tok)


def _parse_matrix(text: str) -> list[list[Fraction]]:
    rows = []
    for chunk in text.split(";"):
        toks = chunk.split()
        if toks:
            rows.append([parse_rational(t) for t in toks])
    return rows


@dataclass
class _Block:
    kind: str
    line: int
    header: list[str]
    body: list[tuple[int, list[str], str]] = field(default_factory=list)


def _split_blocks(text: str, errors: list[ParseError]) -> list[_Block]:
    blocks: list[_Block] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        toks = line.split()
        if line[0].isspace():
            if not blocks or blocks[-1].kind not in ("module", "morphism"):
                errors.append(ParseError(n, "indented line outside a module or morphism block"))
                continue
            rest = line.strip()[len(toks[0]):]
            blocks[-1].body.append((n, toks, rest))
            continue
        if toks[0] not in TOP_FIELDS:
            errors.append(ParseError(n, f"unknown field {toks[0]!r}"))
            continue
        blocks.append(_Block(toks[0], n, toks[1:]))
    return blocks


def _parse_relation(q: Quiver, toks: list[str]):
    terms = []
    sign = 1
    coeff = None
    for tok in toks:
        if tok in ("+", "-"):
            if coeff is not None:
                raise ValueError("dangling coefficient before a sign")
            sign = -sign if tok == "-" else sign
            continue
        if _RATIONAL.match(tok):
            if coeff is not None:
                raise ValueError("two coefficients in a row")
            coeff = parse_rational(tok)
            continue
        path = q.path(tok.split("."))
        c = sign * (coeff if coeff is not None else Fraction(1))
        terms.append((c, path))
        sign, coeff = 1, None
    if coeff is not None or not terms:
        raise ValueError("relation must end with a path")
    return make_relation(terms)


def parse_problem(text: str, source: str = "<string>") -> ProblemFile:
    """Parse and validate a problem file; raises :class:`ProblemError` listing every error found."""
    errors: list[ParseError] = []
    blocks = _split_blocks(text, errors)

    def single(kind):
        found = [b for b in blocks if b.kind == kind]
        for b in found[1:]:
            errors.append(ParseError(b.line, f"duplicate {kind!r}"))
        return found[0] if found else None

    fb = single("field")
    if fb is None:
        errors.append(ParseError(1, "missing 'field rationals'"))
    elif fb.header != ["rationals"]:
        errors.append(ParseError(fb.line, f"unsupported field {' '.join(fb.header)!r}; only 'rationals'"))

    before = len(errors)
    vb = single("vertices")
    vertices = vb.header if vb else []
    if vb is None or not vertices:
        errors.append(ParseError(vb.line if vb else 1, "no vertices declared"))
    if len(set(vertices)) != len(vertices):
        errors.append(ParseError(vb.line, "duplicate vertex label"))

    arrows = []
    for b in blocks:
        if b.kind != "arrow":
            continue
        if len(b.header) != 3:
            errors.append(ParseError(b.line, "arrow needs: arrow LABEL SOURCE TARGET"))
            continue
        label, s, t = b.header
        for v in (s, t):
            if v not in vertices:
                errors.append(ParseError(b.line, f"undefined vertex {v!r} in arrow {label!r}"))
        if any(a[0] == label for a in arrows):
            errors.append(ParseError(b.line, f"duplicate arrow {label!r}"))
        elif s in vertices and t in vertices:
            arrows.append((label, s, t))
    if len(errors) > before:
        # without a quiver nothing else can be checked
        raise ProblemError(sorted(errors, key=lambda e: e.line))
    q = Quiver.from_labels(vertices, arrows)

    relations = []
    for b in blocks:
        if b.kind == "relation":
            try:
                relations.append(_parse_relation(q, b.header))
            except (ValueError, KeyError, AlgebraError) as exc:
                errors.append(ParseError(b.line, f"bad relation: {exc}"))

    max_len = 8
    mb = single("max-path-length")
    if mb is not None:
        if len(mb.header) != 1 or not mb.header[0].isdigit() or int(mb.header[0]) < 1:
            errors.append(ParseError(mb.line, "max-path-length needs a positive integer"))
        else:
            max_len = int(mb.header[0])
    if any(e.message.startswith(("bad relation", "max-path")) for e in errors):
        raise ProblemError(sorted(errors, key=lambda e: e.line))
    try:
        alg = build_algebra(q, relations, max_len)
    except AlgebraError as exc:
        line = next((b.line for b in blocks if b.kind == "relation"), vb.line)
        raise ProblemError([ParseError(line, f"relations do not define an admissible algebra: {exc}")])

    prob = ProblemFile(q, alg, source=source)
    # names whose block had its own errors are not reported again as undefined
    declared = {b.header[0] for b in blocks if b.kind == "module" and b.header}
    for b in blocks:
        if b.kind == "module":
            _parse_module(b, prob, errors)
    for b in blocks:
        if b.kind == "morphism":
            _parse_morphism(b, prob, errors, declared)

    for kind in ("subcategory", "atlas"):
        blk = single(kind)
        if blk is None:
            continue
        names = blk.header
        for name in names:
            if name not in declared:
                errors.append(ParseError(blk.line, f"undefined module {name!r} in {kind}"))
        if len(set(names)) != len(names):
            errors.append(ParseError(blk.line, f"repeated name in {kind}"))
        setattr(prob, kind, list(names))

    for kind in ("d", "seed"):
        blk = single(kind)
        if blk is None:
            continue
        tok = blk.header[0] if len(blk.header) == 1 else ""
        if not re.match(r"^-?\d+$", tok) or (kind == "d" and int(tok) < 1):
            errors.append(ParseError(blk.line, f"{kind} needs {'a positive' if kind == 'd' else 'an'} integer"))
        else:
            setattr(prob, kind, int(tok))
    if errors:
        raise ProblemError(sorted(errors, key=lambda e: e.line))
    return prob


def _parse_module(b: _Block, prob: ProblemFile, errors: list[ParseError]):
    q = prob.quiver
    if len(b.header) != 1 or not _NAME.match(b.header[0]):
        errors.append(ParseError(b.line, "module needs a single name without spaces"))
        return
    name = b.header[0]
    if name in prob.modules:
        errors.append(ParseError(b.line, f"duplicate module {name!r}"))
        return
    dims = None
    mats: dict[int, tuple[int, list[list[Fraction]]]] = {}
    ok = True
    for n, toks, rest in b.body:
        key = toks[0]
        try:
            if key == "dims":
                vals = [int(t) for t in toks[1:]]
                if len(vals) != q.num_vertices or any(v < 0 for v in vals):
                    raise ValueError(f"dims needs {q.num_vertices} non-negative integers")
                dims = vals
            else:
                try:
                    k = q.arrow_index(key)
                except (KeyError, ValueError):
                    raise ValueError(f"undefined arrow {key!r} in module {name!r}") from None
                mats[k] = (n, _parse_matrix(rest))
        except ValueError as exc:
            errors.append(ParseError(n, str(exc)))
            ok = False
    if dims is None:
        errors.append(ParseError(b.line, f"module {name!r} has no dims line"))
        return
    action = []
    for k, arrow in enumerate(q.arrows):
        r, c = dims[arrow.target], dims[arrow.source]
        if k not in mats:
            action.append(Matrix.zeros(r, c))
            continue
        n, rows = mats[k]
        shape = (len(rows), len(rows[0]) if rows else 0)
        if (r == 0 or c == 0) and not rows:
            action.append(Matrix.zeros(r, c))
            continue
        if shape != (r, c) or any(len(row) != c for row in rows):
            got = f"{shape[0]}x{shape[1]}" if all(len(row) == shape[1] for row in rows) else "ragged rows"
            errors.append(ParseError(n, f"module {name!r}, arrow {arrow.label!r}: expected {r}x{c} matrix, got {got}"))
            ok = False
            continue
        action.append(Matrix(rows, ncols=c))
    if not ok:
        return
    m = Module(prob.algebra, dims, action, name)
    diag = validate_module(m)
    if not diag.ok:
        errors.append(ParseError(b.line, f"module {name!r} violates the relations: {'; '.join(diag)}"))
        return
    prob.modules[name] = m


def _parse_morphism(b: _Block, prob: ProblemFile, errors: list[ParseError], declared: set[str]):
    q = prob.quiver
    if len(b.header) != 3:
        errors.append(ParseError(b.line, "morphism needs: morphism NAME SOURCE TARGET"))
        return
    name, s, t = b.header
    for m in (s, t):
        if m not in declared:
            errors.append(ParseError(b.line, f"undefined module {m!r} in morphism {name!r}"))
    if s not in prob.modules or t not in prob.modules:
        return
    src, tgt = prob.modules[s], prob.modules[t]
    comps = [Matrix.zeros(tgt.dims[v], src.dims[v]) for v in range(q.num_vertices)]
    for n, toks, _ in b.body:
        if toks[0] != "at" or len(toks) < 2:
            errors.append(ParseError(n, "expected: at VERTEX MATRIX"))
            continue
        if toks[1] not in q.vertices:
            errors.append(ParseError(n, f"undefined vertex {toks[1]!r} in morphism {name!r}"))
            continue
        v = q.vertex_index(toks[1])
        text = " ".join(toks[2:])
        try:
            rows = _parse_matrix(text)
        except ValueError as exc:
            errors.append(ParseError(n, str(exc)))
            continue
        r, c = tgt.dims[v], src.dims[v]
        if r == 0 or c == 0:
            if rows:
                errors.append(ParseError(n, f"morphism {name!r} at {toks[1]}: expected {r}x{c} matrix"))
            continue
        if len(rows) != r or any(len(row) != c for row in rows):
            errors.append(ParseError(n, f"morphism {name!r} at {toks[1]}: expected {r}x{c} matrix"))
            continue
        comps[v] = Matrix(rows, ncols=c)
    f = ModuleMap(src, tgt, tuple(comps))
    if not f.is_valid():
        errors.append(ParseError(b.line, f"morphism {name!r} does not commute with the arrows"))
        return
    prob.morphisms[name] = f


def fixture_names() -> list[str]:
    root = resources.files("higherhom") / "fixtures"
    return sorted(p.name[: -len(".problem")] for p in root.iterdir() if p.name.endswith(".problem"))


def fixture_text(name: str) -> str:
    return (resources.files("higherhom") / "fixtures" / f"{name}.problem").read_text(encoding="utf-8")


def load_fixture(name: str) -> ProblemFile:
    return parse_problem(fixture_text(name), name)


def load_problem(path: str) -> ProblemFile:
    """Read a problem file, falling back to a bundled fixture of that name."""
    p = FilePath(path)
    if p.exists():
        return parse_problem(p.read_text(encoding="utf-8"), str(p))
    if path in fixture_names():
        return load_fixture(path)
    raise FileNotFoundError(f"no such problem file or fixture: {path}")
