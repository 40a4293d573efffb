"""Quivers with relations and their finite-dimensional path algebras.

Paths are written in traversal order: the path ``(a, b)`` on ``1 -a-> 2 -b-> 3``
walks ``a`` first and then ``b``, and multiplication of basis paths is
concatenation in that order.  Relations are turned into a rewriting system
whose leading word is the largest path under length-then-lexicographic order
on arrow indices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, NamedTuple, Sequence

from .linalg import ONE, ZERO, to_scalar


class AlgebraError(ValueError):
    """Raised when a quiver with relations does not give a usable algebra."""

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class Arrow:
    label: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex labels must be unique")
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise ValueError("arrow labels must be unique")
        n = len(self.vertices)
        for a in self.arrows:
            if not (0 <= a.source < n and 0 <= a.target < n):
                raise ValueError(f"arrow {a.label} refers to a missing vertex")

    @classmethod
    def from_labels(cls, vertices: Sequence, arrows: Iterable[tuple] = ()) -> Quiver:
        """``arrows`` holds ``(label, source_label, target_label)`` triples."""
        verts = tuple(str(v) for v in vertices)
        index = {v: i for i, v in enumerate(verts)}
        out = []
        for label, s, t in arrows:
            s, t = str(s), str(t)
            if s not in index or t not in index:
                raise ValueError(f"arrow {label} refers to a missing vertex")
            out.append(Arrow(str(label), index[s], index[t]))
        return cls(verts, tuple(out))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def vertex_index(self, label) -> int:
        try:
            return self.vertices.index(str(label))
        except ValueError:
            raise KeyError(f"unknown vertex {label!r}") from None

    def arrow_index(self, label) -> int:
        for i, a in enumerate(self.arrows):
            if a.label == label:
                return i
        raise KeyError(f"unknown arrow {label!r}")

    def opposite(self) -> Quiver:
        return Quiver(self.vertices, tuple(Arrow(a.label, a.target, a.source) for a in self.arrows))

    def path(self, labels: Sequence[str], start=None) -> Path:
        """Build a path from arrow labels in traversal order.

        ``start`` (a vertex label) is only needed for the trivial path.
        """
        if not labels:
            if start is None:
                raise ValueError("a trivial path needs its vertex")
            v = self.vertex_index(start)
            return Path(v, v, ())
        idx = [self.arrow_index(a) for a in labels]
        for x, y in zip(idx, idx[1:]):
            if self.arrows[x].target != self.arrows[y].source:
                raise ValueError(f"arrows {self.arrows[x].label} and {self.arrows[y].label} do not compose")
        return Path(self.arrows[idx[0]].source, self.arrows[idx[-1]].target, tuple(idx))

    def path_name(self, p: Path) -> str:
        if not p.arrows:
            return f"e{self.vertices[p.source]}"
        return ".".join(self.arrows[i].label for i in p.arrows)


class Path(NamedTuple):
    source: int
    target: int
    arrows: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)

    def then(self, other: Path) -> Path | None:
        if self.target != other.source:
            return None
        return Path(self.source, other.target, self.arrows + other.arrows)

    def reversed(self) -> Path:
        return Path(self.target, self.source, self.arrows[::-1])


def path_key(p: Path):
    return (p.length, p.source, p.arrows)


Relation = tuple  # tuple of (Fraction, Path) terms, read as "sum = 0"


def make_relation(terms: Iterable[tuple]) -> Relation:
    """Normalise ``[(coef, Path), ...]``: merge repeated paths, drop zeros, check shape."""
    acc: dict[Path, Fraction] = {}
    for c, p in terms:
        acc[p] = acc.get(p, ZERO) + to_scalar(c)
    terms = tuple(sorted(((c, p) for p, c in acc.items() if c), key=lambda t: path_key(t[1])))
    if terms:
        s, t = terms[0][1].source, terms[0][1].target
        for _, p in terms:
            if (p.source, p.target) != (s, t):
                raise AlgebraError("relation mixes paths with different endpoints")
            if p.length < 2:
                raise AlgebraError("relations must only involve paths of length >= 2")
    return terms


class Diagnostics(list):
    """A list of failure messages; empty means well-formed."""

    @property
    def ok(self) -> bool:
        return not self

    def __repr__(self):
        return "Diagnostics(ok)" if self.ok else f"Diagnostics({list(self)!r})"


Combo = dict  # basis index -> Fraction


class AlgebraTable:
    """A finite-dimensional algebra given by basis labels and structure constants.

    ``mult[(i, j)]`` is the product of basis elements ``i`` and ``j`` as a
    tuple of ``(k, coefficient)`` pairs; missing keys mean zero.  For path
    algebras the labels are :class:`Path` objects and ``quiver``/``relations``
    are set.
    """

    def __init__(self, basis: Sequence[Hashable], mult: dict, idempotents: Sequence[int],
                 quiver: Quiver | None = None, relations: Sequence[Relation] = ()):
        self.basis = tuple(basis)
        self.mult = {k: tuple(v) for k, v in mult.items() if v}
        self.idempotents = tuple(idempotents)
        self.quiver = quiver
        self.relations = tuple(relations)
        self._index = {b: i for i, b in enumerate(self.basis)}
        self._hash = None
        self._opposite = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label) -> int:
        return self._index[label]

    def product(self, i: int, j: int) -> tuple:
        return self.mult.get((i, j), ())

    def multiply(self, x: Combo, y: Combo) -> Combo:
        out: dict[int, Fraction] = {}
        for i, a in x.items():
            if not a:
                continue
            for j, b in y.items():
                if not b:
                    continue
                for k, c in self.mult.get((i, j), ()):
                    v = out.get(k, ZERO) + a * b * c
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return out

    def with_product(self, i: int, j: int, combo: Combo) -> AlgebraTable:
        """Copy of this table with one product overwritten (used to plant defects)."""
        mult = dict(self.mult)
        mult[(i, j)] = tuple((k, to_scalar(c)) for k, c in sorted(combo.items()) if c)
        return AlgebraTable(self.basis, mult, self.idempotents, self.quiver, self.relations)

    def paths_from(self, v: int) -> list[int]:
        return [i for i, p in enumerate(self.basis) if p.source == v]

    def paths_between(self, s: int, t: int) -> list[int]:
        return [i for i, p in enumerate(self.basis) if p.source == s and p.target == t]

    def label(self, i: int) -> str:
        b = self.basis[i]
        if isinstance(b, Path) and self.quiver is not None:
            return self.quiver.path_name(b)
        return str(b)

    def _key(self):
        return (self.basis, tuple(sorted(self.mult.items())), self.idempotents, self.quiver, self.relations)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, AlgebraTable):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"AlgebraTable(dim={self.dim}, vertices={len(self.idempotents)})"


# ---------------------------------------------------------------------------
# rewriting


class _Rewriter:
    def __init__(self, relations: Sequence[Relation]):
        self.rules: list[tuple[tuple[int, ...], list[tuple[Fraction, Path]]]] = []
        self.leads: dict[tuple[int, ...], int] = {}
        for rel in relations:
            if not rel:
                continue
            lead_c, lead = max(rel, key=lambda t: path_key(t[1]))
            rhs = [(-c / lead_c, p) for c, p in rel if p != lead]
            self.rules.append((lead.arrows, rhs))
        self._memo: dict[Path, dict[Path, Fraction]] = {}

    def find(self, word: tuple[int, ...]):
        """Leftmost occurrence of a leading word: ``(rule_index, position)`` or None."""
        for pos in range(len(word)):
            for r, (lead, _) in enumerate(self.rules):
                if word[pos:pos + len(lead)] == lead:
                    return r, pos
        return None

    def is_reducible_suffix(self, word: tuple[int, ...]) -> bool:
        return any(len(lead) <= len(word) and word[len(word) - len(lead):] == lead for lead, _ in self.rules)

    def rewrite_at(self, p: Path, r: int, pos: int) -> dict[Path, Fraction]:
        lead, rhs = self.rules[r]
        u, v = p.arrows[:pos], p.arrows[pos + len(lead):]
        out: dict[Path, Fraction] = {}
        for c, q in rhs:
            w = Path(p.source, p.target, u + q.arrows + v)
            out[w] = out.get(w, ZERO) + c
        return out

    def normal_form(self, p: Path) -> dict[Path, Fraction]:
        if p in self._memo:
            return self._memo[p]
        hit = self.find(p.arrows)
        if hit is None:
            res = {p: ONE}
        else:
            res = self.reduce_combo(self.rewrite_at(p, *hit))
        self._memo[p] = res
        return res

    def reduce_combo(self, combo: dict[Path, Fraction]) -> dict[Path, Fraction]:
        out: dict[Path, Fraction] = {}
        for q, c in combo.items():
            if not c:
                continue
            for w, d in self.normal_form(q).items():
                out[w] = out.get(w, ZERO) + c * d
        return {w: c for w, c in out.items() if c}

    def check_confluence(self, quiver: Quiver):
        """Resolve every overlap and inclusion ambiguity; raise on the first failure."""
        for (r1, (l1, _)), (r2, (l2, _)) in itertools.product(enumerate(self.rules), repeat=2):
            cases = []
            for k in range(1, min(len(l1), len(l2))):
                if l1[len(l1) - k:] == l2[:k]:
                    word = l1 + l2[k:]
                    cases.append((word, (r1, 0), (r2, len(l1) - k)))
            if r1 != r2:
                for pos in range(len(l1) - len(l2) + 1):
                    if l1[pos:pos + len(l2)] == l2:
                        cases.append((l1, (r1, 0), (r2, pos)))
            for word, (ra, pa), (rb, pb) in cases:
                a0 = quiver.arrows[word[0]].source
                b0 = quiver.arrows[word[-1]].target
                p = Path(a0, b0, word)
                left = self.reduce_combo(self.rewrite_at(p, ra, pa))
                right = self.reduce_combo(self.rewrite_at(p, rb, pb))
                if left != right:
                    names = (quiver.path_name(Path(a0, b0, l1)), quiver.path_name(Path(a0, b0, l2)))
                    raise AlgebraError(
                        f"rewriting is not confluent on the overlap of {names[0]} and {names[1]} "
                        f"(word {quiver.path_name(p)})",
                        pair=names,
                    )


def build_algebra(q: Quiver, relations: Sequence[Relation] = (), max_path_len: int = 8) -> AlgebraTable:
    """Basis and structure constants of ``KQ / (relations)``.

    Raises :class:`AlgebraError` when an irreducible path of length
    ``max_path_len`` exists (the algebra may be infinite-dimensional) or when
    the rewriting system has an unresolvable critical pair.
    """
    if max_path_len < 2:
        raise ValueError("max_path_len must be at least 2")
    rels = tuple(make_relation(r) for r in relations)
    for rel in rels:
        for _, p in rel:
            for x, y in zip(p.arrows, p.arrows[1:]):
                if q.arrows[x].target != q.arrows[y].source:
                    raise AlgebraError("relation contains a path whose arrows do not compose")
    rw = _Rewriter(rels)
    rw.check_confluence(q)

    basis = [Path(v, v, ()) for v in range(q.num_vertices)]
    frontier = list(basis)
    while frontier:
        nxt = []
        for p in frontier:
            for ai, a in enumerate(q.arrows):
                if a.source != p.target:
                    continue
                w = Path(p.source, a.target, p.arrows + (ai,))
                if rw.is_reducible_suffix(w.arrows):
                    continue
                if w.length >= max_path_len:
                    raise AlgebraError(
                        f"path {q.path_name(w)} of length {w.length} is irreducible; "
                        "the algebra may be infinite-dimensional (raise max_path_len if not)"
                    )
                nxt.append(w)
        basis.extend(nxt)
        frontier = nxt
    basis.sort(key=path_key)
    index = {p: i for i, p in enumerate(basis)}
    mult = {}
    for i, p in enumerate(basis):
        for j, r in enumerate(basis):
            w = p.then(r)
            if w is None:
                continue
            nf = rw.normal_form(w)
            mult[(i, j)] = tuple(sorted((index[x], c) for x, c in nf.items()))
    idem = [index[Path(v, v, ())] for v in range(q.num_vertices)]
    alg = AlgebraTable(basis, mult, idem, q, rels)
    diag = validate_algebra(alg)
    if not diag.ok:
        raise AlgebraError(f"constructed table failed validation: {diag[0]}")
    return alg


def opposite_algebra(alg: AlgebraTable) -> AlgebraTable:
    """Same elements, reversed multiplication.  Cached, and an involution on the nose."""
    if alg._opposite is not None:
        return alg._opposite
    is_path = alg.quiver is not None
    if is_path:
        labels = [p.reversed() for p in alg.basis]
        order = sorted(range(alg.dim), key=lambda i: path_key(labels[i]))
    else:
        labels = list(alg.basis)
        order = list(range(alg.dim))
    new_pos = {old: new for new, old in enumerate(order)}
    basis = [labels[i] for i in order]
    mult = {}
    for (i, j), combo in alg.mult.items():
        mult[(new_pos[j], new_pos[i])] = tuple(sorted((new_pos[k], c) for k, c in combo))
    idem = [new_pos[i] for i in alg.idempotents]
    quiver = alg.quiver.opposite() if is_path else None
    rels = tuple(make_relation((c, p.reversed()) for c, p in rel) for rel in alg.relations)
    op = AlgebraTable(basis, mult, idem, quiver, rels)
    diag = validate_algebra(op)
    if not diag.ok:
        raise AlgebraError(f"opposite algebra failed validation: {diag[0]}")
    op._opposite = alg
    alg._opposite = op
    return op


def validate_algebra(alg: AlgebraTable) -> Diagnostics:
    """Check idempotent relations, unit, and associativity on every basis triple."""
    diag = Diagnostics()
    n = alg.dim
    for a, i in enumerate(alg.idempotents):
        for b, j in enumerate(alg.idempotents):
            got = dict(alg.product(i, j))
            want = {i: ONE} if a == b else {}
            if got != want:
                kind = "not idempotent" if a == b else f"not orthogonal to {alg.label(j)}"
                diag.append(f"idempotent failure at {alg.label(i)}: {kind}")
    unit = {i: ONE for i in alg.idempotents}
    for x in range(n):
        if alg.multiply(unit, {x: ONE}) != {x: ONE} or alg.multiply({x: ONE}, unit) != {x: ONE}:
            diag.append(f"idempotents do not sum to 1 on {alg.label(x)}")
    for x in range(n):
        for y in range(n):
            xy = dict(alg.product(x, y))
            for z in range(n):
                left = alg.multiply(xy, {z: ONE})
                right = alg.multiply({x: ONE}, dict(alg.product(y, z)))
                if left != right:
                    diag.append(
                        f"associativity failure on ({alg.label(x)}, {alg.label(y)}, {alg.label(z)})"
                    )
                    return diag
    return diag
