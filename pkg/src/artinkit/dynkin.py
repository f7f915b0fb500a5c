"""Edge-labeled Coxeter diagrams: parsing, classification, subgraph queries, foldings.

A diagram here is a finite simple graph whose edges carry an integer label
>= 3 or the symbol inf.  An absent edge means label 2 (the two generators
commute); label inf means no relation between them.  Vertex declaration
order is significant downstream: it fixes the generator order used for
ShortLex normal forms, so a diagram is *not* identified with its isomorphism
class.  `classify` is the isomorphism-invariant view.

Text format (line oriented, `#` starts a comment, `;` also separates
statements):

    vertices a b c
    edge a b 3
    edge b c 4

JSON mirror: {"vertices": ["a","b","c"], "edges": [["a","b",3],["b","c",4]]}
with "inf" for the infinite label.  Emission is sorted (vertices
lexicographic, edges lexicographic) so emitted files are byte-stable; note
that re-parsing an emitted file therefore yields lexicographic declaration
order, not the original one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    EdgeNotInDiagram,
    InfiniteLabel,
    InvalidFolding,
    LabelError,
    NotATree,
    NotConnected,
    ParseError,
    SubgraphNotInDiagram,
)

INFINITY = math.inf


def _label_key(m):
    # sort/emit helper: infinite label prints as "inf"
    return "inf" if m == INFINITY else int(m)


@dataclass(frozen=True)
class DynkinDiagram:
    """Immutable labeled diagram. `vertices` keeps declaration order."""

    vertices: tuple
    edges: tuple  # tuples (u, v, label) with u before v in declaration order

    def __post_init__(self):
        names = self.vertices
        if len(set(names)) != len(names):
            raise ValueError("duplicate vertex names")
        index = {v: i for i, v in enumerate(names)}
        adj = {v: {} for v in names}
        canon = []
        for (u, v, m) in self.edges:
            if u not in index or v not in index:
                raise ValueError(f"edge ({u},{v}) uses unknown vertex")
            if u == v:
                raise ValueError(f"loop at {u}")
            if m != INFINITY and (not isinstance(m, int) or m < 3):
                raise LabelError(f"bad label {m!r} on ({u},{v})")
            if v in adj[u]:
                raise ValueError(f"duplicate edge ({u},{v})")
            adj[u][v] = m
            adj[v][u] = m
            if index[u] > index[v]:
                u, v = v, u
            canon.append((u, v, m))
        canon.sort(key=lambda e: (index[e[0]], index[e[1]]))
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_adj", adj)

    # -- basic queries ---------------------------------------------------

    @property
    def rank(self):
        return len(self.vertices)

    def has_vertex(self, v):
        return v in self._index

    def neighbors(self, v):
        if v not in self._adj:
            raise SubgraphNotInDiagram(f"unknown vertex {v!r}")
        nbrs = self._adj[v]
        return tuple(u for u in self.vertices if u in nbrs)

    def degree(self, v):
        return len(self.neighbors(v))

    def label(self, u, v):
        """Coxeter exponent m(u, v): edge label, or 2 when no edge joins them."""
        if u not in self._adj or v not in self._adj:
            raise SubgraphNotInDiagram(f"unknown vertex in ({u!r},{v!r})")
        if u == v:
            raise ValueError("label(u, u) is undefined")
        return self._adj[u].get(v, 2)

    def has_edge(self, u, v):
        return v in self._adj.get(u, {})

    def induced(self, subset):
        """Induced subdiagram; vertex order inherited from this diagram."""
        sub = set(subset)
        missing = sub - set(self.vertices)
        if missing:
            raise SubgraphNotInDiagram(f"vertices not in diagram: {sorted(missing)}")
        verts = tuple(v for v in self.vertices if v in sub)
        edges = tuple(e for e in self.edges if e[0] in sub and e[1] in sub)
        return DynkinDiagram(verts, edges)

    def components(self):
        """Connected components as tuples of vertices in declaration order."""
        seen = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            stack, comp = [v], set()
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                stack.extend(self._adj[x])
            seen |= comp
            comps.append(tuple(u for u in self.vertices if u in comp))
        return comps

    def is_connected(self):
        return len(self.components()) <= 1

    def is_tree(self):
        return self.is_connected() and len(self.edges) == len(self.vertices) - 1

    def path_order(self):
        """Vertices in path order if the diagram is a simple path, else None."""
        n = self.rank
        if n == 0 or not self.is_connected():
            return None
        if n == 1:
            return list(self.vertices)
        degs = {v: self.degree(v) for v in self.vertices}
        ends = [v for v in self.vertices if degs[v] == 1]
        if len(ends) != 2 or any(d > 2 for d in degs.values()):
            return None
        order = [ends[0]]
        prev = None
        while len(order) < n:
            nxt = [u for u in self.neighbors(order[-1]) if u != prev]
            if len(nxt) != 1:
                return None
            prev = order[-1]
            order.append(nxt[0])
        return order

    def max_label(self):
        return max((m for (_, _, m) in self.edges), default=2)

    # -- serialization ---------------------------------------------------

    def to_text(self):
        lines = ["vertices " + " ".join(sorted(self.vertices))]
        for (u, v, m) in sorted(
            ((min(u, v), max(u, v), m) for (u, v, m) in self.edges)
        ):
            lines.append(f"edge {u} {v} {_label_key(m)}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "vertices": sorted(self.vertices),
            "edges": sorted(
                [min(u, v), max(u, v), _label_key(m)] for (u, v, m) in self.edges
            ),
        }


def diagram(vertices, edges=()):
    """Convenience constructor: diagram("abc", [("a","b",3), ...])."""
    verts = tuple(vertices)
    return DynkinDiagram(verts, tuple(edges))


def path_diagram(names, labels):
    """Path with the given vertex names and consecutive edge labels."""
    names = list(names)
    labels = list(labels)
    if len(labels) != len(names) - 1:
        raise ValueError("need one label per consecutive pair")
    edges = [(names[i], names[i + 1], labels[i]) for i in range(len(labels))]
    return DynkinDiagram(tuple(names), tuple(edges))


def cycle_diagram(names, labels):
    """Cycle with consecutive labels; labels[i] joins names[i], names[i+1 mod n]."""
    names = list(names)
    n = len(names)
    if len(labels) != n:
        raise ValueError("need one label per cycle edge")
    edges = [(names[i], names[(i + 1) % n], labels[i]) for i in range(n)]
    return DynkinDiagram(tuple(names), tuple(edges))


# -- parsing ---------------------------------------------------------------


def _parse_label(tok, lineno):
    if tok == "inf":
        return INFINITY
    try:
        m = int(tok)
    except ValueError:
        raise ParseError(lineno, f"label must be an integer >= 3 or 'inf', got {tok!r}")
    if m < 3:
        raise LabelError(
            f"line {lineno}: explicit label {m} is not allowed "
            "(label 2 means: omit the edge)"
        )
    return m


def parse_diagram(text):
    """Parse the text format or its JSON mirror into a DynkinDiagram."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(stripped)
    verts = []
    vset = set()
    edges = []
    eset = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for stmt in line.split(";"):
            toks = stmt.split()
            if not toks:
                continue
            if toks[0] == "vertices":
                if len(toks) < 2:
                    raise ParseError(lineno, "vertices line needs at least one name")
                for name in toks[1:]:
                    if name in vset:
                        raise ParseError(lineno, f"duplicate vertex {name!r}")
                    vset.add(name)
                    verts.append(name)
            elif toks[0] == "edge":
                if len(toks) != 4:
                    raise ParseError(lineno, "edge line needs: edge <u> <v> <label>")
                u, v, tok = toks[1], toks[2], toks[3]
                if u not in vset or v not in vset:
                    raise ParseError(lineno, f"edge ({u},{v}) uses undeclared vertex")
                if u == v:
                    raise ParseError(lineno, f"loop edge at {u!r}")
                key = frozenset((u, v))
                if key in eset:
                    raise ParseError(lineno, f"duplicate edge ({u},{v})")
                eset.add(key)
                edges.append((u, v, _parse_label(tok, lineno)))
            else:
                raise ParseError(lineno, f"unknown directive {toks[0]!r}")
    return DynkinDiagram(tuple(verts), tuple(edges))


def _parse_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, f"bad JSON: {exc.msg}")
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ParseError(1, "JSON diagram needs a 'vertices' key")
    verts = obj["vertices"]
    if not isinstance(verts, list) or not all(isinstance(v, str) for v in verts):
        raise ParseError(1, "'vertices' must be a list of strings")
    if len(set(verts)) != len(verts):
        raise ParseError(1, "duplicate vertex in JSON 'vertices'")
    vset = set(verts)
    edges = []
    eset = set()
    for entry in obj.get("edges", []):
        if not (isinstance(entry, list) and len(entry) == 3):
            raise ParseError(1, f"edge entry must be [u, v, label], got {entry!r}")
        u, v, m = entry
        if u not in vset or v not in vset:
            raise ParseError(1, f"edge ({u},{v}) uses undeclared vertex")
        if u == v:
            raise ParseError(1, f"loop edge at {u!r}")
        key = frozenset((u, v))
        if key in eset:
            raise ParseError(1, f"duplicate edge ({u},{v})")
        eset.add(key)
        if m == "inf":
            label = INFINITY
        elif isinstance(m, int) and not isinstance(m, bool):
            if m < 3:
                raise LabelError(
                    f"explicit label {m} is not allowed (label 2 means: omit the edge)"
                )
            label = m
        else:
            raise ParseError(1, f"label must be an integer >= 3 or 'inf', got {m!r}")
        edges.append((u, v, label))
    return DynkinDiagram(tuple(verts), tuple(edges))


# -- classification --------------------------------------------------------


@dataclass(frozen=True)
class DiagramClass:
    tag: str  # "Spherical" | "Affine" | "Other"
    name: str | None = None  # catalog name, e.g. "A(3)" or "AffC(2)"

    def __str__(self):
        return f"{self.tag} {self.name}" if self.name else self.tag

    @property
    def is_spherical(self):
        return self.tag == "Spherical"

    @property
    def is_affine(self):
        return self.tag == "Affine"


def _names(n):
    return [f"x{i}" for i in range(n)]


def _path(labels):
    return path_diagram(_names(len(labels) + 1), labels)


def _tripod(leg_a, leg_b, leg_c, labels=3):
    """Tree: center with three paths of the given lengths, all labels 3."""
    verts = ["c"]
    edges = []
    for leg, n in (("a", leg_a), ("b", leg_b), ("c", leg_c)):
        prev = "c"
        for i in range(n):
            name = f"{leg}{i}"
            verts.append(name)
            edges.append((prev, name, labels))
            prev = name
    return DynkinDiagram(tuple(verts), tuple(edges))


def _spherical_entries(n):
    """Catalog of connected spherical diagrams with n vertices (n >= 3)."""
    out = []
    out.append((f"A({n})", _path([3] * (n - 1))))
    out.append((f"B({n})", _path([4] + [3] * (n - 2))))
    if n >= 4:
        out.append((f"D({n})", _tripod(1, 1, n - 3)))
    if n == 6:
        out.append(("E(6)", _tripod(1, 2, 2)))
    if n == 7:
        out.append(("E(7)", _tripod(1, 2, 3)))
    if n == 8:
        out.append(("E(8)", _tripod(1, 2, 4)))
    if n == 4:
        out.append(("F(4)", _path([3, 4, 3])))
    if n == 3:
        out.append(("H(3)", _path([5, 3])))
    if n == 4:
        out.append(("H(4)", _path([5, 3, 3])))
    return out


def _affine_entries(k):
    """Catalog of connected affine diagrams with k vertices (rank k-1)."""
    n = k - 1  # affine type subscript
    out = []
    if n >= 2:
        out.append((f"AffA({n})", cycle_diagram(_names(n + 1), [3] * (n + 1))))
    if n >= 3:
        # double leaf at one end, label-4 edge at the other
        verts = ["l0", "l1", "h"] + [f"p{i}" for i in range(n - 3)] + ["z"]
        chain = ["h"] + [f"p{i}" for i in range(n - 3)] + ["z"]
        edges = [("l0", "h", 3), ("l1", "h", 3)]
        for a, b in zip(chain, chain[1:]):
            edges.append((a, b, 3))
        edges[-1] = (edges[-1][0], edges[-1][1], 4)
        out.append((f"AffB({n})", DynkinDiagram(tuple(verts), tuple(edges))))
    if n >= 2:
        out.append((f"AffC({n})", _path([4] + [3] * (n - 2) + [4])))
    if n == 4:
        star = DynkinDiagram(
            ("c", "u0", "u1", "u2", "u3"),
            tuple(("c", f"u{i}", 3) for i in range(4)),
        )
        out.append(("AffD(4)", star))
    if n >= 5:
        verts = ["l0", "l1", "h"] + [f"p{i}" for i in range(n - 5)] + ["k", "r0", "r1"]
        chain = ["h"] + [f"p{i}" for i in range(n - 5)] + ["k"]
        edges = [("l0", "h", 3), ("l1", "h", 3), ("r0", "k", 3), ("r1", "k", 3)]
        for a, b in zip(chain, chain[1:]):
            edges.append((a, b, 3))
        out.append((f"AffD({n})", DynkinDiagram(tuple(verts), tuple(edges))))
    if n == 6:
        out.append(("AffE(6)", _tripod(2, 2, 2)))
    if n == 7:
        out.append(("AffE(7)", _tripod(1, 3, 3)))
    if n == 8:
        out.append(("AffE(8)", _tripod(1, 2, 5)))
    if n == 4:
        out.append(("AffF(4)", _path([3, 3, 4, 3])))
    if n == 2:
        out.append(("AffG(2)", _path([6, 3])))
    return out


def _degree_label_signature(d):
    degs = sorted(d.degree(v) for v in d.vertices)
    labels = sorted(_label_key(m) if m == INFINITY else m for (_, _, m) in d.edges)
    return degs, labels


def is_isomorphic(d1, d2):
    """Label-preserving graph isomorphism (backtracking; fine below ~12 vertices)."""
    if d1.rank != d2.rank or len(d1.edges) != len(d2.edges):
        return False
    if _degree_label_signature(d1) != _degree_label_signature(d2):
        return False
    # order d1 vertices to keep the search connected where possible
    order = []
    seen = set()
    for start in sorted(d1.vertices, key=lambda v: -d1.degree(v)):
        if start in seen:
            continue
        stack = [start]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            order.append(x)
            stack.extend(d1.neighbors(x))

    def extend(mapping, used, i):
        if i == len(order):
            return True
        v = order[i]
        for w in d2.vertices:
            if w in used:
                continue
            if d1.degree(v) != d2.degree(w):
                continue
            ok = True
            for u, x in mapping.items():
                if d1.label(v, u) != d2.label(w, x):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = w
            used.add(w)
            if extend(mapping, used, i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return extend({}, set(), 0)


def classify(d):
    """Isomorphism type of a connected finite-label diagram.

    Returns a DiagramClass tagged Spherical/Affine with the catalog name, or
    Other. Raises NotConnected / InfiniteLabel for diagrams outside the
    contract.
    """
    if d.rank == 0:
        raise NotConnected("empty diagram")
    if not d.is_connected():
        raise NotConnected("diagram is not connected")
    for (_, _, m) in d.edges:
        if m == INFINITY:
            raise InfiniteLabel("classification requires finite labels")
    n = d.rank
    if n == 1:
        return DiagramClass("Spherical", "A(1)")
    if n == 2:
        m = d.label(*d.vertices)  # connected, so the edge exists
        if m == 3:
            return DiagramClass("Spherical", "A(2)")
        if m == 4:
            return DiagramClass("Spherical", "B(2)")
        return DiagramClass("Spherical", f"I2({m})")
    for name, entry in _spherical_entries(n):
        if is_isomorphic(d, entry):
            return DiagramClass("Spherical", name)
    for name, entry in _affine_entries(n):
        if is_isomorphic(d, entry):
            return DiagramClass("Affine", name)
    return DiagramClass("Other")


def is_spherical(d):
    """True iff every connected component has finite Coxeter group."""
    if d.rank == 0:
        return True
    if any(m == INFINITY for (_, _, m) in d.edges):
        return False
    return all(classify(d.induced(comp)).is_spherical for comp in d.components())


def is_locally_reducible(d):
    """True iff no connected 3-vertex induced subdiagram is spherical.

    The connected spherical rank-3 diagrams are exactly the (3,m)-paths with
    m in {3,4,5}, so this is a direct scan over vertex triples.
    """
    for triple in combinations(d.vertices, 3):
        sub = d.induced(triple)
        if len(sub.edges) != 2:
            continue  # triangle (never spherical) or disconnected
        labels = sorted(
            m if m != INFINITY else INFINITY for (_, _, m) in sub.edges
        )
        if labels[0] == 3 and labels[1] in (3, 4, 5):
            return False
    return True


def is_admissible(d, sub):
    """Separation test: any x in `sub` separating two of its vertices inside
    the induced subgraph must also separate them in the whole diagram."""
    subset = list(dict.fromkeys(sub))
    missing = set(subset) - set(d.vertices)
    if missing:
        raise SubgraphNotInDiagram(f"vertices not in diagram: {sorted(missing)}")
    induced = d.induced(subset)
    if not induced.is_connected():
        raise ValueError("sub must induce a connected subgraph")
    for x in subset:
        rest = [v for v in subset if v != x]
        if len(rest) < 2:
            continue
        comp_sub = _component_index(induced, x)
        comp_amb = _component_index(d, x)
        for u, v in combinations(rest, 2):
            if comp_sub[u] != comp_sub[v] and comp_amb[u] == comp_amb[v]:
                return False
    return True


def _component_index(d, removed):
    """Map vertex -> component id of the diagram minus one vertex."""
    comp = {}
    cid = 0
    for v in d.vertices:
        if v == removed or v in comp:
            continue
        stack = [v]
        while stack:
            x = stack.pop()
            if x == removed or x in comp:
                continue
            comp[x] = cid
            stack.extend(u for u in d.neighbors(x) if u != removed)
        cid += 1
    return comp


def smallest_subtree(d, verts):
    """Smallest subtree of a tree diagram containing the given vertices."""
    if not d.is_tree():
        raise NotATree("smallest_subtree requires a tree diagram")
    vs = list(dict.fromkeys(verts))
    missing = set(vs) - set(d.vertices)
    if missing:
        raise SubgraphNotInDiagram(f"vertices not in diagram: {sorted(missing)}")
    if not vs:
        raise ValueError("need at least one vertex")
    anchor = vs[0]
    parent = {anchor: None}
    stack = [anchor]
    while stack:
        x = stack.pop()
        for u in d.neighbors(x):
            if u not in parent:
                parent[u] = x
                stack.append(u)
    keep = set()
    for v in vs:
        x = v
        while x is not None and x not in keep:
            keep.add(x)
            x = parent[x]
    return d.induced(keep)


def cut_components(d, cut_edges):
    """Components of the diagram minus the given edges.

    Each returned component is a subdiagram on its vertices with the cut
    edges removed (for trees this coincides with the induced subdiagram).
    """
    cuts = set()
    for (u, v) in cut_edges:
        if not (d.has_vertex(u) and d.has_vertex(v)) or not d.has_edge(u, v):
            raise EdgeNotInDiagram(f"({u},{v}) is not an edge of the diagram")
        cuts.add(frozenset((u, v)))
    adj = {
        v: [u for u in d.neighbors(v) if frozenset((u, v)) not in cuts]
        for v in d.vertices
    }
    seen = set()
    comps = []
    for v in d.vertices:
        if v in seen:
            continue
        stack, comp = [v], set()
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x])
        seen |= comp
        verts = tuple(u for u in d.vertices if u in comp)
        edges = tuple(
            e for e in d.edges
            if e[0] in comp and e[1] in comp and frozenset((e[0], e[1])) not in cuts
        )
        comps.append(DynkinDiagram(verts, edges))
    return comps


# -- foldings ----------------------------------------------------------------


@dataclass(frozen=True)
class SpecialFolding:
    """Vertex-to-vertex map between diagrams, candidate for a special folding."""

    source: DynkinDiagram
    target: DynkinDiagram
    vertex_map: tuple  # ((source_vertex, target_vertex), ...)

    @property
    def mapping(self):
        return dict(self.vertex_map)

    def fiber(self, target_vertex):
        m = self.mapping
        return tuple(v for v in self.source.vertices if m.get(v) == target_vertex)


@dataclass(frozen=True)
class FoldingReport:
    valid: bool
    problems: tuple
    nontrivial_fibers: tuple  # fibers with >= 2 source vertices

    def __bool__(self):
        return self.valid


def identity_folding(d):
    return SpecialFolding(d, d, tuple((v, v) for v in d.vertices))


def validate_folding(f):
    """Check the special-folding conditions; report problems and folded fibers.

    Conditions: the vertex map is total and surjective; every source edge
    maps to a target edge with the same label (in particular adjacent
    vertices are never identified); and for every target edge (x, y) every
    vertex of the fiber of x is adjacent in the source to every vertex of
    the fiber of y, again with matching label.
    """
    problems = []
    m = f.mapping
    src, tgt = f.source, f.target
    for v in src.vertices:
        if v not in m:
            problems.append(f"vertex {v!r} has no image")
        elif not tgt.has_vertex(m[v]):
            problems.append(f"image {m[v]!r} of {v!r} is not a target vertex")
    extra = set(m) - set(src.vertices)
    for v in sorted(extra):
        problems.append(f"map defined on {v!r} which is not a source vertex")
    if not problems:
        hit = set(m.values())
        for w in tgt.vertices:
            if w not in hit:
                problems.append(f"target vertex {w!r} has empty fiber")
        for (u, v, lab) in src.edges:
            fu, fv = m[u], m[v]
            if fu == fv:
                problems.append(f"edge ({u},{v}) collapses onto {fu!r}")
            elif not tgt.has_edge(fu, fv):
                problems.append(f"edge ({u},{v}) maps to non-edge ({fu},{fv})")
            elif tgt.label(fu, fv) != lab:
                problems.append(
                    f"edge ({u},{v}) label {_label_key(lab)} != target label "
                    f"{_label_key(tgt.label(fu, fv))}"
                )
        for (x, y, lab) in tgt.edges:
            for u in src.vertices:
                if m.get(u) != x:
                    continue
                for v in src.vertices:
                    if m.get(v) != y:
                        continue
                    if not src.has_edge(u, v):
                        problems.append(
                            f"fibers of edge ({x},{y}) miss source edge ({u},{v})"
                        )
                    elif src.label(u, v) != lab:
                        problems.append(
                            f"source edge ({u},{v}) label mismatch on fiber of ({x},{y})"
                        )
    fibers = []
    for w in tgt.vertices:
        fib = f.fiber(w)
        if len(fib) >= 2:
            fibers.append(fib)
    return FoldingReport(not problems, tuple(problems), tuple(fibers))


def is_folded_subgraph(f, subset):
    """True iff the folding is non-injective on the given source vertices."""
    m = f.mapping
    subset = list(subset)
    images = [m[v] for v in subset]
    return len(set(images)) < len(subset)


def quotient_folding(d, groups):
    """Build the quotient diagram identifying each group of vertices.

    `groups` is a list of disjoint vertex tuples (singletons may be
    omitted). Raises InvalidFolding when the result is not a special
    folding (e.g. adjacent vertices merged, or fiber adjacency incomplete).
    """
    owner = {}
    for grp in groups:
        for v in grp:
            if not d.has_vertex(v):
                raise SubgraphNotInDiagram(f"unknown vertex {v!r}")
            if v in owner:
                raise ValueError(f"vertex {v!r} in two groups")
            owner[v] = grp
    fibers = []
    done = set()
    for v in d.vertices:
        if v in done:
            continue
        grp = owner.get(v, (v,))
        fibers.append(tuple(u for u in d.vertices if u in grp))
        done.update(grp)
    name_of = {}
    for fib in fibers:
        label = "+".join(fib)
        for v in fib:
            name_of[v] = label
    tverts = []
    for fib in fibers:
        tverts.append(name_of[fib[0]])
    tedges = {}
    for (u, v, lab) in d.edges:
        a, b = name_of[u], name_of[v]
        if a == b:
            raise InvalidFolding(f"cannot identify adjacent vertices {u!r}, {v!r}")
        key = (a, b) if tverts.index(a) < tverts.index(b) else (b, a)
        if key in tedges and tedges[key] != lab:
            raise InvalidFolding(f"label conflict on target edge {key}")
        tedges[key] = lab
    target = DynkinDiagram(
        tuple(tverts), tuple((a, b, lab) for (a, b), lab in tedges.items())
    )
    fold = SpecialFolding(d, target, tuple((v, name_of[v]) for v in d.vertices))
    report = validate_folding(fold)
    if not report:
        raise InvalidFolding("; ".join(report.problems))
    return fold
