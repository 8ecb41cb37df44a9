"""Graphs of groups in Serre's convention.

Every geometric edge is stored as two oriented half-edges ``e`` and ``~e``
with ``reverse(e) = ~e``. Half-edge ``e`` carries the edge group and the
monomorphism ``alpha_e: G_e -> G_source(e)``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .abelian import AbHom, FgAbGroup, IllDefinedHom, ab_is_injective

REVERSE_PREFIX = "~"


class GraphFormatError(ValueError):
    pass


def reverse_id(edge_id: str) -> str:
    if edge_id.startswith(REVERSE_PREFIX):
        return edge_id[len(REVERSE_PREFIX):]
    return REVERSE_PREFIX + edge_id


@dataclass(frozen=True)
class Edge:
    id: str
    reverse: str
    source: str
    target: str
    group: FgAbGroup
    alpha: AbHom  # G_e -> G_source


class GraphOfGroups:
    """A finite graph of finitely generated abelian groups.

    The constructor performs no validation beyond shape so that :func:`validate`
    can report every problem at once; use :func:`load` or :meth:`build` for
    checked construction.
    """

    def __init__(self, vertices: Mapping[str, FgAbGroup], edges: Sequence[Edge]):
        self.vertices: Dict[str, FgAbGroup] = dict(sorted(vertices.items()))
        self.edges: Dict[str, Edge] = {e.id: e for e in sorted(edges, key=lambda e: e.id)}

    @classmethod
    def build(cls, vertices: Mapping[str, FgAbGroup], edges) -> "GraphOfGroups":
        """Build from geometric edges ``(id, from, to, G_e, alpha_from, alpha_to)``.

        ``alpha_from``/``alpha_to`` are integer matrices (rows = target generators).
        """
        half = []
        for eid, src, dst, grp, a_from, a_to in edges:
            if src not in vertices or dst not in vertices:
                raise GraphFormatError(f"edge {eid} has an unknown endpoint")
            rid = reverse_id(eid)
            half.append(Edge(eid, rid, src, dst, grp, AbHom(grp, vertices[src], a_from)))
            half.append(Edge(rid, eid, dst, src, grp, AbHom(grp, vertices[dst], a_to)))
        g = cls(vertices, half)
        report = validate(g)
        if not report.ok:
            raise GraphFormatError("; ".join(report.problems))
        return g

    @cached_property
    def tree(self) -> "SpanningTree":
        return maximal_tree(self)

    def edge(self, eid: str) -> Edge:
        return self.edges[eid]

    def out_edges(self, v: str) -> List[Edge]:
        return [e for e in self.edges.values() if e.source == v]

    def pairs(self) -> List[str]:
        """One id per geometric edge: the lexicographically smaller half-edge."""
        return sorted(e.id for e in self.edges.values() if e.id < e.reverse)

    def __repr__(self):
        return f"GraphOfGroups({len(self.vertices)} vertices, {len(self.pairs())} edges)"


@dataclass
class ValidationReport:
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self):
        return "valid" if self.ok else "invalid:\n" + "\n".join(f"  - {p}" for p in self.problems)


def validate(g: GraphOfGroups) -> ValidationReport:
    rep = ValidationReport()
    if not g.vertices:
        rep.problems.append("graph has no vertices")
        return rep
    for e in g.edges.values():
        if e.source not in g.vertices or e.target not in g.vertices:
            rep.problems.append(f"edge {e.id}: unknown endpoint")
            continue
        r = g.edges.get(e.reverse)
        if r is None:
            rep.problems.append(f"edge {e.id}: reverse {e.reverse} missing")
            continue
        if r.id == e.id:
            rep.problems.append(f"edge {e.id}: reverse is a fixed point")
        if r.reverse != e.id:
            rep.problems.append(f"edge {e.id}: reverse is not an involution")
        if r.source != e.target or r.target != e.source:
            rep.problems.append(f"edge {e.id}: endpoints of reverse do not match")
        if r.group != e.group:
            rep.problems.append(f"edge {e.id}: G_e differs from the group of its reverse")
        if e.alpha.domain != e.group or e.alpha.codomain != g.vertices[e.source]:
            rep.problems.append(f"edge {e.id}: alpha has the wrong domain or codomain")
        elif not ab_is_injective(e.alpha):
            rep.problems.append(f"edge {e.id}: non-injective edge map")
    if not _connected(g):
        rep.problems.append("graph is disconnected")
    return rep


def _connected(g: GraphOfGroups) -> bool:
    start = next(iter(g.vertices))
    seen = {start}
    todo = [start]
    adj: Dict[str, List[str]] = {v: [] for v in g.vertices}
    for e in g.edges.values():
        if e.source in adj and e.target in adj:
            adj[e.source].append(e.target)
            adj[e.target].append(e.source)
    while todo:
        v = todo.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return len(seen) == len(g.vertices)


# --- spanning trees -----------------------------------------------------------

@dataclass(frozen=True)
class SpanningTree:
    graph: GraphOfGroups = field(repr=False, compare=False)
    root: str
    oriented: Tuple[str, ...]     # O(T): one half-edge per tree pair, pointing away from root
    non_tree: Tuple[str, ...]     # positive half-edges e_1, ..., e_n

    @cached_property
    def tree_edges(self) -> FrozenSet[str]:
        return frozenset(self.oriented) | frozenset(self.rev(e) for e in self.oriented)

    @cached_property
    def _parent(self) -> Dict[str, Optional[str]]:
        # vertex -> half-edge from its parent into it
        parent: Dict[str, Optional[str]] = {self.root: None}
        for eid in self.oriented:
            parent[self.graph.edges[eid].target] = eid
        return parent

    @cached_property
    def depth(self) -> Dict[str, int]:
        d = {}
        for v in self.graph.vertices:
            n, u = 0, v
            while self._parent[u] is not None:
                u = self.graph.edges[self._parent[u]].source
                n += 1
            d[v] = n
        return d

    def rev(self, eid: str) -> str:
        return self.graph.edges[eid].reverse

    def is_tree_edge(self, eid: str) -> bool:
        return eid in self.tree_edges

    def geodesic(self, u: str, w: str) -> List[str]:
        """Half-edges of the tree path from u to w."""
        up: List[str] = []
        down: List[str] = []
        edges = self.graph.edges
        du, dw = self.depth[u], self.depth[w]
        while du > dw:
            e = self._parent[u]
            up.append(self.rev(e))
            u = edges[e].source
            du -= 1
        while dw > du:
            e = self._parent[w]
            down.append(e)
            w = edges[e].source
            dw -= 1
        while u != w:
            e1, e2 = self._parent[u], self._parent[w]
            up.append(self.rev(e1))
            down.append(e2)
            u, w = edges[e1].source, edges[e2].source
        return up + down[::-1]

    def generator_index(self, eid: str) -> int:
        """Signed 1-based index of a non-tree half-edge as a free generator."""
        if eid in self.non_tree:
            return self.non_tree.index(eid) + 1
        return -(self.non_tree.index(self.rev(eid)) + 1)

    @classmethod
    def from_pairs(cls, graph: GraphOfGroups, pairs, root: str) -> "SpanningTree":
        """Spanning tree with given geometric tree edges, oriented away from ``root``."""
        wanted = {min(p, graph.edges[p].reverse) for p in pairs}
        oriented = []
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for e in sorted(graph.out_edges(v), key=lambda e: (min(e.id, e.reverse), e.id)):
                if min(e.id, e.reverse) in wanted and e.target not in seen:
                    seen.add(e.target)
                    oriented.append(e.id)
                    queue.append(e.target)
        if len(seen) != len(graph.vertices) or len(oriented) != len(wanted):
            raise GraphFormatError("given edges do not form a spanning tree")
        non_tree = tuple(p for p in graph.pairs() if p not in wanted)
        return cls(graph, root, tuple(oriented), non_tree)


def maximal_tree(g: GraphOfGroups) -> SpanningTree:
    """Breadth-first tree from the smallest vertex id, edges scanned in id order."""
    root = min(g.vertices)
    seen = {root}
    chosen = []
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in sorted(g.out_edges(v), key=lambda e: (min(e.id, e.reverse), e.id)):
            if e.target not in seen:
                seen.add(e.target)
                chosen.append(e.id)
                queue.append(e.target)
    return SpanningTree.from_pairs(g, chosen, root)


# --- file format --------------------------------------------------------------

def _parse_group(obj, where) -> FgAbGroup:
    try:
        rank = obj.get("rank", 0)
        torsion = obj.get("torsion", [])
        if not isinstance(rank, int) or rank < 0 or not all(isinstance(d, int) for d in torsion):
            raise TypeError
        return FgAbGroup(rank, tuple(torsion))
    except (AttributeError, TypeError):
        raise GraphFormatError(f"{where}: bad group description {obj!r}") from None


def _check_id(x, where) -> str:
    if not isinstance(x, str) or not x or any(c.isspace() for c in x) or not x.isascii():
        raise GraphFormatError(f"{where}: ids must be nonempty ASCII strings without whitespace")
    if x.startswith(REVERSE_PREFIX) or "[" in x:
        raise GraphFormatError(f"{where}: ids may not start with '~' or contain '['")
    return x


def _matrix(obj, where):
    if not isinstance(obj, list) or not all(
            isinstance(r, list) and all(isinstance(x, int) for x in r) for r in obj):
        raise GraphFormatError(f"{where}: matrices are lists of integer rows")
    return tuple(tuple(r) for r in obj)


def from_dict(data) -> GraphOfGroups:
    if not isinstance(data, dict) or "vertices" not in data:
        raise GraphFormatError("top level must be an object with 'vertices' and 'edges'")
    if not isinstance(data["vertices"], list) or not isinstance(data.get("edges", []), list):
        raise GraphFormatError("'vertices' and 'edges' must be lists")
    if not all(isinstance(x, dict) for x in data["vertices"] + data.get("edges", [])):
        raise GraphFormatError("vertices and edges must be objects")
    vertices: Dict[str, FgAbGroup] = {}
    for i, v in enumerate(data["vertices"]):
        vid = _check_id(v.get("id"), f"vertices[{i}]")
        if vid in vertices:
            raise GraphFormatError(f"vertices[{i}]: duplicate id {vid}")
        vertices[vid] = _parse_group(v.get("group", {}), f"vertex {vid}")
    edges = []
    seen = set()
    for i, e in enumerate(data.get("edges", [])):
        eid = _check_id(e.get("id"), f"edges[{i}]")
        if eid in seen:
            raise GraphFormatError(f"edges[{i}]: duplicate id {eid}")
        seen.add(eid)
        src, dst = e.get("from"), e.get("to")
        grp = _parse_group(e.get("group", {}), f"edge {eid}")
        edges.append((eid, src, dst, grp, _matrix(e.get("alpha_from"), f"edge {eid}"),
                      _matrix(e.get("alpha_to"), f"edge {eid}")))
    try:
        return GraphOfGroups.build(vertices, edges)
    except GraphFormatError:
        raise
    except (IllDefinedHom, ValueError) as exc:
        raise GraphFormatError(str(exc)) from None


def load(path) -> GraphOfGroups:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return from_dict(data)


def to_dict(g: GraphOfGroups) -> dict:
    def grp(x: FgAbGroup):
        return {"rank": x.rank, "torsion": list(x.torsion)}
    edges = []
    for pid in g.pairs():
        e = g.edges[pid]
        r = g.edges[e.reverse]
        edges.append({"id": pid, "from": e.source, "to": e.target, "group": grp(e.group),
                      "alpha_from": [list(row) for row in e.alpha.matrix],
                      "alpha_to": [list(row) for row in r.alpha.matrix]})
    return {"vertices": [{"id": v, "group": grp(G)} for v, G in g.vertices.items()],
            "edges": edges}
