"""Finite balls in the Bass-Serre tree and in the universal cover of the graph.

A vertex of the Bass-Serre tree is a coset ``g G_v``. Writing ``g`` as a path
from the base vertex in normal form, the coset is the normal form with its
final vertex element dropped, which gives an exact key for duplicate
detection. Neighbours of ``g G_v`` are ``g r e G_{target(e)}`` for edges ``e``
leaving ``v`` and canonical representatives ``r`` of ``G_v / alpha_e(G_e)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import linalg
from .abelian import ab_torsion_subgroup, coset_reps
from .gog import GraphOfGroups, SpanningTree
from .rationalize import RationalizationContext, phi, project_to_free
from .words import (EdgeLetter, GroupWord, VertexLetter, format_letters, invert,
                    path_normal_form, to_loop_form)


class CycleDetected(RuntimeError):
    pass


@dataclass
class TreeVertex:
    key: tuple
    vertex: str                      # p(v) in the underlying graph
    letters: Tuple                   # representative path from the base, normal form
    depth: int
    parent: Optional[int] = None
    truncated: bool = False


@dataclass
class TreeBall:
    graph: GraphOfGroups = field(repr=False)
    tree: SpanningTree = field(repr=False)
    base: str
    radius: int
    vertices: List[TreeVertex] = field(default_factory=list)
    edges: List[Tuple[int, int, str]] = field(default_factory=list)

    def word(self, i: int) -> GroupWord:
        return GroupWord(self.graph, self.vertices[i].letters, self.tree)

    def degree(self, i: int) -> int:
        return sum(1 for a, b, _ in self.edges if i in (a, b))

    @property
    def truncated(self) -> bool:
        return any(v.truncated for v in self.vertices)

    def index_of(self, key) -> Optional[int]:
        for i, v in enumerate(self.vertices):
            if v.key == key:
                return i
        return None


@dataclass
class CoverBall:
    base: str
    radius: int
    paths: List[Tuple[str, ...]] = field(default_factory=list)
    edges: List[Tuple[int, int, str]] = field(default_factory=list)
    acyclic: bool = False


def _is_forest_tree(n: int, edges) -> bool:
    """Connected and acyclic, checked by union-find."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return n == 0 or len(edges) == n - 1


def coset_key(tree: SpanningTree, letters, base: str):
    nf = path_normal_form(tree, letters, base)
    return (nf.end, nf.syllables)


def tree_ball(g: GraphOfGroups, t: Optional[SpanningTree] = None, base: Optional[str] = None,
              radius: int = 1, coset_bound: int = 1) -> TreeBall:
    if radius < 0 or coset_bound < 1:
        raise ValueError("need radius >= 0 and coset_bound >= 1")
    t = t if t is not None else g.tree
    base = base if base is not None else t.root
    ball = TreeBall(g, t, base, radius)
    ball.vertices.append(TreeVertex((base, ()), base, (), 0))
    index: Dict[tuple, int] = {ball.vertices[0].key: 0}
    frontier = [0]
    for depth in range(radius):
        nxt = []
        for i in frontier:
            u = ball.vertices[i]
            for e in sorted(g.out_edges(u.vertex), key=lambda e: e.id):
                reps, truncated = coset_reps(e.alpha, coset_bound)
                u.truncated |= truncated
                for r in reps:
                    letters = u.letters + ((VertexLetter(u.vertex, r),) if r else ()) + (EdgeLetter(e.id),)
                    key = coset_key(t, letters, base)
                    j = index.get(key)
                    if j is not None:
                        if j == u.parent:
                            continue
                        raise CycleDetected(f"coset {format_letters(letters)} reached twice")
                    nf_letters = tuple(x for rep, eid in key[1] for x in
                                       ((VertexLetter(g.edges[eid].source, rep),) if rep else ())
                                       + (EdgeLetter(eid),))
                    ball.vertices.append(TreeVertex(key, e.target, nf_letters, depth + 1, i))
                    index[key] = len(ball.vertices) - 1
                    ball.edges.append((i, index[key], e.id))
                    nxt.append(index[key])
        frontier = nxt
    if not _is_forest_tree(len(ball.vertices), ball.edges):
        raise CycleDetected("explored ball is not a tree")
    return ball


def stabilizer_class(ball: TreeBall, i: int) -> Tuple[GroupWord, str]:
    """(g, v) with Stab = g G_v g^-1."""
    return ball.word(i), ball.vertices[i].vertex


def stabilizer_generators(ball: TreeBall, i: int) -> List[GroupWord]:
    g, v = stabilizer_class(ball, i)
    G = ball.graph.vertices[v]
    return [g * GroupWord(ball.graph, (VertexLetter(v, x),), ball.tree) * invert(g) for x in G.gens()]


def act(ball: TreeBall, h: GroupWord, i: int):
    """Key of the vertex ``h . v_i``."""
    loop = to_loop_form(h, ball.base).letters
    return coset_key(ball.tree, loop + ball.vertices[i].letters, ball.base)


def fixes(ball: TreeBall, h: GroupWord, i: int) -> bool:
    return act(ball, h, i) == ball.vertices[i].key


@dataclass
class StabilizerScan:
    vertex: int
    graph_vertex: str
    killed: List[int]              # generator indices with trivial phi-image
    surviving_rank: int
    torsion_elements: int
    ok: bool


def finite_stabilizer_scan(ctx: RationalizationContext, ball: TreeBall) -> List[StabilizerScan]:
    out = []
    for i, tv in enumerate(ball.vertices):
        G = ball.graph.vertices[tv.vertex]
        gens = stabilizer_generators(ball, i)
        images = [phi(ctx, w) for w in gens]
        killed = [j for j, im in enumerate(images) if im.is_identity]
        free_vecs = [list(im.vec) for im in images[:G.rank]]
        surviving = linalg.rank(free_vecs) if free_vecs and ctx.dim else 0
        g, v = stabilizer_class(ball, i)
        tors = ab_torsion_subgroup(G)
        tors_ok = all(
            phi(ctx, g * GroupWord(ball.graph, (VertexLetter(v, x),), ball.tree) * invert(g)).is_identity
            for x in tors)
        ok = (killed == list(range(G.rank, G.ngens)) and surviving == G.rank and tors_ok
              and all(not im.word for im in images))
        out.append(StabilizerScan(i, tv.vertex, killed, surviving, len(tors), ok))
    return out


@dataclass
class KernelActionReport:
    stabilizers_in_kernel: bool
    moving_checked: int
    moving_ok: bool
    fiber_pairs_checked: int
    fibers_ok: bool

    @property
    def ok(self) -> bool:
        return self.stabilizers_in_kernel and self.moving_ok and self.fibers_ok


def graph_path(ball: TreeBall, i: int) -> Tuple[str, ...]:
    """Image of a tree vertex in the universal cover of the underlying graph."""
    edges = ball.graph.edges
    out: List[str] = []
    for x in ball.vertices[i].letters:
        if isinstance(x, EdgeLetter):
            if out and edges[out[-1]].reverse == x.edge:
                out.pop()
            else:
                out.append(x.edge)
    return tuple(out)


def kernel_action_check(ctx: RationalizationContext, ball: TreeBall,
                        max_pairs: int = 200) -> KernelActionReport:
    stab_ok = all(not project_to_free(phi(ctx, w))
                  for i in range(len(ball.vertices)) for w in stabilizer_generators(ball, i))
    moving = 0
    moving_ok = True
    for i in range(len(ball.vertices)):
        g = ball.word(i)
        if project_to_free(phi(ctx, g)):
            moving += 1
            moving_ok &= act(ball, g, 0) != ball.vertices[0].key
    fibers: Dict[tuple, List[int]] = {}
    for i, tv in enumerate(ball.vertices):
        fibers.setdefault((tv.vertex, graph_path(ball, i)), []).append(i)
    pairs = 0
    fibers_ok = True
    for members in fibers.values():
        for a, b in zip(members, members[1:]):
            if pairs >= max_pairs:
                break
            k = ball.word(b) * invert(ball.word(a))
            fibers_ok &= not project_to_free(phi(ctx, k)) and act(ball, k, a) == ball.vertices[b].key
            pairs += 1
    return KernelActionReport(stab_ok, moving, moving_ok, pairs, fibers_ok)


def cover_ball(g: GraphOfGroups, base: Optional[str] = None, radius: int = 1) -> CoverBall:
    """Ball of radius ``radius`` in the universal cover of the underlying graph."""
    base = base if base is not None else min(g.vertices)
    ball = CoverBall(base, radius, [()])
    ends = [base]
    frontier = [0]
    for _ in range(radius):
        nxt = []
        for i in frontier:
            path = ball.paths[i]
            for e in sorted(g.out_edges(ends[i]), key=lambda e: e.id):
                if path and g.edges[path[-1]].reverse == e.id:
                    continue
                ball.paths.append(path + (e.id,))
                ends.append(e.target)
                ball.edges.append((i, len(ball.paths) - 1, e.id))
                nxt.append(len(ball.paths) - 1)
        frontier = nxt
    ball.acyclic = len(set(ball.paths)) == len(ball.paths) and _is_forest_tree(len(ball.paths), ball.edges)
    return ball


def cover_ball_size(degree: int, radius: int) -> int:
    """Vertices in a radius ball of the degree-regular tree."""
    if radius == 0 or degree == 0:
        return 1
    return 1 + sum(degree * (degree - 1) ** (k - 1) for k in range(1, radius + 1))


# --- DOT export -----------------------------------------------------------------

def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def tree_ball_dot(ball: TreeBall) -> str:
    lines = ["graph bass_serre {"]
    for i, v in enumerate(ball.vertices):
        label = format_letters(v.letters) or "1"
        style = ", style=dashed" if v.truncated else ""
        lines.append(f"  n{i} [label={_quote(label + ' | ' + v.vertex)}{style}];")
    for a, b, e in ball.edges:
        lines.append(f"  n{a} -- n{b} [label={_quote(e)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cover_ball_dot(ball: CoverBall) -> str:
    lines = ["graph universal_cover {"]
    for i, p in enumerate(ball.paths):
        lines.append(f"  n{i} [label={_quote(' '.join(p) or '1')}];")
    for a, b, e in ball.edges:
        lines.append(f"  n{a} -- n{b} [label={_quote(e)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
