"""Words in the fundamental group of a graph of groups and their normal forms.

A raw :class:`GroupWord` is any sequence of vertex letters ``(v, x)`` with
``x`` in ``G_v`` and edge letters ``e``. Tree edges are trivial, so inserting
tree geodesics turns any word into a loop at a base vertex without changing the
element it represents. Loops are then reduced by pinching: a segment
``e g ~e`` with ``g = alpha_~e(s)`` becomes ``alpha_e(s)``. Finally every
vertex element is split into a canonical coset representative times an edge
image, and the edge image is pushed across the edge. The resulting
:class:`NormalForm` is unique, so equality of elements is equality of normal
forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from .abelian import AbElement, ab_image_membership, coset_decompose
from .gog import GraphOfGroups, SpanningTree


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class VertexLetter:
    vertex: str
    element: AbElement


@dataclass(frozen=True)
class EdgeLetter:
    edge: str


Letter = Union[VertexLetter, EdgeLetter]


@dataclass(frozen=True)
class GroupWord:
    graph: GraphOfGroups = field(compare=False, repr=False)
    letters: Tuple[Letter, ...] = ()
    tree: Optional[SpanningTree] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for x in self.letters:
            if isinstance(x, VertexLetter):
                if self.graph.vertices.get(x.vertex) != x.element.group:
                    raise ValueError(f"{x.element} is not in the vertex group of {x.vertex}")
            elif x.edge not in self.graph.edges:
                raise ValueError(f"unknown edge {x.edge}")

    @property
    def spanning_tree(self) -> SpanningTree:
        return self.tree if self.tree is not None else self.graph.tree

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return multiply(self, other)

    def __invert__(self) -> "GroupWord":
        return invert(self)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return format_letters(self.letters)


@dataclass(frozen=True)
class NormalForm:
    """``s_1 e_1 s_2 e_2 ... s_k e_k g`` as a path from ``base`` to ``end``.

    Each ``s_i`` is the canonical representative of its coset of
    ``alpha_{e_i}(G_{e_i})``; ``g`` is an arbitrary element of ``G_end``.
    Tree edges are kept as path letters (they are trivial in the group).
    """

    base: str
    end: str
    syllables: Tuple[Tuple[AbElement, str], ...]
    last: AbElement

    @property
    def is_trivial(self) -> bool:
        return not self.syllables and not self.last

    def letters(self, tree: SpanningTree, include_tree_edges: bool = False) -> List[Letter]:
        edges = tree.graph.edges
        out: List[Letter] = []
        for rep, e in self.syllables:
            if rep:
                out.append(VertexLetter(edges[e].source, rep))
            if include_tree_edges or not tree.is_tree_edge(e):
                out.append(EdgeLetter(e))
        if self.last:
            out.append(VertexLetter(self.end, self.last))
        return out

    def to_word(self, tree: SpanningTree, include_tree_edges: bool = True) -> GroupWord:
        return GroupWord(tree.graph, self.letters(tree, include_tree_edges), tree)

    def edge_letters(self, tree: SpanningTree) -> List[str]:
        return [e for _, e in self.syllables if not tree.is_tree_edge(e)]


# --- operations ----------------------------------------------------------------

def word(graph: GraphOfGroups, letters: Sequence[Letter], tree=None) -> GroupWord:
    return GroupWord(graph, tuple(letters), tree)


def multiply(w1: GroupWord, w2: GroupWord) -> GroupWord:
    if w1.graph is not w2.graph:
        raise ValueError("words over different graphs")
    return GroupWord(w1.graph, w1.letters + w2.letters, w1.tree)


def invert(w: GroupWord) -> GroupWord:
    edges = w.graph.edges
    out: List[Letter] = []
    for x in reversed(w.letters):
        if isinstance(x, VertexLetter):
            out.append(VertexLetter(x.vertex, -x.element))
        else:
            out.append(EdgeLetter(edges[x.edge].reverse))
    return GroupWord(w.graph, tuple(out), w.tree)


def to_loop_form(w: GroupWord, base: Optional[str] = None) -> GroupWord:
    """Insert tree geodesics so consecutive letters form a loop at ``base``."""
    tree = w.spanning_tree
    edges = w.graph.edges
    base = tree.root if base is None else base
    cur = base
    out: List[Letter] = []
    for x in w.letters:
        start = x.vertex if isinstance(x, VertexLetter) else edges[x.edge].source
        if start != cur:
            out.extend(EdgeLetter(e) for e in tree.geodesic(cur, start))
        out.append(x)
        cur = x.vertex if isinstance(x, VertexLetter) else edges[x.edge].target
    if cur != base:
        out.extend(EdgeLetter(e) for e in tree.geodesic(cur, base))
    return GroupWord(w.graph, tuple(out), w.tree)


def path_normal_form(tree: SpanningTree, letters: Sequence[Letter], start: str) -> NormalForm:
    """Normal form of a path word; ``letters`` must be connected starting at ``start``."""
    g = tree.graph
    edges = g.edges
    elems: List[AbElement] = [g.vertices[start].zero()]
    path: List[str] = []
    cur = start
    for x in letters:
        if isinstance(x, VertexLetter):
            if x.vertex != cur:
                raise ValueError(f"letter at {x.vertex} but path is at {cur}")
            elems[-1] = elems[-1] + x.element
            continue
        e = edges[x.edge]
        if e.source != cur:
            raise ValueError(f"edge {e.id} starts at {e.source} but path is at {cur}")
        if path and path[-1] == e.reverse:
            s = ab_image_membership(e.alpha, elems[-1])
            if s is not None:
                # pinch: prev . alpha_~prev(s) . ~prev = alpha_prev(s)
                prev = edges[path.pop()]
                elems.pop()
                elems[-1] = elems[-1] + prev.alpha(s)
                cur = prev.source
                continue
        path.append(e.id)
        elems.append(g.vertices[e.target].zero())
        cur = e.target
    syllables = []
    for i, eid in enumerate(path):
        e = edges[eid]
        rep, s = coset_decompose(e.alpha, elems[i])
        syllables.append((rep, eid))
        elems[i + 1] = elems[i + 1] + edges[e.reverse].alpha(s)
    return NormalForm(start, cur, tuple(syllables), elems[-1])


def reduce(w: GroupWord, base: Optional[str] = None) -> NormalForm:
    tree = w.spanning_tree
    base = tree.root if base is None else base
    return path_normal_form(tree, to_loop_form(w, base).letters, base)


def is_trivial(w: GroupWord) -> bool:
    return reduce(w).is_trivial


def equal(w1: GroupWord, w2: GroupWord) -> bool:
    return reduce(w1) == reduce(w2)


# --- text grammar --------------------------------------------------------------

_VERTEX_TOKEN = re.compile(r"^([^\[\]\s]+)\[([^\]]*)\]$")


def parse_word(graph: GraphOfGroups, text: str, tree=None) -> GroupWord:
    """Parse ``"e v[2] ~e v[-3]"``: ``id[c1,c2,...]`` is a vertex letter, other
    tokens are (possibly reversed) edge ids."""
    letters: List[Letter] = []
    for pos, tok in enumerate(text.split()):
        m = _VERTEX_TOKEN.match(tok)
        if m:
            vid, body = m.groups()
            if vid not in graph.vertices:
                raise WordSyntaxError(f"token {pos + 1} ({tok!r}): unknown vertex {vid}")
            try:
                coords = tuple(int(c) for c in body.split(",")) if body.strip() else ()
            except ValueError:
                raise WordSyntaxError(f"token {pos + 1} ({tok!r}): bad coordinates") from None
            G = graph.vertices[vid]
            if len(coords) != G.ngens:
                raise WordSyntaxError(
                    f"token {pos + 1} ({tok!r}): {vid} needs {G.ngens} coordinates")
            letters.append(VertexLetter(vid, G.element(coords)))
        elif tok in graph.edges:
            letters.append(EdgeLetter(tok))
        else:
            raise WordSyntaxError(f"token {pos + 1} ({tok!r}): unknown edge or malformed letter")
    return GroupWord(graph, tuple(letters), tree)


def format_letters(letters: Sequence[Letter]) -> str:
    out = []
    for x in letters:
        if isinstance(x, VertexLetter):
            out.append(f"{x.vertex}[{','.join(map(str, x.element.coords))}]")
        else:
            out.append(x.edge)
    return " ".join(out)
