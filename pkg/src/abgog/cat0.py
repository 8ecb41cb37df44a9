"""Compatible inner products on the vertex and edge spaces of a tree of groups.

The root space gets a chosen Gram matrix. Walking the tree breadth-first, each
new edge space gets the pullback of the inner product on the side already
metrized, and the new vertex space gets an inner product extending it: in a
basis made of the edge image plus greedily chosen standard vectors the Gram
matrix is block-diagonal (pullback, identity). All arithmetic is over Q.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import linalg
from .gog import GraphOfGroups

Gram = List[List[Fraction]]


class NotATree(ValueError):
    pass


@dataclass
class GramAssignment:
    vertex: Dict[str, Gram]
    edge: Dict[str, Gram]              # keyed by the oriented edge e_i used in the exhaustion
    order: List[str]                   # v_0, v_1, ..., v_n
    edge_sequence: List[str]           # e_1, ..., e_n with source in T_{i-1}, target v_i


def _pullback(a: List[List[int]], gram: Gram) -> Gram:
    """a^T gram a."""
    if not a or not a[0]:
        return []
    at = linalg.transpose(a)
    return linalg.matmul(linalg.matmul(at, gram), a)


def exhaustion(g: GraphOfGroups, root: str) -> Tuple[List[str], List[str]]:
    n_pairs = len(g.pairs())
    if n_pairs != len(g.vertices) - 1:
        raise NotATree(f"{n_pairs} edges on {len(g.vertices)} vertices is not a tree")
    order = [root]
    seq: List[str] = []
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e in sorted(g.out_edges(v), key=lambda e: e.id):
            if e.target in seen:
                continue
            seen.add(e.target)
            order.append(e.target)
            seq.append(e.id)
            queue.append(e.target)
    if len(order) != len(g.vertices):
        raise NotATree("graph is not connected")
    return order, seq


def extend_gram(b: List[List[int]], edge_gram: Gram, dim: int) -> Gram:
    """Gram on Q^dim whose pullback along the injective matrix ``b`` is ``edge_gram``."""
    k = len(edge_gram)
    cols = [[Fraction(row[j]) for row in b] for j in range(k)]
    added = linalg.extend_to_basis(cols, dim)
    basis = cols + [[Fraction(int(i == j)) for i in range(dim)] for j in added]
    if dim == 0:
        return []
    P = linalg.transpose(basis, dim)           # columns are the new basis
    block = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(k):
        for j in range(k):
            block[i][j] = Fraction(edge_gram[i][j])
    for i in range(k, dim):
        block[i][i] = Fraction(1)
    Pinv = linalg.inverse(P)
    return linalg.matmul(linalg.matmul(linalg.transpose(Pinv), block), Pinv)


def build_gram(g: GraphOfGroups, root: Optional[str] = None,
               root_gram: Optional[Gram] = None) -> GramAssignment:
    root = root if root is not None else min(g.vertices)
    order, seq = exhaustion(g, root)
    n0 = g.vertices[root].rank
    if root_gram is None:
        root_gram = linalg.identity(n0, Fraction(1))
    root_gram = linalg.qmat(root_gram)
    if not (linalg.is_symmetric(root_gram) and linalg.is_positive_definite(root_gram)):
        raise ValueError("root Gram matrix must be symmetric positive definite")
    vertex = {root: root_gram}
    edge: Dict[str, Gram] = {}
    for eid in seq:
        e = g.edges[eid]
        ge = _pullback(e.alpha.free_block, vertex[e.source]) if e.group.rank else []
        edge[eid] = ge
        back = g.edges[e.reverse].alpha.free_block
        gv = extend_gram(back, ge, g.vertices[e.target].rank)
        for m in (ge, gv):
            if not linalg.is_positive_definite(m):
                raise ArithmeticError(f"edge {eid}: constructed Gram matrix is not positive definite")
        vertex[e.target] = gv
    return GramAssignment(vertex, edge, order, seq)


@dataclass
class GramReport:
    lines: List[str] = field(default_factory=list)
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self):
        return "\n".join(self.lines + [f"problem: {p}" for p in self.problems])


def verify_gram(g: GraphOfGroups, gram: GramAssignment) -> GramReport:
    rep = GramReport()
    for v, m in sorted(gram.vertex.items()):
        if len(m) != g.vertices[v].rank or any(len(r) != len(m) for r in m):
            rep.problems.append(f"vertex {v}: Gram has the wrong size")
            continue
        if not linalg.is_symmetric(m):
            rep.problems.append(f"vertex {v}: Gram is not symmetric")
        if not linalg.is_positive_definite(m):
            rep.problems.append(f"vertex {v}: Gram is not positive definite")
    for eid in gram.edge_sequence:
        e = g.edges[eid]
        ge = gram.edge[eid]
        if not linalg.is_symmetric(ge) or not linalg.is_positive_definite(ge):
            rep.problems.append(f"edge {eid}: edge Gram is not symmetric positive definite")
        pull = _pullback(e.alpha.free_block, gram.vertex[e.source]) if e.group.rank else []
        ext = (_pullback(g.edges[e.reverse].alpha.free_block, gram.vertex[e.target])
               if e.group.rank else [])
        ok1, ok2 = pull == ge, ext == ge
        rep.lines.append(f"edge {eid}: pullback {'OK' if ok1 else 'FAIL'}, "
                         f"extension {'OK' if ok2 else 'FAIL'}")
        if not ok1:
            rep.problems.append(f"edge {eid}: isometry with {e.source} fails")
        if not ok2:
            rep.problems.append(f"edge {eid}: isometry with {e.target} fails")
    return rep


def format_matrix(m: Gram) -> str:
    if not m:
        return "[]"
    return "[" + "; ".join(" ".join(linalg.format_fraction(Fraction(x)) for x in row) for row in m) + "]"
