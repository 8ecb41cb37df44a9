"""The rationalization homomorphism into a rational-vector-space-by-free group.

``Q`` is the direct sum of the rationalized vertex groups (blocks in vertex id
order). ``R`` is spanned by ``M_~e(b) - M_e(b)`` for oriented tree edges ``e``
and free generators ``b`` of ``G_e``. Every vertex block embeds in ``Q/R``; the
non-tree edges act on ``Q/R`` through ``rho``, and ``phi`` sends vertex
letters to their classes in ``Q/R`` and non-tree edges to free generators of
the semidirect product ``(Q/R) x| F_n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .gog import GraphOfGroups, SpanningTree
from .words import EdgeLetter, GroupWord, VertexLetter

Vec = Tuple[Fraction, ...]
FreeWord = Tuple[int, ...]   # signed 1-based generator indices


class EmbeddingFailure(RuntimeError):
    pass


def free_reduce(w: Sequence[int]) -> FreeWord:
    out: List[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def free_inverse(w: Sequence[int]) -> FreeWord:
    return tuple(-x for x in reversed(w))


def format_free(w: FreeWord) -> str:
    if not w:
        return "1"
    return "".join(f"e{abs(x)}" + ("^-1" if x < 0 else "") for x in w)


format_fraction = linalg.format_fraction


def format_vector(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_fraction(x) for x in v) + ")"


@dataclass(frozen=True)
class SemidirectElement:
    vec: Vec
    word: FreeWord = ()

    def __post_init__(self):
        object.__setattr__(self, "vec", tuple(Fraction(x) for x in self.vec))
        object.__setattr__(self, "word", free_reduce(self.word))

    @property
    def is_identity(self) -> bool:
        return not self.word and not any(self.vec)

    def __str__(self):
        return f"({format_vector(self.vec)}, {format_free(self.word)})"


@dataclass
class EmbeddingReport:
    ranks: Dict[str, Tuple[int, int]] = field(default_factory=dict)  # v -> (found, expected)

    @property
    def failures(self) -> List[str]:
        return [v for v, (got, want) in self.ranks.items() if got != want]

    @property
    def ok(self) -> bool:
        return not self.failures


class RationalizationContext:
    """All data of the construction for one graph of groups and spanning tree."""

    def __init__(self, g: GraphOfGroups, tree: Optional[SpanningTree] = None):
        self.graph = g
        self.tree = tree if tree is not None else g.tree
        self.offsets: Dict[str, int] = {}
        n = 0
        for v in sorted(g.vertices):
            self.offsets[v] = n
            n += g.vertices[v].rank
        self.dim_Q = n
        self.M: Dict[str, List[List[Fraction]]] = {
            eid: linalg.qmat(e.alpha.free_block) for eid, e in g.edges.items()}

        rows = []
        for eid in self.tree.oriented:
            e = g.edges[eid]
            for j in range(e.group.rank):
                b = [Fraction(int(i == j)) for i in range(e.group.rank)]
                vec = self.embed(e.target, linalg.matvec(self.M[e.reverse], b))
                minus = self.embed(e.source, linalg.matvec(self.M[eid], b))
                rows.append([x - y for x, y in zip(vec, minus)])
        self.R_basis, self.pivots = linalg.rref(rows) if rows else ([], [])
        self.dim_R = len(self.R_basis)
        self.complement = [i for i in range(self.dim_Q) if i not in set(self.pivots)]
        self.dim = len(self.complement)
        self.projection = [self.project(tuple(Fraction(int(i == j)) for i in range(self.dim_Q)))
                           for j in range(self.dim_Q)]
        self.projection = linalg.transpose(self.projection, self.dim)  # dim x dim_Q

        report = check_embedding(self)
        if not report.ok:
            raise EmbeddingFailure(f"vertex blocks do not embed into Q/R: {report.failures}")
        self.rho: List[List[List[Fraction]]] = build_rho(self)
        self.rho_inv = [linalg.inverse(m) if m else [] for m in self.rho]

    # -- coordinates
    def embed(self, v: str, x: Sequence) -> List[Fraction]:
        """Place a vector of G_v (x) Q into Q."""
        out = [Fraction(0)] * self.dim_Q
        off = self.offsets[v]
        for i, c in enumerate(x):
            out[off + i] = Fraction(c)
        return out

    def project(self, q: Sequence[Fraction]) -> Vec:
        """Coordinates in Q/R (on the complement indices) of a vector of Q."""
        q = list(q)
        for row, c in zip(self.R_basis, self.pivots):
            if q[c]:
                f = q[c]
                q = [a - f * b for a, b in zip(q, row)]
        return tuple(q[i] for i in self.complement)

    def block_image(self, v: str) -> List[List[Fraction]]:
        """Columns: images in Q/R of the free generators of G_v."""
        rank = self.graph.vertices[v].rank
        return [list(self.project(self.embed(v, [int(i == j) for i in range(rank)])))
                for j in range(rank)]

    def edge_image(self, eid: str) -> List[List[Fraction]]:
        """Columns pi(M_e b_j) for the free generators b_j of G_e."""
        e = self.graph.edges[eid]
        cols = []
        for j in range(e.group.rank):
            b = [int(i == j) for i in range(e.group.rank)]
            cols.append(list(self.project(self.embed(e.source, linalg.matvec(self.M[eid], b)))))
        return cols

    # -- F_n action
    def rho_of(self, w: FreeWord) -> List[List[Fraction]]:
        m = linalg.identity(self.dim, Fraction(1))
        for x in w:
            g = self.rho[x - 1] if x > 0 else self.rho_inv[-x - 1]
            m = linalg.matmul(m, g)
        return m

    def act(self, w: FreeWord, v: Sequence[Fraction]) -> Vec:
        v = list(v)
        for x in reversed(w):
            g = self.rho[x - 1] if x > 0 else self.rho_inv[-x - 1]
            v = linalg.matvec(g, v)
        return tuple(v)

    def identity(self) -> SemidirectElement:
        return SemidirectElement((Fraction(0),) * self.dim, ())

    def free_generator(self, eid: str) -> int:
        return self.tree.generator_index(eid)


def build_context(g: GraphOfGroups, t: Optional[SpanningTree] = None) -> RationalizationContext:
    return RationalizationContext(g, t)


def check_embedding(ctx: RationalizationContext) -> EmbeddingReport:
    rep = EmbeddingReport()
    for v in sorted(ctx.graph.vertices):
        rank = ctx.graph.vertices[v].rank
        block = [ctx.embed(v, [int(i == j) for i in range(rank)]) for j in range(rank)]
        found = linalg.rank(block + ctx.R_basis) if block or ctx.R_basis else 0
        rep.ranks[v] = (found, rank + ctx.dim_R)
    return rep


def build_rho(ctx: RationalizationContext) -> List[List[List[Fraction]]]:
    """rho(e_i) on Q/R: maps pi M_~e b_j to pi M_e b_j, and the greedy standard
    completion of the first image basis onto that of the second."""
    mats = []
    m = ctx.dim
    for eid in ctx.tree.non_tree:
        e = ctx.graph.edges[eid]
        src = ctx.edge_image(e.reverse)   # pi M_~e: lands in the tau(e) block
        dst = ctx.edge_image(eid)         # pi M_e: lands in the iota(e) block
        ext_src = linalg.extend_to_basis(src, m)
        ext_dst = linalg.extend_to_basis(dst, m)
        if len(ext_src) != len(ext_dst):
            raise EmbeddingFailure(f"edge {eid}: image ranks differ")
        unit = [[Fraction(int(i == j)) for i in range(m)] for j in range(m)]
        B = linalg.transpose(src + [unit[j] for j in ext_src], m)
        B2 = linalg.transpose(dst + [unit[j] for j in ext_dst], m)
        mats.append(linalg.matmul(B2, linalg.inverse(B)) if m else [])
    return mats


def leaf_pruning_oracle(ctx: RationalizationContext, v: str, q: Sequence,
                        coeffs: Mapping[str, Sequence]) -> bool:
    """Decide ``q = sum over oriented tree edges of M_~e(q_e) - M_e(q_e)`` by
    peeling leaves of the support forest.

    ``q`` lives in the ``v`` block; ``coeffs`` maps oriented tree edges to
    vectors in ``G_e (x) Q`` (missing edges mean zero).
    """
    g = ctx.graph
    coeffs = {e: [Fraction(x) for x in coeffs.get(e, ())] or
              [Fraction(0)] * g.edges[e].group.rank for e in ctx.tree.oriented}
    residual = ctx.embed(v, q)
    for eid, qe in coeffs.items():
        e = g.edges[eid]
        plus = ctx.embed(e.target, linalg.matvec(ctx.M[e.reverse], qe))
        minus = ctx.embed(e.source, linalg.matvec(ctx.M[eid], qe))
        residual = [r - a + b for r, a, b in zip(residual, plus, minus)]
    support = {eid for eid, qe in coeffs.items() if any(qe)}

    def block(w):
        off = ctx.offsets[w]
        return residual[off:off + g.vertices[w].rank]

    while support:
        valence: Dict[str, List[str]] = {}
        for eid in support:
            e = g.edges[eid]
            valence.setdefault(e.source, []).append(eid)
            valence.setdefault(e.target, []).append(eid)
        leaf = next(w for w in sorted(valence) if len(valence[w]) == 1 and w != v)
        if any(block(leaf)):
            return False   # forced equation 0 = -M(q_e) with q_e != 0
        support.discard(valence[leaf][0])
    return not any(residual)


def direct_combination(ctx: RationalizationContext, v: str, q, coeffs) -> bool:
    """Plain evaluation of the same identity, for cross-checking the oracle."""
    g = ctx.graph
    total = [Fraction(0)] * ctx.dim_Q
    for eid in ctx.tree.oriented:
        e = g.edges[eid]
        qe = [Fraction(x) for x in coeffs.get(eid, ())] or [Fraction(0)] * e.group.rank
        plus = ctx.embed(e.target, linalg.matvec(ctx.M[e.reverse], qe))
        minus = ctx.embed(e.source, linalg.matvec(ctx.M[eid], qe))
        total = [t + a - b for t, a, b in zip(total, plus, minus)]
    return total == ctx.embed(v, q)


def semidirect_mul(a: SemidirectElement, b: SemidirectElement,
                   ctx: RationalizationContext) -> SemidirectElement:
    moved = ctx.act(a.word, b.vec)
    return SemidirectElement(tuple(x + y for x, y in zip(a.vec, moved)), a.word + b.word)


def semidirect_inverse(a: SemidirectElement, ctx: RationalizationContext) -> SemidirectElement:
    inv = free_inverse(a.word)
    return SemidirectElement(tuple(-x for x in ctx.act(inv, a.vec)), inv)


def phi_letter(ctx: RationalizationContext, x) -> SemidirectElement:
    if isinstance(x, VertexLetter):
        vec = ctx.project(ctx.embed(x.vertex, x.element.free_part))
        return SemidirectElement(vec, ())
    if ctx.tree.is_tree_edge(x.edge):
        return ctx.identity()
    return SemidirectElement((Fraction(0),) * ctx.dim, (ctx.free_generator(x.edge),))


def phi(ctx: RationalizationContext, w: GroupWord) -> SemidirectElement:
    result = ctx.identity()
    for x in w.letters:
        result = semidirect_mul(result, phi_letter(ctx, x), ctx)
    return result


def project_to_free(a: SemidirectElement) -> FreeWord:
    return a.word
