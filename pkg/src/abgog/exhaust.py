"""Subgraphs of subgroups, their induced maps on words, and finite exhaustion chains."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .abelian import AbHom, FgAbGroup, ab_image_membership, ab_is_injective, subgroup
from .gog import Edge, GraphOfGroups, SpanningTree
from .sampling import random_word
from .words import EdgeLetter, GroupWord, VertexLetter, reduce


class InclusionError(ValueError):
    pass


def identity_hom(G: FgAbGroup) -> AbHom:
    n = G.ngens
    return AbHom(G, G, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


@dataclass
class InclusionWitness:
    """Exhibits ``sub`` as a subgraph of subgroups of ``sup``.

    ``edge_incl`` is keyed by half-edge; both halves of a pair share a map.
    """

    vertex_map: Dict[str, str]
    edge_map: Dict[str, str]
    vertex_incl: Dict[str, AbHom]
    edge_incl: Dict[str, AbHom]


def check_inclusion(sub: GraphOfGroups, sup: GraphOfGroups, w: InclusionWitness,
                    sub_tree: SpanningTree, sup_tree: SpanningTree) -> List[str]:
    problems = []
    if len(set(w.vertex_map.values())) != len(w.vertex_map):
        problems.append("vertex map is not injective")
    for v, G in sub.vertices.items():
        tv = w.vertex_map.get(v)
        h = w.vertex_incl.get(v)
        if tv not in sup.vertices or h is None:
            problems.append(f"vertex {v}: not mapped")
        elif h.domain != G or h.codomain != sup.vertices[tv] or not ab_is_injective(h):
            problems.append(f"vertex {v}: G'_v is not a subgroup of G_{tv}")
    if problems:
        return problems
    for eid, e in sub.edges.items():
        te = w.edge_map.get(eid)
        h = w.edge_incl.get(eid)
        if te not in sup.edges or h is None:
            problems.append(f"edge {eid}: not mapped")
            continue
        E = sup.edges[te]
        if w.edge_map.get(e.reverse) != E.reverse:
            problems.append(f"edge {eid}: reverse not preserved")
        if E.source != w.vertex_map[e.source] or E.target != w.vertex_map[e.target]:
            problems.append(f"edge {eid}: endpoints not preserved")
            continue
        if h.domain != e.group or h.codomain != E.group or not ab_is_injective(h):
            problems.append(f"edge {eid}: G'_e is not a subgroup of G_{te}")
            continue
        vi = w.vertex_incl[e.source]
        for s in e.group.gens():
            if vi(e.alpha(s)) != E.alpha(h(s)):
                problems.append(f"edge {eid}: alpha'_e is not the restriction of alpha_{te}")
                break
    sup_tree_edges = sup_tree.tree_edges
    for eid in sub_tree.tree_edges:
        if w.edge_map.get(eid) not in sup_tree_edges:
            problems.append(f"tree edge {eid} does not map into the tree of the supergraph")
    return problems


class WordMap:
    """The homomorphism on fundamental groups induced by an inclusion."""

    def __init__(self, sub, sup, witness, sub_tree, sup_tree):
        self.sub, self.sup, self.witness = sub, sup, witness
        self.sub_tree, self.sup_tree = sub_tree, sup_tree

    def __call__(self, w: GroupWord) -> GroupWord:
        wit = self.witness
        out = []
        for x in w.letters:
            if isinstance(x, VertexLetter):
                out.append(VertexLetter(wit.vertex_map[x.vertex], wit.vertex_incl[x.vertex](x.element)))
            else:
                out.append(EdgeLetter(wit.edge_map[x.edge]))
        return GroupWord(self.sup, tuple(out), self.sup_tree)


def induced_inclusion(sub: GraphOfGroups, sup: GraphOfGroups, witness: InclusionWitness,
                      sub_tree: Optional[SpanningTree] = None,
                      sup_tree: Optional[SpanningTree] = None) -> WordMap:
    sub_tree = sub_tree if sub_tree is not None else sub.tree
    sup_tree = sup_tree if sup_tree is not None else sup.tree
    problems = check_inclusion(sub, sup, witness, sub_tree, sup_tree)
    if problems:
        raise InclusionError("; ".join(problems))
    return WordMap(sub, sup, witness, sub_tree, sup_tree)


# --- chains -------------------------------------------------------------------

@dataclass
class Stage:
    graph: GraphOfGroups
    tree: SpanningTree
    to_top: InclusionWitness


@dataclass
class ExhaustionChain:
    top: GraphOfGroups
    stages: List[Stage]
    maps: List[WordMap] = field(default_factory=list)   # stage i -> stage i+1


def relative_witness(a: Stage, b: Stage) -> InclusionWitness:
    """Witness for stage ``a`` inside stage ``b``, computed through the top graph."""
    vinv = {t: v for v, t in b.to_top.vertex_map.items()}
    einv = {t: e for e, t in b.to_top.edge_map.items()}
    vmap, emap, vinc, einc = {}, {}, {}, {}
    for v, G in a.graph.vertices.items():
        tv = a.to_top.vertex_map[v]
        if tv not in vinv:
            raise InclusionError(f"vertex {v} missing from later stage")
        bv = vinv[tv]
        images = []
        for x in G.gens():
            pre = ab_image_membership(b.to_top.vertex_incl[bv], a.to_top.vertex_incl[v](x))
            if pre is None:
                raise InclusionError(f"vertex {v}: subgroup not contained in later stage")
            images.append(pre)
        vmap[v] = bv
        vinc[v] = AbHom.from_images(G, b.graph.vertices[bv], images)
    for eid, e in a.graph.edges.items():
        te = a.to_top.edge_map[eid]
        if te not in einv:
            raise InclusionError(f"edge {eid} missing from later stage")
        be = einv[te]
        images = []
        for s in e.group.gens():
            pre = ab_image_membership(b.to_top.edge_incl[be], a.to_top.edge_incl[eid](s))
            if pre is None:
                raise InclusionError(f"edge {eid}: subgroup not contained in later stage")
            images.append(pre)
        emap[eid] = be
        einc[eid] = AbHom.from_images(e.group, b.graph.edges[be].group, images)
    return InclusionWitness(vmap, emap, vinc, einc)


def stage_map(a: Stage, b: Stage) -> WordMap:
    return induced_inclusion(a.graph, b.graph, relative_witness(a, b), a.tree, b.tree)


def _identity_witness(sub: GraphOfGroups) -> InclusionWitness:
    return InclusionWitness({v: v for v in sub.vertices}, {e: e for e in sub.edges},
                            {v: identity_hom(G) for v, G in sub.vertices.items()},
                            {e: identity_hom(E.group) for e, E in sub.edges.items()})


def _subgraph(g: GraphOfGroups, verts, pairs) -> GraphOfGroups:
    halves = set(pairs) | {g.edges[p].reverse for p in pairs}
    return GraphOfGroups({v: g.vertices[v] for v in verts}, [g.edges[e] for e in halves])


def build_chain(g: GraphOfGroups, strategy: str = "subgraph", length: int = 3) -> ExhaustionChain:
    """Exhaust ``g`` by finite stages.

    ``subgraph``: grow the vertex set along the spanning tree, then add the
    non-tree edges one at a time. ``subgroup``: keep the graph and grow each
    vertex group from the edge images plus ``2^k G_v`` down to ``G_v``.
    ``identity``: the single stage ``g``.
    """
    T = g.tree
    stages: List[Stage] = []
    if strategy == "identity":
        stages.append(Stage(g, T, _identity_witness(g)))
    elif strategy == "subgraph":
        order = [T.root] + [g.edges[e].target for e in T.oriented]
        plans = [(order[:k], list(T.oriented[:k - 1])) for k in range(1, len(order) + 1)]
        plans += [(order, list(T.oriented) + list(T.non_tree[:j])) for j in range(1, len(T.non_tree) + 1)]
        for verts, pairs in plans:
            sub = _subgraph(g, verts, pairs)
            tree = SpanningTree.from_pairs(sub, [p for p in pairs if p in T.oriented], T.root)
            stages.append(Stage(sub, tree, _identity_witness(sub)))
    elif strategy == "subgroup":
        for k in range(length):
            scale = 2 ** (length - 1 - k)
            verts, incl = {}, {}
            for v, G in g.vertices.items():
                gens = [e.alpha(s) for e in g.out_edges(v) for s in e.group.gens()]
                gens += [x * scale for x in G.gens()]
                H, h = subgroup(G, gens)
                verts[v], incl[v] = H, h
            half = []
            for eid, e in g.edges.items():
                images = [ab_image_membership(incl[e.source], e.alpha(s)) for s in e.group.gens()]
                if any(x is None for x in images):
                    raise InclusionError(f"stage subgroup misses the image of {eid}")
                half.append(Edge(eid, e.reverse, e.source, e.target, e.group,
                                 AbHom.from_images(e.group, verts[e.source], images)))
            sub = GraphOfGroups(verts, half)
            tree = SpanningTree.from_pairs(sub, T.oriented, T.root)
            wit = InclusionWitness({v: v for v in verts}, {e: e for e in sub.edges}, incl,
                                   {e: identity_hom(E.group) for e, E in sub.edges.items()})
            stages.append(Stage(sub, tree, wit))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    chain = ExhaustionChain(g, stages)
    for a, b in zip(stages, stages[1:]):
        chain.maps.append(stage_map(a, b))
    return chain


@dataclass
class ChainReport:
    stages: int
    functoriality_checked: int = 0
    functoriality_failures: int = 0
    surjectivity_checked: int = 0
    surjectivity_failures: int = 0
    injectivity_checked: int = 0
    injectivity_failures: int = 0

    @property
    def ok(self) -> bool:
        return not (self.functoriality_failures or self.surjectivity_failures
                    or self.injectivity_failures)


def _preimage_word(w: GroupWord, stage: Stage) -> Optional[GroupWord]:
    vinv = {t: v for v, t in stage.to_top.vertex_map.items()}
    einv = {t: e for e, t in stage.to_top.edge_map.items()}
    out = []
    for x in w.letters:
        if isinstance(x, VertexLetter):
            v = vinv.get(x.vertex)
            pre = ab_image_membership(stage.to_top.vertex_incl[v], x.element) if v else None
            if pre is None:
                return None
            out.append(VertexLetter(v, pre))
        else:
            if x.edge not in einv:
                return None
            out.append(EdgeLetter(einv[x.edge]))
    return GroupWord(stage.graph, tuple(out), stage.tree)


def verify_chain(chain: ExhaustionChain, samples: int = 100, seed: int = 0,
                 length: int = 4) -> ChainReport:
    rng = random.Random(seed)
    stages = chain.stages
    rep = ChainReport(len(stages))
    n = len(stages)
    for i in range(n):
        for k in range(i + 1, n):
            direct = stage_map(stages[i], stages[k])
            for _ in range(samples):
                w = random_word(stages[i].graph, rng, length, tree=stages[i].tree)
                composite = w
                for m in chain.maps[i:k]:
                    composite = m(composite)
                rep.functoriality_checked += 1
                if reduce(composite) != reduce(direct(w)):
                    rep.functoriality_failures += 1
            for _ in range(max(1, samples // 4)):
                w1 = random_word(stages[i].graph, rng, length, tree=stages[i].tree)
                w2 = random_word(stages[i].graph, rng, length, tree=stages[i].tree)
                if reduce(w1) != reduce(w2):
                    rep.injectivity_checked += 1
                    if reduce(direct(w1)) == reduce(direct(w2)):
                        rep.injectivity_failures += 1
    last = stages[-1]
    to_top = induced_inclusion(last.graph, chain.top, last.to_top, last.tree, chain.top.tree)
    for _ in range(samples):
        w = random_word(chain.top, rng, length)
        found = None
        for st in stages:
            pre = _preimage_word(w, st)
            if pre is not None:
                found = (st, pre)
                break
        rep.surjectivity_checked += 1
        if found is None:
            rep.surjectivity_failures += 1
            continue
        st, pre = found
        image = induced_inclusion(st.graph, chain.top, st.to_top, st.tree, chain.top.tree)(pre)
        if reduce(image) != reduce(w) or reduce(to_top(_preimage_word(w, last))) != reduce(w):
            rep.surjectivity_failures += 1
    return rep
