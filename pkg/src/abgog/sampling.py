"""Seeded random elements, words, relators and graphs of groups."""

from __future__ import annotations

import random
from math import gcd
from typing import List, Optional, Tuple

from . import linalg
from .abelian import AbElement, AbHom, FgAbGroup, ab_is_injective
from .gog import GraphOfGroups, SpanningTree
from .words import EdgeLetter, GroupWord, VertexLetter

# invariant-factor lists with every factor <= 6
TORSION_CHOICES = [(), (), (), (2,), (3,), (4,), (6,), (2, 2), (2, 4), (2, 6), (3, 6)]


def random_element(G: FgAbGroup, rng: random.Random, bound: int = 3) -> AbElement:
    coords = [rng.randint(-bound, bound) for _ in range(G.rank)]
    coords += [rng.randrange(d) for d in G.torsion]
    return AbElement(G, tuple(coords))


def random_word(g: GraphOfGroups, rng: random.Random, length: int = 6, bound: int = 3,
                tree: Optional[SpanningTree] = None) -> GroupWord:
    verts = sorted(g.vertices)
    edges = sorted(g.edges)
    letters = []
    for _ in range(length):
        if edges and rng.random() < 0.5:
            letters.append(EdgeLetter(rng.choice(edges)))
        else:
            v = rng.choice(verts)
            letters.append(VertexLetter(v, random_element(g.vertices[v], rng, bound)))
    return GroupWord(g, tuple(letters), tree)


def relator(g: GraphOfGroups, kind: str, eid: str, s: Optional[AbElement] = None,
            tree: Optional[SpanningTree] = None) -> GroupWord:
    """Relator words: (i) ``e ~e``; (ii) ``e alpha_~e(s) ~e alpha_e(s)^-1``;
    (iii) a tree edge ``e``."""
    e = g.edges[eid]
    if kind == "i":
        letters = (EdgeLetter(eid), EdgeLetter(e.reverse))
    elif kind == "ii":
        r = g.edges[e.reverse]
        letters = (EdgeLetter(eid), VertexLetter(e.target, r.alpha(s)), EdgeLetter(e.reverse),
                   VertexLetter(e.source, -e.alpha(s)))
    elif kind == "iii":
        letters = (EdgeLetter(eid),)
    else:
        raise ValueError(kind)
    return GroupWord(g, letters, tree)


def random_relator(g: GraphOfGroups, rng: random.Random, tree: Optional[SpanningTree] = None,
                   bound: int = 3) -> Tuple[str, GroupWord]:
    t = tree if tree is not None else g.tree
    kinds = ["i", "ii"] + (["iii"] if t.oriented else [])
    if not g.edges:
        return "empty", GroupWord(g, (), tree)
    kind = rng.choice(kinds)
    if kind == "iii":
        eid = rng.choice(sorted(t.tree_edges))
    else:
        eid = rng.choice(sorted(g.edges))
    s = random_element(g.edges[eid].group, rng, bound)
    return kind, relator(g, kind, eid, s, tree)


def _largest(G: FgAbGroup) -> int:
    return G.torsion[-1] if G.torsion else 1


def _random_embedding(E: FgAbGroup, G: FgAbGroup, rng: random.Random) -> Optional[AbHom]:
    k = E.rank
    cols = []
    for _ in range(50):
        free = [[rng.randint(-3, 3) for _ in range(k)] for _ in range(G.rank)]
        if k == 0 or linalg.rank(free) == k:
            break
    else:
        return None
    for j in range(k):
        col = [free[i][j] for i in range(G.rank)] + [rng.randrange(d) for d in G.torsion]
        cols.append(col)
    for d in E.torsion:
        col = [0] * G.rank
        for idx, dj in enumerate(G.torsion):
            step = dj // gcd(dj, d)
            if idx == len(G.torsion) - 1:
                c = rng.choice([c for c in range(1, d + 1) if gcd(c, d) == 1])
                col.append(step * c)
            else:
                col.append(step * rng.randrange(gcd(dj, d)))
        cols.append(col)
    matrix = tuple(zip(*cols)) if cols else ()
    h = AbHom(E, G, matrix)
    return h if ab_is_injective(h) else None


def random_edge(Gu: FgAbGroup, Gw: FgAbGroup, rng: random.Random, max_rank: int = 2):
    """A random edge group with injective maps into both endpoint groups."""
    for _ in range(20):
        k = rng.randint(0, min(Gu.rank, Gw.rank, max_rank))
        common = gcd(_largest(Gu), _largest(Gw))
        divisors = [d for d in range(2, common + 1) if common % d == 0]
        tors = (rng.choice(divisors),) if divisors and rng.random() < 0.6 else ()
        E = FgAbGroup(k, tors)
        a = _random_embedding(E, Gu, rng)
        b = _random_embedding(E, Gw, rng)
        if a is not None and b is not None:
            return E, a, b
    E = FgAbGroup(0)
    return E, AbHom(E, Gu, ()), AbHom(E, Gw, ())


def random_graph(rng: random.Random, max_vertices: int = 5, max_rank: int = 3,
                 tree_only: bool = False, extra_edges: int = 2,
                 min_rank: int = 0) -> GraphOfGroups:
    n = rng.randint(1, max_vertices)
    names = [f"v{i}" for i in range(n)]
    vertices = {v: FgAbGroup(rng.randint(min_rank, max_rank), rng.choice(TORSION_CHOICES))
                for v in names}
    pairs: List[Tuple[str, str]] = [(names[rng.randrange(i)], names[i]) for i in range(1, n)]
    if not tree_only:
        pairs += [(rng.choice(names), rng.choice(names)) for _ in range(rng.randint(0, extra_edges))]
    edges = []
    for i, (u, w) in enumerate(pairs):
        E, a, b = random_edge(vertices[u], vertices[w], rng)
        edges.append((f"f{i}", u, w, E, a.matrix, b.matrix))
    return GraphOfGroups.build(vertices, edges)


def gbs_graph(vertices, edges) -> GraphOfGroups:
    """Graph of infinite cyclic groups from ``(id, from, to, mult_from, mult_to)``."""
    Z = FgAbGroup(1)
    return GraphOfGroups.build({v: Z for v in vertices},
                               [(eid, u, w, Z, ((p,),), ((q,),)) for eid, u, w, p, q in edges])


def baumslag_solitar(p: int, q: int) -> GraphOfGroups:
    """BS(p, q) = <x, t | t x^p t^-1 = x^q>: the loop ``e`` has alpha_~e = p, alpha_e = q."""
    return gbs_graph(["v"], [("e", "v", "v", q, p)])
