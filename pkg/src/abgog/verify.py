"""Seeded property suite run against a single graph of groups."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List

from .bassserre import cover_ball, finite_stabilizer_scan, kernel_action_check, tree_ball
from .cat0 import build_gram, verify_gram
from .exhaust import build_chain, verify_chain
from .gog import GraphOfGroups, validate
from .rationalize import RationalizationContext, check_embedding, phi, semidirect_mul
from .sampling import random_relator, random_word
from .words import invert, is_trivial, reduce


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def __str__(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def run_suite(g: GraphOfGroups, samples: int = 100, seed: int = 0) -> List[Check]:
    out: List[Check] = []
    rep = validate(g)
    out.append(Check("validate", rep.ok, "valid" if rep.ok else str(rep)))
    if not rep.ok:
        return out
    rng = random.Random(seed)
    ctx = RationalizationContext(g)
    emb = check_embedding(ctx)
    out.append(Check("embedding", emb.ok,
                     f"dim Q = {ctx.dim_Q}, dim R = {ctx.dim_R}, dim Q/R = {ctx.dim}"))

    bad = 0
    for _ in range(samples):
        _, w = random_relator(g, rng)
        bad += not phi(ctx, w).is_identity
    out.append(Check("relators", bad == 0, f"{samples - bad}/{samples} relators map to the identity"))

    bad = 0
    for _ in range(samples):
        w1, w2 = random_word(g, rng), random_word(g, rng)
        lhs = phi(ctx, w1 * w2)
        bad += lhs != semidirect_mul(phi(ctx, w1), phi(ctx, w2), ctx)
        bad += phi(ctx, w1) != phi(ctx, reduce(w1).to_word(ctx.tree))
    out.append(Check("homomorphism", bad == 0, f"{2 * samples - bad}/{2 * samples} identities hold"))

    bad = 0
    for _ in range(samples):
        w = random_word(g, rng)
        nf = reduce(w)
        bad += not is_trivial(w * invert(w))
        bad += reduce(nf.to_word(ctx.tree)) != nf
    out.append(Check("normal form", bad == 0, f"{2 * samples - bad}/{2 * samples} identities hold"))

    ball = tree_ball(g, radius=1)
    scans = finite_stabilizer_scan(ctx, ball)
    kern = kernel_action_check(ctx, ball)
    ok = all(s.ok for s in scans)
    out.append(Check("stabilizers", ok, f"{sum(s.ok for s in scans)}/{len(scans)} vertex stabilizers"))
    out.append(Check("kernel action", kern.ok,
                     f"{kern.moving_checked} moving, {kern.fiber_pairs_checked} fiber pairs"))

    cover = cover_ball(g, radius=3)
    out.append(Check("cover", cover.acyclic, f"{len(cover.paths)} vertices at radius 3"))

    if len(g.pairs()) == len(g.vertices) - 1:
        gr = verify_gram(g, build_gram(g))
        out.append(Check("cat0", gr.ok, f"{len(gr.lines)} edges"))

    chain = build_chain(g, "subgraph")
    cr = verify_chain(chain, samples=max(1, samples // 10), seed=seed)
    out.append(Check("chain", cr.ok, f"{cr.functoriality_checked} composites, "
                                     f"{cr.surjectivity_checked} lifts"))
    return out
