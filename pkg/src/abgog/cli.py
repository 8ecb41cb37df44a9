"""Command-line front end.

Exit status: 0 on success or a true answer, 1 when a checked property is
falsified (or the answer is "nontrivial"), 2 on input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from typing import List, Optional

from . import linalg
from .bassserre import CycleDetected, cover_ball, cover_ball_dot, tree_ball, tree_ball_dot
from .cat0 import NotATree, build_gram, format_matrix, verify_gram
from .exhaust import InclusionError, build_chain, verify_chain
from .gog import GraphFormatError, load, validate
from .rationalize import EmbeddingFailure, RationalizationContext, check_embedding, format_free, phi
from .verify import run_suite
from .words import WordSyntaxError, format_letters, parse_word, reduce


class InputError(Exception):
    pass


def _positive(name):
    def conv(text):
        v = int(text)
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1")
        return v
    return conv


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("radius must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abgog", description="Graphs of abelian groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, help):
        c = sub.add_parser(name, help=help)
        c.add_argument("input", help="graph of groups file (JSON)")
        return c

    cmd("validate", "check the graph of groups")
    cmd("tree", "show the spanning tree and free generators")
    for name, help in [("reduce", "normal form of a word"), ("is-trivial", "decide triviality"),
                       ("phi", "image in (Q/R) x| F_n")]:
        cmd(name, help).add_argument("--word", required=True)
    cmd("rho", "matrices of the free generators on Q/R")
    cmd("qr", "dimensions of Q, R, Q/R and the embedding report")
    c = cmd("ball", "ball in the Bass-Serre tree")
    c.add_argument("--radius", type=_nonneg, default=2)
    c.add_argument("--coset-bound", type=_positive("coset bound"), default=1)
    c.add_argument("--output")
    c = cmd("cover", "ball in the universal cover of the underlying graph")
    c.add_argument("--radius", type=_nonneg, default=2)
    c.add_argument("--output")
    c = cmd("cat0", "compatible Gram matrices on a tree of groups")
    c.add_argument("--root")
    c = cmd("chain", "exhaustion chain and functoriality check")
    c.add_argument("--strategy", choices=["subgraph", "subgroup", "identity"], default="subgraph")
    c.add_argument("--length", type=_positive("length"), default=3)
    c.add_argument("--samples", type=_positive("samples"), default=100)
    c.add_argument("--seed", type=int, default=0)
    c = cmd("verify", "run the full property suite")
    c.add_argument("--samples", type=_positive("samples"), default=100)
    c.add_argument("--seed", type=int, default=0)
    return p


def _write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".abgog-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _emit_dot(args, summary: List[str], dot: str, out: List[str]) -> None:
    if args.output:
        _write_atomic(args.output, dot)
        out.extend(summary)
        out.append(f"wrote {args.output}")
    else:
        out.extend("// " + s for s in summary)
        out.append(dot.rstrip("\n"))


def _matrix_text(m) -> str:
    return format_matrix(m) if len(m) != 1 else linalg.format_fraction(m[0][0])


def run(args, out: List[str]) -> int:
    g = load(args.input)
    report = validate(g)
    if args.command == "validate":
        out.append("valid" if report.ok else str(report))
        return 0 if report.ok else 2
    if not report.ok:
        raise InputError(str(report))
    T = g.tree
    c = args.command
    if c == "tree":
        out.append(f"root: {T.root}")
        out.append("tree edges: " + (" ".join(T.oriented) or "none"))
        for eid in T.non_tree:
            out.append(f"e{T.generator_index(eid)} = {eid}")
        return 0
    if c in ("reduce", "is-trivial", "phi"):
        w = parse_word(g, args.word)
        if c == "reduce":
            out.append(format_letters(reduce(w).letters(T)) or "1")
            return 0
        if c == "is-trivial":
            triv = reduce(w).is_trivial
            out.append("trivial" if triv else "nontrivial")
            return 0 if triv else 1
        out.append(str(phi(RationalizationContext(g), w)))
        return 0
    if c in ("rho", "qr"):
        ctx = RationalizationContext(g)
        if c == "qr":
            out.append(f"dim Q = {ctx.dim_Q}, dim R = {ctx.dim_R}, dim Q/R = {ctx.dim}")
            for row in ctx.R_basis:
                out.append("R: (" + ", ".join(linalg.format_fraction(x) for x in row) + ")")
            emb = check_embedding(ctx)
            for v, (got, want) in emb.ranks.items():
                out.append(f"embedding {v}: rank {got} of {want} {'OK' if got == want else 'FAIL'}")
        for i, eid in enumerate(T.non_tree, start=1):
            out.append(f"rho(e{i}) = {_matrix_text(ctx.rho[i - 1])}")
            out.append(f"e{i} = {eid}")
        return 0
    if c == "ball":
        ball = tree_ball(g, radius=args.radius, coset_bound=args.coset_bound)
        summary = [f"vertices: {len(ball.vertices)}", f"edges: {len(ball.edges)}",
                   f"truncated: {'yes' if ball.truncated else 'no'}"]
        _emit_dot(args, summary, tree_ball_dot(ball), out)
        return 0
    if c == "cover":
        ball = cover_ball(g, radius=args.radius)
        summary = [f"vertices: {len(ball.paths)}", f"edges: {len(ball.edges)}",
                   f"acyclic: {'yes' if ball.acyclic else 'no'}"]
        _emit_dot(args, summary, cover_ball_dot(ball), out)
        return 0 if ball.acyclic else 1
    if c == "cat0":
        if args.root is not None and args.root not in g.vertices:
            raise InputError(f"unknown root vertex {args.root!r}")
        gram = build_gram(g, args.root)
        for v in gram.order:
            out.append(f"vertex {v}: {format_matrix(gram.vertex[v])}")
        for e in gram.edge_sequence:
            out.append(f"edge {e}: {format_matrix(gram.edge[e])}")
        rep = verify_gram(g, gram)
        out.append(str(rep))
        return 0 if rep.ok else 1
    if c == "chain":
        chain = build_chain(g, args.strategy, args.length)
        for i, st in enumerate(chain.stages):
            groups = ", ".join(f"{v}: {G}" for v, G in sorted(st.graph.vertices.items()))
            out.append(f"stage {i}: vertices [{groups}], edges [{' '.join(st.graph.pairs())}]")
        rep = verify_chain(chain, args.samples, args.seed)
        out.append(f"functoriality: {rep.functoriality_checked - rep.functoriality_failures}"
                   f"/{rep.functoriality_checked}")
        out.append(f"injectivity: {rep.injectivity_checked - rep.injectivity_failures}"
                   f"/{rep.injectivity_checked}")
        out.append(f"surjectivity: {rep.surjectivity_checked - rep.surjectivity_failures}"
                   f"/{rep.surjectivity_checked}")
        return 0 if rep.ok else 1
    if c == "verify":
        checks = run_suite(g, args.samples, args.seed)
        out.extend(str(x) for x in checks)
        return 0 if all(x.passed for x in checks) else 1
    raise InputError(f"unknown command {c}")


INPUT_ERRORS = (OSError, GraphFormatError, WordSyntaxError, InputError, NotATree,
                EmbeddingFailure, CycleDetected, InclusionError)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out: List[str] = []
    try:
        status = run(args, out)
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("\n".join(out))
    return status


if __name__ == "__main__":
    sys.exit(main())
