"""Independent reference implementations used to cross-check the package.

Nothing here imports the package's reduction or linear algebra code; the
oracles work on plain tuples and ints, or delegate to sympy.
"""

from __future__ import annotations

import itertools
from collections import deque

import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf


# --- bounded Dehn search for graphs of infinite cyclic groups ------------------

class GbsDehnOracle:
    """Word problem in a graph of infinite cyclic groups by exhaustive rewriting.

    ``edges`` maps a positive edge id to ``(source, target, m_source, m_target)``:
    the generator of the edge group goes to ``m_source`` in the source vertex
    group and to ``m_target`` in the target. Letters are ``("v", vertex, k)``
    and ``("e", id)`` with reversed ids prefixed by ``~``.

    The search explores every word reachable by the defining relations without
    growing beyond ``len(word) + slack`` letters.
    """

    def __init__(self, edges, tree=(), max_states=200000):
        self.data = {}
        for eid, (u, w, mu, mw) in edges.items():
            self.data[eid] = (u, w, mu, mw)
            self.data["~" + eid] = (w, u, mw, mu)
        self.tree = set(tree) | {"~" + t for t in tree}
        self.max_states = max_states

    @staticmethod
    def rev(eid):
        return eid[1:] if eid.startswith("~") else "~" + eid

    def successors(self, w, cap):
        n = len(w)
        for i, x in enumerate(w):
            if x[0] == "v":
                if x[2] == 0:
                    yield w[:i] + w[i + 1:]
                for eid, (u, t, mu, mt) in self.data.items():
                    if x[1] != u or x[2] % mu:
                        continue
                    k = x[2] // mu
                    if eid in self.tree:
                        # tree relation: the two images of s are equal
                        yield w[:i] + (("v", t, mt * k),) + w[i + 1:]
                    elif n + 2 <= cap:
                        yield w[:i] + (("e", eid), ("v", t, mt * k), ("e", self.rev(eid))) + w[i + 1:]
            else:
                if x[1] in self.tree:
                    yield w[:i] + w[i + 1:]
            if i + 1 < n:
                y = w[i + 1]
                if x[0] == y[0] == "v" and x[1] == y[1]:
                    yield w[:i] + (("v", x[1], x[2] + y[2]),) + w[i + 2:]
                if x[0] == y[0] == "e" and y[1] == self.rev(x[1]):
                    yield w[:i] + w[i + 2:]
            if i + 2 < n and x[0] == "e" and w[i + 1][0] == "v" and w[i + 2] == ("e", self.rev(x[1])):
                u, t, mu, mt = self.data[x[1]]
                y = w[i + 1]
                if y[1] == t and y[2] % mt == 0:
                    yield w[:i] + (("v", u, mu * (y[2] // mt)),) + w[i + 3:]

    def is_trivial(self, word, slack=0):
        word = tuple(word)
        cap = len(word) + slack
        seen = {word}
        queue = deque([word])
        while queue:
            w = queue.popleft()
            if not w:
                return True
            for nxt in self.successors(w, cap):
                if len(nxt) <= cap and nxt not in seen:
                    if len(seen) >= self.max_states:
                        raise RuntimeError("Dehn search exceeded its state budget")
                    seen.add(nxt)
                    queue.append(nxt)
        return False


def oracle_to_text(word):
    return " ".join(f"{x[1]}[{x[2]}]" if x[0] == "v" else x[1] for x in word)


def bs_words(max_len=6, bound=3):
    """Words over x^k (k != 0, |k| <= bound), e, ~e with no adjacent vertex
    letters and no adjacent e ~e / ~e e."""
    vs = [("v", "v", k) for k in range(-bound, bound + 1) if k]
    es = [("e", "e"), ("e", "~e")]

    def ok(prev, x):
        if prev is None:
            return True
        if prev[0] == x[0] == "v":
            return False
        return not (prev[0] == x[0] == "e" and prev[1] != x[1])

    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            prev = w[-1] if w else None
            for x in vs + es:
                if ok(prev, x):
                    nxt.append(w + (x,))
        out += nxt
        frontier = nxt
    return out


def loop_words(edges, base, max_len=6, bound=3):
    """Edge-path-consistent loops at ``base`` with nonzero vertex letters in
    [-bound, bound], no adjacent vertex letters and no backtracking."""
    half = {}
    for eid, (u, w, _, _) in edges.items():
        half[eid] = (u, w)
        half["~" + eid] = (w, u)
    out = []

    def grow(w, at):
        if at == base:
            out.append(w)
        if len(w) == max_len:
            return
        prev = w[-1] if w else None
        if prev is None or prev[0] != "v":
            for k in range(-bound, bound + 1):
                if k:
                    grow(w + (("v", at, k),), at)
        for eid, (u, t) in sorted(half.items()):
            if u != at:
                continue
            if prev is not None and prev[0] == "e" and GbsDehnOracle.rev(prev[1]) == eid:
                continue
            grow(w + (("e", eid),), t)

    grow((), base)
    return out


# --- abelian group oracles -------------------------------------------------------

def invariant_factors(matrix):
    """Nonzero diagonal of the Smith form, computed by sympy."""
    if not matrix or not matrix[0]:
        return []
    d = sympy_snf(sympy.Matrix(matrix), domain=sympy.ZZ)
    return [abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0]


def finite_elements(torsion):
    return list(itertools.product(*[range(d) for d in torsion]))


def sympy_rank(rows):
    return sympy.Matrix(rows).rank() if rows else 0
