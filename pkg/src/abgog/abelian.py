"""Finitely generated abelian groups in invariant-factor form.

A group ``Z^r + Z/d_1 + ... + Z/d_t`` has ``r + t`` generators: the free ones
first, then the torsion ones. Elements are integer coordinate vectors in those
generators; homomorphisms are integer matrices whose columns are the images of
the domain generators.

>>> G = FgAbGroup(1, (2,))
>>> G.element(3, 1) + G.element(1, 1)
AbElement(Z x Z/2, (4, 0))
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterator, List, Optional, Sequence, Tuple

from . import linalg


class GroupMismatch(ValueError):
    pass


class IllDefinedHom(ValueError):
    pass


def _invariant_factors(torsion: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    """Normalize an arbitrary list of cyclic orders; returns (extra rank, factors)."""
    orders = [abs(int(d)) for d in torsion]
    n = len(orders)
    if n == 0:
        return 0, ()
    diag = [[orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
    _, D, _ = linalg.smith_normal_form(diag)
    ds = [D[i][i] for i in range(n)]
    return sum(1 for d in ds if d == 0), tuple(d for d in ds if d > 1)


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^rank`` plus cyclic factors; any torsion list is normalized on construction."""

    rank: int
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        extra, factors = _invariant_factors(self.torsion)
        object.__setattr__(self, "rank", int(self.rank) + extra)
        object.__setattr__(self, "torsion", factors)

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def moduli(self) -> Tuple[int, ...]:
        """0 for each free coordinate, d_i for each torsion coordinate."""
        return (0,) * self.rank + self.torsion

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def order(self) -> Optional[int]:
        return None if self.rank else prod(self.torsion)

    def relations(self) -> List[List[int]]:
        """ngens x t matrix whose columns d_i e_i present the torsion."""
        n, r = self.ngens, self.rank
        return [[d if i == r + j else 0 for j, d in enumerate(self.torsion)] for i in range(n)]

    def zero(self) -> "AbElement":
        return AbElement(self, (0,) * self.ngens)

    def element(self, *coords: int) -> "AbElement":
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return AbElement(self, tuple(coords))

    def gens(self) -> List["AbElement"]:
        n = self.ngens
        return [AbElement(self, tuple(int(i == j) for i in range(n))) for j in range(n)]

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "1"


@dataclass(frozen=True)
class AbElement:
    group: FgAbGroup
    coords: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.ngens:
            raise ValueError(
                f"element of {self.group} needs {self.group.ngens} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(
            int(c) % m if m else int(c) for c, m in zip(self.coords, self.group.moduli)))

    def _check(self, other: "AbElement"):
        if self.group != other.group:
            raise GroupMismatch(f"{self.group} vs {other.group}")

    def __add__(self, other: "AbElement") -> "AbElement":
        self._check(other)
        return AbElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "AbElement") -> "AbElement":
        self._check(other)
        return AbElement(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AbElement":
        return AbElement(self.group, tuple(-a for a in self.coords))

    def __mul__(self, n: int) -> "AbElement":
        return AbElement(self.group, tuple(n * a for a in self.coords))

    __rmul__ = __mul__

    def __bool__(self):
        return any(self.coords)

    @property
    def free_part(self) -> Tuple[int, ...]:
        return self.coords[:self.group.rank]

    @property
    def is_torsion(self) -> bool:
        return not any(self.free_part)

    def __repr__(self):
        return f"AbElement({self.group}, {self.coords})"


@dataclass(frozen=True)
class AbHom:
    """Homomorphism ``domain -> codomain`` given by an integer matrix.

    ``matrix`` has one row per codomain generator and one column per domain
    generator. Well-definedness is checked on construction.
    """

    domain: FgAbGroup
    codomain: FgAbGroup
    matrix: Tuple[Tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        n, m = self.domain.ngens, self.codomain.ngens
        rows = [tuple(int(x) for x in row) for row in self.matrix]
        if n == 0 and not rows:
            rows = [()] * m
        if len(rows) != m or any(len(r) != n for r in rows):
            raise ValueError(f"matrix must be {m} x {n}")
        mod = self.codomain.moduli
        rows = [tuple(x % mod[i] for x in r) if mod[i] else r for i, r in enumerate(rows)]
        object.__setattr__(self, "matrix", tuple(rows))
        r = self.domain.rank
        for j, d in enumerate(self.domain.torsion):
            col = [rows[i][r + j] * d for i in range(m)]
            if any(c % mod[i] if mod[i] else c for i, c in enumerate(col)):
                raise IllDefinedHom(
                    f"generator of order {d} must map to an element of order dividing {d}")

    @classmethod
    def from_images(cls, domain, codomain, images: Sequence[AbElement]) -> "AbHom":
        cols = [img.coords for img in images]
        return cls(domain, codomain, tuple(zip(*cols)) if cols else ())

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(row[j] for row in self.matrix)

    def __call__(self, a: AbElement) -> AbElement:
        return ab_apply(self, a)

    def compose(self, inner: "AbHom") -> "AbHom":
        """``self`` after ``inner``."""
        if inner.codomain != self.domain:
            raise GroupMismatch("composition of incompatible homomorphisms")
        return AbHom.from_images(inner.domain, self.codomain,
                                 [self(inner(g)) for g in inner.domain.gens()])

    @property
    def free_block(self) -> List[List[int]]:
        """Free-to-free block of the matrix; this is the map after tensoring with Q."""
        return [list(row[:self.domain.rank]) for row in self.matrix[:self.codomain.rank]]

    @cached_property
    def _solver(self):
        # [H | D_cod] z = t over Z decides image membership modulo codomain torsion
        n = self.domain.ngens
        rel = self.codomain.relations()
        a = [list(row) + rrow for row, rrow in zip(self.matrix, rel)]
        width = n + len(self.codomain.torsion)
        U, D, V = linalg.smith_normal_form(a, width)
        return U, D, V, width

    @cached_property
    def _image_hnf(self):
        m = self.codomain.ngens
        gens = [self.column(j) for j in range(self.domain.ngens)]
        gens += [list(col) for col in linalg.transpose(self.codomain.relations(), m)]
        return linalg.hermite_rows(gens, m)

    @cached_property
    def _kernel(self) -> "FgAbGroup":
        lattice = _kernel_lattice(self.matrix, self.codomain, self.domain.ngens)
        return subgroup(self.domain, [self.domain.element(v) for v in lattice])[0]

    def __repr__(self):
        return f"AbHom({self.domain} -> {self.codomain}, {[list(r) for r in self.matrix]})"


def _kernel_lattice(matrix, codomain: FgAbGroup, n: int) -> List[List[int]]:
    """Basis of {x in Z^n : matrix x = 0 in codomain}."""
    rel = codomain.relations()
    t = len(codomain.torsion)
    a = [list(row) + rrow for row, rrow in zip(matrix, rel)]
    ker = linalg.integer_kernel(a, n + t)
    basis, _ = linalg.hermite_rows([v[:n] for v in ker], n)
    return basis


def _cokernel(rel: Sequence[Sequence[int]], k: int):
    """Present Z^k / (column span of ``rel``) in invariant-factor form.

    Returns (group, to_coords, gen_vectors): ``to_coords`` is a matrix mapping a
    vector of Z^k to coordinates in ``group``; ``gen_vectors[j]`` is a vector of
    Z^k representing generator j.
    """
    ncols = len(rel[0]) if rel else 0
    if ncols == 0:
        rel = [[] for _ in range(k)]
    U, D, _ = linalg.smith_normal_form(rel, ncols)
    diag = [D[i][i] if i < ncols else 0 for i in range(k)]
    Uinv = [[int(x) for x in row] for row in linalg.inverse(U)] if k else []
    free = [i for i in range(k) if diag[i] == 0]
    tors = [i for i in range(k) if diag[i] > 1]
    order = free + tors
    group = FgAbGroup(len(free), tuple(diag[i] for i in tors))
    to_coords = [U[i] for i in order]
    gen_vectors = [[Uinv[r][i] for r in range(k)] for i in order]
    return group, to_coords, gen_vectors


def subgroup(g: FgAbGroup, generators: Sequence[AbElement]) -> Tuple[FgAbGroup, AbHom]:
    """The subgroup generated by ``generators`` as an abstract group with its inclusion."""
    k = len(generators)
    cols = [x.coords for x in generators]
    matrix = [list(r) for r in zip(*cols)] if cols else [[] for _ in range(g.ngens)]
    lattice = _kernel_lattice(matrix, g, k)
    rel = linalg.transpose(lattice, k) if lattice else [[] for _ in range(k)]
    h, _, gen_vectors = _cokernel(rel, k)
    images = []
    for vec in gen_vectors:
        images.append(AbElement(g, tuple(linalg.matvec(matrix, vec)) if k else (0,) * g.ngens))
    return h, AbHom.from_images(h, g, images)


# --- operations -------------------------------------------------------------

def ab_add(a: AbElement, b: AbElement) -> AbElement:
    return a + b


def ab_apply(h: AbHom, a: AbElement) -> AbElement:
    if a.group != h.domain:
        raise GroupMismatch(f"{a} is not in {h.domain}")
    return AbElement(h.codomain, tuple(linalg.matvec(h.matrix, a.coords))
                     if h.domain.ngens else (0,) * h.codomain.ngens)


def smith_normal_form(m):
    return linalg.smith_normal_form(m)


def ab_kernel(h: AbHom) -> FgAbGroup:
    return h._kernel


def ab_is_injective(h: AbHom) -> bool:
    return h._kernel.is_trivial


def ab_image_membership(h: AbHom, target: AbElement) -> Optional[AbElement]:
    """Some x with h(x) = target, or None when target is not in the image."""
    if target.group != h.codomain:
        raise GroupMismatch(f"{target} is not in {h.codomain}")
    U, D, V, width = h._solver
    w = linalg.matvec(U, target.coords) if U else []
    y = [0] * width
    for i, wi in enumerate(w):
        d = D[i][i] if i < width else 0
        if d == 0:
            if wi:
                return None
        elif wi % d:
            return None
        else:
            y[i] = wi // d
    z = linalg.matvec(V, y) if width else []
    return AbElement(h.domain, tuple(z[:h.domain.ngens]))


def _reduce_mod_hnf(coords, basis, pivots) -> Tuple[int, ...]:
    v = list(coords)
    for row, c in zip(basis, pivots):
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return tuple(v)


def ab_canonical_coset_rep(h: AbHom, a: AbElement) -> AbElement:
    """Canonical representative of ``a + im(h)``: pivot coordinates of the HNF of
    the image lattice reduced into [0, pivot)."""
    if a.group != h.codomain:
        raise GroupMismatch(f"{a} is not in {h.codomain}")
    if not ab_is_injective(h):
        raise ValueError("canonical coset representatives need an injective homomorphism")
    basis, pivots = h._image_hnf
    return AbElement(h.codomain, _reduce_mod_hnf(a.coords, basis, pivots))


def coset_decompose(h: AbHom, a: AbElement) -> Tuple[AbElement, AbElement]:
    """Split ``a = rep + h(s)`` with ``rep`` canonical; returns (rep, s)."""
    rep = ab_canonical_coset_rep(h, a)
    s = ab_image_membership(h, a - rep)
    assert s is not None
    return rep, s


def coset_index(h: AbHom) -> Optional[int]:
    """[codomain : im h], or None when infinite."""
    basis, pivots = h._image_hnf
    if len(pivots) < h.codomain.ngens:
        return None
    return prod(row[c] for row, c in zip(basis, pivots))


def coset_reps(h: AbHom, bound: int) -> Tuple[List[AbElement], bool]:
    """Canonical coset representatives of im(h).

    Non-pivot (unbounded) coordinates range over [-bound, bound]; the flag is
    True when that truncation happened.
    """
    m = h.codomain.ngens
    basis, pivots = h._image_hnf
    ranges = []
    piv = dict(zip(pivots, (row[c] for row, c in zip(basis, pivots))))
    for c in range(m):
        ranges.append(range(piv[c]) if c in piv else range(-bound, bound + 1))
    truncated = len(piv) < m
    reps = [AbElement(h.codomain, combo) for combo in itertools.product(*ranges)]
    reps.sort(key=lambda x: (any(x.coords), tuple(abs(c) for c in x.coords), x.coords))
    return reps, truncated


def ab_torsion_subgroup(g: FgAbGroup) -> List[AbElement]:
    ranges = [range(1)] * g.rank + [range(d) for d in g.torsion]
    return [AbElement(g, c) for c in itertools.product(*ranges)]


def elements_in_box(g: FgAbGroup, bound: int) -> Iterator[AbElement]:
    """Elements with free coordinates in [-bound, bound] (torsion coordinates full)."""
    ranges = [range(-bound, bound + 1)] * g.rank + [range(d) for d in g.torsion]
    for c in itertools.product(*ranges):
        yield AbElement(g, c)
