"""Exact linear algebra over the rationals and the integers.

Rational matrices are lists of rows of :class:`fractions.Fraction`; integer
matrices are lists of rows of Python ints. Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List[Fraction]]
IntMatrix = List[List[int]]


def qmat(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(n: int, m: int):
    return [[0] * m for _ in range(n)]


def identity(n: int, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


def transpose(a, ncols: int | None = None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a, b, inner: int | None = None):
    """Product of an n x k and a k x m matrix (lists of rows).

    ``inner`` only matters when k = 0, where the row lists cannot tell us m.
    """
    if not a:
        return []
    k = len(a[0])
    if k == 0:
        m = inner if inner is not None else 0
        return [[0] * m for _ in a]
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def rref(rows) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def det(a) -> Fraction:
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        result *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(a) -> Matrix:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def solve(a, b) -> List[Fraction] | None:
    """Some solution x of a x = b, or None if the system is inconsistent."""
    n = len(a[0]) if a else 0
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    red, piv = rref(aug)
    if piv and piv[-1] == n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(red, piv):
        x[c] = row[n]
    return x


def extend_to_basis(cols: Sequence[Sequence[Fraction]], dim: int) -> List[int]:
    """Greedily pick standard basis indices completing ``cols`` to a basis.

    ``cols`` must be linearly independent vectors of length ``dim``.
    """
    current = [list(c) for c in cols]
    added: List[int] = []
    r = rank(current) if current else 0
    for j in range(dim):
        if r == dim:
            break
        cand = current + [[Fraction(int(i == j)) for i in range(dim)]]
        if rank(cand) > r:
            current = cand
            r += 1
            added.append(j)
    return added


def leading_minors(a) -> List[Fraction]:
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def is_positive_definite(a) -> bool:
    """Sylvester's criterion; the 0 x 0 matrix counts as positive definite."""
    return all(m > 0 for m in leading_minors(a))


def is_symmetric(a) -> bool:
    return all(a[i][j] == a[j][i] for i in range(len(a)) for j in range(i))


# --- integer normal forms -------------------------------------------------

def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None
                      ) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*m*V = D diagonal, d_1 | d_2 | ..., U, V unimodular.

    Diagonal entries are non-negative; zeros trail the nonzero ones.
    """
    a = [list(map(int, row)) for row in m]
    n = len(a)
    k = len(a[0]) if a else (ncols or 0)
    U = identity(n)
    V = identity(k)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(n, k)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, k) if a[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, k):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        done = False
            if not done:
                continue
            # pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, k)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if t < n and t < k and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return U, a, V


def hermite_rows(rows: Sequence[Sequence[int]], ncols: int) -> Tuple[IntMatrix, List[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns an echelon basis (positive pivots, entries above each pivot reduced
    into [0, pivot)) and the pivot columns.
    """
    pool = [list(map(int, r)) for r in rows if any(r)]
    basis: IntMatrix = []
    pivots: List[int] = []
    for c in range(ncols):
        active = [r for r in pool if r[c]]
        if not active:
            continue
        rest = [r for r in pool if not r[c]]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[c] // p[c]
                r = [x - q * y for x, y in zip(r, p)]
                if r[c]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        p = active[0]
        if p[c] < 0:
            p = [-x for x in p]
        for i, b in enumerate(basis):
            q = b[c] // p[c]
            if q:
                basis[i] = [x - q * y for x, y in zip(b, p)]
        basis.append(p)
        pivots.append(c)
        pool = rest
    return basis, pivots


def integer_kernel(m: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Basis vectors of the lattice {x in Z^ncols : m x = 0}."""
    if not m:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    _, D, V = smith_normal_form(m, ncols)
    r = sum(1 for i in range(min(len(D), ncols)) if D[i][i])
    return [[V[i][j] for i in range(ncols)] for j in range(r, ncols)]


def format_fraction(x: Fraction) -> str:
    """``p/q`` in lowest terms, or ``p`` when q = 1."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
