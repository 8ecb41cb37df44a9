import itertools
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abgog.abelian import (AbElement, AbHom, FgAbGroup, GroupMismatch, IllDefinedHom, ab_add,
                           ab_apply, ab_canonical_coset_rep, ab_image_membership,
                           ab_is_injective, ab_kernel, ab_torsion_subgroup, coset_index,
                           coset_reps, smith_normal_form, subgroup)
from conftest import groups
from oracles import finite_elements, invariant_factors, sympy_rank

Z = FgAbGroup(1)
Z2 = FgAbGroup(2)


def hom(dom, cod, m):
    return AbHom(dom, cod, m)


def test_group_normalization():
    assert FgAbGroup(0, (2, 3)) == FgAbGroup(0, (6,))
    assert FgAbGroup(0, (4, 6)).torsion == (2, 12)
    assert FgAbGroup(1, (1, 0)) == FgAbGroup(2)
    assert str(FgAbGroup(1, (2,))) == "Z x Z/2"
    assert str(FgAbGroup(0)) == "1"


@given(st.lists(st.integers(2, 12), max_size=3))
def test_normalization_preserves_order(t):
    G = FgAbGroup(0, tuple(t))
    order = 1
    for d in t:
        order *= d
    assert G.order == order
    diag = [[d if i == j else 0 for j in range(len(t))] for i, d in enumerate(t)]
    assert G.torsion == tuple(d for d in invariant_factors(diag) if d > 1)


def test_add_examples():
    G = FgAbGroup(1, (2,))
    assert ab_add(G.element(3, 1), G.element(1, 1)) == G.element(4, 0)
    assert ab_add(Z.element(0), Z.element(5)) == Z.element(5)
    Z4 = FgAbGroup(0, (4,))
    assert ab_add(Z4.element(3), Z4.element(3)) == Z4.element(2)
    with pytest.raises(GroupMismatch):
        ab_add(Z.element(1), Z2.element(1, 0))


def test_apply_examples():
    assert ab_apply(hom(Z, Z, [[2]]), Z.element(3)) == Z.element(6)
    assert ab_apply(hom(Z, Z2, [[2], [3]]), Z.element(1)) == Z2.element(2, 3)
    Z_2, Z_4 = FgAbGroup(0, (2,)), FgAbGroup(0, (4,))
    assert ab_apply(hom(Z_2, Z_4, [[2]]), Z_2.element(1)) == Z_4.element(2)
    with pytest.raises(IllDefinedHom):
        hom(Z_2, Z_4, [[1]])
    with pytest.raises(IllDefinedHom):
        hom(Z_2, Z, [[1]])


def test_smith_examples():
    assert smith_normal_form([[4, 6]])[1] == [[2, 0]]
    assert smith_normal_form([[2, 0], [0, 3]])[1] == [[1, 0], [0, 6]]


def test_kernel_examples():
    assert ab_kernel(hom(Z, Z, [[2]])).is_trivial
    Z_4, Z_2 = FgAbGroup(0, (4,)), FgAbGroup(0, (2,))
    assert ab_kernel(hom(Z_4, Z_2, [[1]])) == Z_2
    assert ab_kernel(hom(Z2, Z, [[1, 1]])) == Z


def test_injective_examples():
    assert ab_is_injective(hom(Z, Z2, [[2], [3]]))
    assert not ab_is_injective(hom(FgAbGroup(0, (4,)), FgAbGroup(0, (2,)), [[1]]))
    assert not ab_is_injective(hom(Z, Z, [[0]]))


def test_image_membership_examples():
    h = hom(Z, Z, [[2]])
    assert ab_image_membership(h, Z.element(4)) == Z.element(2)
    assert ab_image_membership(h, Z.element(3)) is None
    assert ab_image_membership(hom(Z, Z2, [[2], [3]]), Z2.element(4, 6)) == Z.element(2)


def test_coset_rep_examples():
    h = hom(Z, Z, [[3]])
    assert ab_canonical_coset_rep(h, Z.element(7)) == Z.element(1)
    assert ab_canonical_coset_rep(h, Z.element(-2)) == Z.element(1)
    assert ab_canonical_coset_rep(hom(Z, Z2, [[1], [0]]), Z2.element(5, 2)) == Z2.element(0, 2)
    with pytest.raises(ValueError):
        ab_canonical_coset_rep(hom(Z, Z, [[0]]), Z.element(1))


def test_torsion_subgroup_examples():
    G = FgAbGroup(1, (2,))
    assert sorted(x.coords for x in ab_torsion_subgroup(G)) == [(0, 0), (0, 1)]
    assert [x.coords for x in ab_torsion_subgroup(Z2)] == [(0, 0)]
    assert len(ab_torsion_subgroup(FgAbGroup(0, (2, 4)))) == 8


def test_coset_index_and_reps():
    h = hom(Z, Z, [[3]])
    assert coset_index(h) == 3
    reps, trunc = coset_reps(h, 1)
    assert [r.coords for r in reps] == [(0,), (1,), (2,)] and not trunc
    h2 = hom(Z, Z2, [[1], [0]])
    assert coset_index(h2) is None
    reps, trunc = coset_reps(h2, 2)
    assert trunc and len(reps) == 5 and reps[0].coords == (0, 0)


# --- random homomorphisms ---------------------------------------------------------

@st.composite
def homs(draw, dom=None, cod=None):
    dom = dom or draw(groups)
    cod = cod or draw(groups)
    cols = []
    for j in range(dom.ngens):
        d = dom.moduli[j]
        col = []
        for i in range(cod.ngens):
            m = cod.moduli[i]
            if d == 0:
                col.append(draw(st.integers(-4, 4)))
            elif m == 0:
                col.append(0)
            else:
                # image of an order-d generator must be killed by d
                step = m // gcd(m, d)
                col.append(step * draw(st.integers(0, m)))
        cols.append(col)
    return AbHom(dom, cod, tuple(zip(*cols)) if cols else ())


def elements(G):
    return st.tuples(*([st.integers(-6, 6)] * G.rank + [st.integers(0, d - 1) for d in G.torsion])
                     ).map(lambda c: AbElement(G, c))


@given(st.data())
def test_hom_is_additive(data):
    h = data.draw(homs())
    a, b = data.draw(elements(h.domain)), data.draw(elements(h.domain))
    assert h(a + b) == h(a) + h(b)


@given(st.data())
def test_membership_returns_a_preimage(data):
    h = data.draw(homs())
    x = data.draw(elements(h.domain))
    pre = ab_image_membership(h, h(x))
    assert pre is not None and h(pre) == h(x)
    y = data.draw(elements(h.codomain))
    pre = ab_image_membership(h, y)
    if pre is not None:
        assert h(pre) == y


@given(st.data())
def test_coset_rep_is_invariant(data):
    G = data.draw(groups)
    _, h = subgroup(G, data.draw(st.lists(elements(G), max_size=3)))   # injective by construction
    a = data.draw(elements(h.codomain))
    s = data.draw(elements(h.domain))
    r = ab_canonical_coset_rep(h, a)
    assert r == ab_canonical_coset_rep(h, a + h(s))
    assert ab_image_membership(h, a - r) is not None


finite_groups = st.lists(st.integers(2, 8), min_size=1, max_size=2).map(
    lambda t: FgAbGroup(0, tuple(t))).filter(lambda G: G.order <= 64)


@given(st.data())
def test_injectivity_and_kernel_against_enumeration(data):
    dom = data.draw(finite_groups)
    cod = data.draw(st.one_of(finite_groups, groups))
    h = data.draw(homs(dom, cod))
    ker = [x for x in finite_elements(dom.torsion) if not h(AbElement(dom, x))]
    assert ab_is_injective(h) == (len(ker) == 1)
    K = ab_kernel(h)
    assert K.order == len(ker)


@given(groups, st.data())
def test_subgroup_inclusion(G, data):
    gens = data.draw(st.lists(elements(G), max_size=3))
    H, inc = subgroup(G, gens)
    assert ab_is_injective(inc)
    for g in gens:
        assert ab_image_membership(inc, g) is not None
    span = AbHom.from_images(FgAbGroup(len(gens)), G, gens)
    for x in H.gens():
        assert ab_image_membership(span, inc(x)) is not None
    free_rank = sympy_rank([list(g.free_part) for g in gens]) if G.rank and gens else 0
    assert H.rank == free_rank


def test_subgroup_example():
    G = FgAbGroup(2)
    H, inc = subgroup(G, [G.element(2, 0)])
    assert H == Z and inc(H.element(1)) == G.element(2, 0)
    for c in itertools.product(range(-3, 4), repeat=2):
        x = G.element(*c)
        assert (ab_image_membership(inc, x) is not None) == (c[0] % 2 == 0 and c[1] == 0)
