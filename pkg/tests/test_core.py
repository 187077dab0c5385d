import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from perfcode.catalog import cyclic, dihedral, elementary_abelian, quaternion, symmetric
from perfcode.core import (
    GroupTable,
    Subgroup,
    center,
    check_table,
    closure_from_matrices,
    closure_from_permutations,
    conjugacy_classes,
    derived_series,
    generate,
    is_solvable,
    order_profile,
    quotient,
    subgroup_table,
    trivial_subgroup,
    whole_group,
)
from perfcode.errors import InvalidGenerator, NotNormal

from conftest import cached_group, catalogue_groups


def brute_closure(perms):
    """Plain set-based closure of tuples, no numpy."""
    if not perms:
        return {()}
    n = len(perms[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in perms:
                c = tuple(g[a[i]] for i in range(n))
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


def test_closure_s5():
    G = closure_from_permutations(["(1,2,3,4,5)", "(1,2)"])
    assert G.order == 120
    assert len(brute_closure([(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)])) == 120


def test_closure_empty_generators():
    assert closure_from_permutations([]).order == 1


def test_closure_klein():
    G = closure_from_permutations(["(1,2)(3,4)", "(1,3)(2,4)"])
    assert G.order == 4
    assert sorted(G.orders.tolist()) == [1, 2, 2, 2]


def test_closure_matrices_sl23():
    G = closure_from_matrices(3, [(1, 1, 0, 1), (0, 1, 2, 0)])
    assert G.order == 24


@pytest.mark.parametrize("bad", ["(1,2", "1,2)", "(1,1)", "(a,b)", "(0,1)"])
def test_bad_cycles(bad):
    with pytest.raises(InvalidGenerator):
        closure_from_permutations([bad])


def test_bad_image_array():
    with pytest.raises(InvalidGenerator):
        closure_from_permutations([[0, 0, 1]])


def test_not_a_group_table():
    with pytest.raises(ValueError):
        GroupTable(np.array([[0, 1], [1, 1]]))


def test_element_ops():
    G = cyclic(6)
    assert G.element_order(0) == 1
    assert G.element_order(1) == 6
    assert G.product(2, 5) == 1
    assert G.inverse(2) == 4
    Q = quaternion(8)
    z = center(Q)
    outside = [x for x in range(8) if x not in z]
    assert all(Q.element_order(x) == 4 for x in outside)


def test_conjugacy_classes_s3():
    G = symmetric(3)
    assert sorted(conjugacy_classes(G).sizes()) == [1, 2, 3]


def test_conjugacy_classes_abelian():
    G = elementary_abelian(3, 2)
    assert conjugacy_classes(G).sizes() == [1] * 9


def test_quaternion_unique_involution():
    Q = quaternion(8)
    assert len(Q.involutions) == 1
    part = conjugacy_classes(Q)
    assert len(part.classes[part.class_of[Q.involutions[0]]]) == 1
    assert part.involution_class_count == 1


def test_conjugacy_brute_force():
    G = cached_group("symmetric:4")
    part = conjugacy_classes(G)
    for x in range(G.order):
        orbit = {int(G.mul[G.mul[G.inv[g], x], g]) for g in range(G.order)}
        assert orbit == set(part.classes[part.class_of[x]].tolist())


def test_derived_series():
    series, solvable = derived_series(cached_group("alternating:5"))
    assert not solvable and len(series) == 1
    series, solvable = derived_series(cached_group("symmetric:4"))
    assert solvable
    assert [S.order for S in series] == [24, 12, 4, 1]
    series, solvable = derived_series(cyclic(10))
    assert solvable and [S.order for S in series] == [10, 1]


def test_center():
    assert center(cached_group("sl2:5")).order == 2
    assert center(cyclic(9)).order == 9
    assert center(quaternion(16)).order == 2


def test_center_brute_force():
    G = dihedral(12)
    expected = [x for x in range(12) if all(G.mul[x, y] == G.mul[y, x] for y in range(12))]
    assert center(G).members.tolist() == expected


def test_quotient():
    G = cached_group("sl2:5")
    Q = quotient(G, center(G))
    assert Q.group.order == 60
    check_table(Q.group)
    T = quotient(G, trivial_subgroup(G)).group
    assert T.order == G.order and order_profile(T) == order_profile(G)
    assert quotient(G, whole_group(G)).group.order == 1


def test_quotient_not_normal():
    G = symmetric(3)
    with pytest.raises(NotNormal):
        quotient(G, generate(G, [int(G.involutions[0])]))


def test_projection_is_homomorphism():
    G = cached_group("sl2:3")
    q = quotient(G, center(G))
    proj = q.projection
    lhs = proj[G.mul]
    rhs = q.group.mul[proj[:, None], proj[None, :]]
    assert np.array_equal(lhs, rhs)


def test_subgroup_table_embedding():
    G = dihedral(12)
    H = generate(G, [2])
    T = subgroup_table(G, H)
    check_table(T)
    assert T.order == 3


def test_check_table_catches_broken_associativity():
    # a Latin square with identity 0 that is not associative (order 5 loop)
    mul = np.array([
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ])
    G = GroupTable(mul)
    with pytest.raises(AssertionError):
        check_table(G)


@pytest.mark.parametrize("spec", ["symmetric:5", "sl2:5", "psl2:7", "binary_octahedral",
                                  "product:alternating:5*cyclic:3"])
def test_structural_invariants(spec):
    check_table(cached_group(spec))


def test_catalogue_tables_pass_invariants():
    for spec, G in catalogue_groups(120):
        check_table(G)


def test_class_sizes_divide_order():
    for spec, G in catalogue_groups(120):
        sizes = conjugacy_classes(G).sizes()
        assert sum(sizes) == G.order, spec
        assert all(G.order % s == 0 for s in sizes), spec


def test_pair_orders_divide_generated_subgroup():
    rng = random.Random(1)
    for spec, G in catalogue_groups(120):
        for _ in range(20):
            a, b = rng.randrange(G.order), rng.randrange(G.order)
            H = generate(G, [a, b])
            assert H.order % G.element_order(int(G.mul[a, b])) == 0, spec


def test_subgroup_invariants():
    G = cached_group("symmetric:4")
    H = generate(G, [1, 2])
    m = H.members
    assert 0 in H
    assert H.indicator[G.mul[m[:, None], m[None, :]]].all()
    assert H.indicator[G.inv[m]].all()
    assert G.order % H.order == 0
    assert Subgroup(G, m) == H and hash(Subgroup(G, m)) == hash(H)


perm_strategy = st.lists(st.permutations(list(range(6))), min_size=0, max_size=3)


@settings(max_examples=40, deadline=None)
@given(perm_strategy)
def test_random_permutation_groups(perms):
    G = closure_from_permutations([list(p) for p in perms])
    if perms:
        expected = PermutationGroup([Permutation(list(p)) for p in perms]).order()
    else:
        expected = 1
    assert G.order == expected
    check_table(G)
    if G.order <= 120:
        assert G.order == len(brute_closure([tuple(p) for p in perms]))


def test_is_solvable_matches_series():
    for spec in ["symmetric:4", "alternating:5", "sl2:5", "sl2:3", "dihedral:20"]:
        G = cached_group(spec)
        assert is_solvable(G) == (spec in {"symmetric:4", "sl2:3", "dihedral:20"})


def test_power_and_orders_agree():
    G = cached_group("psl2:7")
    for x in itertools.islice(range(G.order), 0, None, 7):
        k = int(G.orders[x])
        assert G.power(x, k) == 0
        assert all(G.power(x, d) != 0 for d in range(1, k))
