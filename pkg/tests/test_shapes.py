import random

import numpy as np
import pytest

from perfcode.catalog import cyclic, dihedral, direct_product, elementary_abelian, make_family, quaternion
from perfcode.shapes import (
    ShapeTag,
    bounded_isomorphic,
    find_isomorphism,
    fingerprint,
    recognize_shape,
    small_generating_set,
)
from perfcode.core import generate
from perfcode.spec import build

from conftest import cached_group, catalogue


def test_shape_examples():
    assert recognize_shape(quaternion(16)) == ShapeTag("generalized_quaternion", (16,))
    assert str(recognize_shape(elementary_abelian(2, 2))) == "elementary_abelian(2,2)"
    assert str(recognize_shape(cached_group("symmetric:3"))) == "dihedral(6)"
    assert str(recognize_shape(cached_group("alternating:4"))) == "other"


def _expected(kind, n):
    # the smallest dihedral groups coincide with cyclic and Klein groups
    if kind == "dihedral" and n == 2:
        return ShapeTag("cyclic", (2,))
    if kind == "dihedral" and n == 4:
        return ShapeTag("elementary_abelian", (2, 2))
    return ShapeTag(kind, (n,))


def test_round_trip_cyclic_dihedral():
    for n in range(1, 513):
        assert recognize_shape(cyclic(n)) == ShapeTag("cyclic", (n,))
    for n in range(2, 513, 2):
        assert recognize_shape(dihedral(n)) == _expected("dihedral", n), n


def test_round_trip_quaternion_and_elementary():
    for n in (8, 16, 32, 64, 128, 256, 512):
        assert recognize_shape(quaternion(n)) == ShapeTag("generalized_quaternion", (n,))
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23):
        k = 2
        while p**k <= 512:
            assert recognize_shape(elementary_abelian(p, k)) == ShapeTag("elementary_abelian", (p, k))
            k += 1


def test_shape_matches_defining_relations():
    # Q16 built independently: the order-16 unit quaternion-like subgroup of sl2:7
    G = cached_group("subgroup:sl2:7:16:0")
    assert recognize_shape(G) == ShapeTag("generalized_quaternion", (16,))
    assert recognize_shape(cached_group("product:cyclic:2*cyclic:4")).kind == "other"


def test_iso_examples():
    assert not bounded_isomorphic(cyclic(4), elementary_abelian(2, 2))
    assert not bounded_isomorphic(quaternion(8), dihedral(8))
    v = bounded_isomorphic(cached_group("sl2:3"), build("semidirect:quaternion:8:cyclic:3:auto=4,5"))
    assert v and v.exact


def test_iso_gives_homomorphism():
    A = cached_group("psl2:5")
    B = cached_group("alternating:5")
    phi = find_isomorphism(A, B)
    assert phi is not None and sorted(phi.tolist()) == list(range(60))
    assert np.array_equal(phi[A.mul], B.mul[phi[:, None], phi[None, :]])


def test_iso_same_fingerprint_different_groups():
    # Z4 x Z4 and Z2 x Q8 share order and element-order profile but are not isomorphic
    A = cached_group("product:cyclic:4*cyclic:4")
    B = cached_group("product:quaternion:8*cyclic:2")
    assert not bounded_isomorphic(A, B)


def test_relabelled_copy_is_isomorphic():
    G = cached_group("symmetric:4")
    rng = np.random.default_rng(3)
    perm = np.concatenate([[0], 1 + rng.permutation(G.order - 1)])
    inv = np.argsort(perm)
    mul = perm[G.mul[inv[:, None], inv[None, :]]]
    from perfcode.core import GroupTable

    H = GroupTable(mul)
    assert bounded_isomorphic(G, H).exact and bounded_isomorphic(G, H)


def test_fingerprint_mode_above_limit():
    A = cyclic(300)
    v = bounded_isomorphic(A, cyclic(300))
    assert v and not v.exact
    assert not bounded_isomorphic(A, dihedral(300))


def test_reflexive_and_symmetric_on_catalogue():
    specs = [s for s in catalogue(64)]
    groups = {s: cached_group(s) for s in specs}
    rng = random.Random(5)
    for s in specs:
        assert bounded_isomorphic(groups[s], groups[s])
    by_order = {}
    for s in specs:
        by_order.setdefault(groups[s].order, []).append(s)
    for order, same in by_order.items():
        for a in same:
            b = rng.choice(same)
            ab = bounded_isomorphic(groups[a], groups[b])
            ba = bounded_isomorphic(groups[b], groups[a])
            assert bool(ab) == bool(ba), (a, b)
            if fingerprint(groups[a]) != fingerprint(groups[b]):
                assert not ab and ab.exact


def test_generating_set_generates():
    for s in ["symmetric:5", "sl2:5", "product:cyclic:4*cyclic:8"]:
        G = cached_group(s)
        assert generate(G, small_generating_set(G)).order == G.order


def test_make_family_round_trip_named():
    assert recognize_shape(make_family("dihedral", 20)) == ShapeTag("dihedral", (20,))
    assert recognize_shape(direct_product(cyclic(3), cyclic(5))) == ShapeTag("cyclic", (15,))
