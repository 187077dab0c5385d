import itertools

import pytest

from perfcode.catalog import cyclic, elementary_abelian, quaternion
from perfcode.core import center, generate, is_solvable, whole_group
from perfcode.errors import NotFound
from perfcode.lattice import (
    all_subgroups,
    core_o2,
    hall_subgroup,
    maximal_subgroups,
    normal_subgroups,
    normal_subgroups_and_socle,
    normalizer,
    prime_signature,
    subgroup_classes,
    sylow,
)
from perfcode.shapes import bounded_isomorphic, recognize_shape

from conftest import cached_group, catalogue_groups


def set_closure(G, elems):
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in elems:
                y = int(G.mul[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def power_set_subgroups(G):
    out = set()
    for r in range(G.order + 1):
        for subset in itertools.combinations(range(G.order), r):
            s = set(subset)
            if 0 in s and all(int(G.mul[a, b]) in s for a in s for b in s):
                out.add(frozenset(s))
    return out


def incremental_subgroups(G):
    found = {frozenset([0])}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for g in range(G.order):
                if g not in H:
                    J = set_closure(G, list(H) + [g])
                    if J not in found:
                        found.add(J)
                        nxt.append(J)
        frontier = nxt
    return found


def as_sets(G):
    return {frozenset(S.members.tolist()) for S in all_subgroups(G)}


def conj_orbits(G, subs):
    classes = []
    left = set(subs)
    while left:
        H = next(iter(left))
        orbit = {frozenset(int(G.mul[G.mul[G.inv[g], h], g]) for h in H) for g in range(G.order)}
        classes.append(orbit)
        left -= orbit
    return classes


SMALL = ["cyclic:6", "dihedral:8", "quaternion:8", "dihedral:10", "alternating:4", "dihedral:12",
         "elementary_abelian:2:3", "semidirect:cyclic:3:cyclic:4:exp=2", "product:cyclic:2*cyclic:6"]


@pytest.mark.parametrize("spec", [s for s in SMALL if int(cached_group(s).order) <= 12])
def test_against_power_set(spec):
    G = cached_group(spec)
    assert as_sets(G) == power_set_subgroups(G)


@pytest.mark.parametrize("spec", ["symmetric:4", "sl2:3", "dihedral:24", "product:dihedral:6*cyclic:4",
                                  "semidirect:cyclic:7:cyclic:3:exp=2", "quaternion:16", "dihedral:16"])
def test_against_incremental_closure(spec):
    G = cached_group(spec)
    subs = incremental_subgroups(G)
    assert as_sets(G) == subs
    ours = sorted(sorted(c.size for c in subgroup_classes(G)))
    assert ours == sorted(len(o) for o in conj_orbits(G, subs))


@pytest.mark.parametrize("spec,total,classes", [
    ("symmetric:4", 30, 11), ("alternating:5", 59, 9), ("quaternion:8", 6, 6), ("dihedral:8", 10, 8),
    ("elementary_abelian:2:6", 2825, 2825), ("psl2:7", 179, 15), ("symmetric:5", 156, 19),
    ("sl2:5", 76, 12),
])
def test_known_counts(spec, total, classes):
    G = cached_group(spec)
    assert len(all_subgroups(G)) == total
    cs = subgroup_classes(G)
    assert len(cs) == classes and cs.total_count == total


def test_a5_nontrivial_classes():
    cs = subgroup_classes(cached_group("alternating:5"))
    assert sum(1 for c in cs if 1 < c.order < 60) == 7


@pytest.mark.parametrize("p,n", [(2, 5), (3, 4), (5, 3)])
def test_cyclic_prime_power(p, n):
    assert len(all_subgroups(cyclic(p**n))) == n + 1


def test_abelian_classes_singletons():
    G = elementary_abelian(3, 2)
    assert all(c.size == 1 for c in subgroup_classes(G))


def test_representative_is_least():
    G = cached_group("symmetric:4")
    for c in subgroup_classes(G):
        assert c.representative.members.tolist() == min(S.members.tolist() for S in c.conjugates)


def test_class_size_is_normalizer_index():
    for spec, G in catalogue_groups(120):
        for c in subgroup_classes(G):
            assert c.size * normalizer(G, c.representative).order == G.order, spec
        assert sum(c.size for c in subgroup_classes(G)) == len(all_subgroups(G))


def test_every_subgroup_closed():
    for spec, G in catalogue_groups(60):
        for S in all_subgroups(G):
            m = S.members
            assert S.indicator[G.mul[m[:, None], m[None, :]]].all(), spec
            assert G.order % S.order == 0


def test_sylow_examples():
    G = cached_group("sl2:5")
    P = sylow(G, 2)
    assert bounded_isomorphic(cached_group("quaternion:8"), _table(G, P))
    assert sylow(quaternion(16), 2).order == 16
    assert sylow(cached_group("alternating:5"), 3).order == 3
    assert sylow(cyclic(9), 2).order == 1


def _table(G, H):
    from perfcode.core import subgroup_table

    return subgroup_table(G, H)


def test_sylow_conjugacy():
    for spec, G in catalogue_groups(200, skip={"elementary_abelian:2:7"}):
        for p in prime_signature(G).primes:
            P = sylow(G, p)
            assert P.order == p ** prime_signature(G).exponents[prime_signature(G).primes.index(p)]
            same = [c for c in subgroup_classes(G) if c.order == P.order]
            assert len(same) == 1, (spec, p)


def test_core_o2_examples():
    G = cached_group("sl2:5")
    assert core_o2(G) == center(G)
    assert core_o2(cached_group("alternating:5")).order == 1
    Q = quaternion(16)
    assert core_o2(Q) == whole_group(Q)


def test_core_o2_properties():
    for spec, G in catalogue_groups(200, skip={"elementary_abelian:2:7"}):
        O = core_o2(G)
        assert O.is_normal() and O.order & (O.order - 1) == 0, spec
        for N in normal_subgroups(G):
            if N.order & (N.order - 1) == 0:
                assert N.issubset(O), spec


def test_hall_examples():
    G = cyclic(30)
    assert hall_subgroup(G, {3, 5}).order == 15
    assert hall_subgroup(G, set()).order == 1
    assert hall_subgroup(G, {2, 3, 5}).order == 30


def test_hall_missing_in_a5():
    with pytest.raises(NotFound):
        hall_subgroup(cached_group("alternating:5"), {3, 5})


def test_hall_on_solvable_catalogue():
    for spec, G in catalogue_groups(120):
        if not is_solvable(G):
            continue
        primes = prime_signature(G).primes
        for r in range(1, len(primes)):
            for pi in itertools.combinations(primes, r):
                H = hall_subgroup(G, pi)
                same = [c for c in subgroup_classes(G) if c.order == H.order]
                assert len(same) == 1, (spec, pi)


def test_maximal_subgroups():
    A5 = cached_group("alternating:5")
    shapes = sorted(str(recognize_shape(_table(A5, c.representative))) for c in maximal_subgroups(A5))
    assert shapes == ["dihedral(10)", "dihedral(6)", "other"]
    a4 = [c for c in maximal_subgroups(A5) if c.order == 12][0]
    assert bounded_isomorphic(_table(A5, a4.representative), cached_group("alternating:4"))
    assert [c.order for c in maximal_subgroups(cyclic(7))] == [1]
    assert sorted(c.order for c in maximal_subgroups(cached_group("psl2:7"))) == [21, 24, 24]


def test_maximal_against_brute_force():
    G = cached_group("symmetric:4")
    subs = as_sets(G)
    brute = {H for H in subs if len(H) < G.order and not any(H < K < frozenset(range(G.order)) for K in subs)}
    ours = set()
    for c in maximal_subgroups(G):
        ours.update(frozenset(S.members.tolist()) for S in c.conjugates)
    assert ours == brute


def test_normals_and_socle():
    A5 = cached_group("alternating:5")
    _, soc = normal_subgroups_and_socle(A5)
    assert soc.order == 60
    Q = quaternion(8)
    normals, _ = normal_subgroups_and_socle(Q)
    assert len(normals) == 6
    _, soc = normal_subgroups_and_socle(cached_group("symmetric:4"))
    assert soc.order == 4 and all(cached_group("symmetric:4").orders[x] <= 2 for x in soc.members)


def test_normals_match_singleton_classes():
    for spec, G in catalogue_groups(100):
        ours = {N.key for N in normal_subgroups(G)}
        expected = {c.representative.key for c in subgroup_classes(G) if c.size == 1}
        assert ours == expected, spec


def test_normalizer_examples():
    S3 = cached_group("symmetric:3")
    t = generate(S3, [int(S3.involutions[0])])
    assert normalizer(S3, t) == t
    A = generate(S3, [int(x) for x in range(6) if S3.orders[x] == 3])
    assert normalizer(S3, A).order == 6
    Q = quaternion(8)
    for x in range(8):
        if Q.orders[x] == 4:
            assert normalizer(Q, generate(Q, [x])).order == 8


def test_prime_signature():
    s = prime_signature(120)
    assert s.primes == (2, 3, 5) and s.exponents == (3, 1, 1)
    assert s.odd_part == 15 and s.odd_part_squarefree
    assert prime_signature(1).primes == ()
    assert not prime_signature(45).odd_part_squarefree
