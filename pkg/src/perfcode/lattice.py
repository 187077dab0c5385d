"""Subgroup lattices and the distinguished subgroups of a GroupTable.

The lattice is built by joining known subgroups with cyclic ones until
nothing new appears. For nonabelian groups only one subgroup per conjugacy
class is extended; the rest of each class comes from conjugating it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np
from sympy import factorint, isprime

from . import config
from .core import GroupTable, Subgroup, _extend, generate, join, trivial_subgroup, whole_group
from .errors import CapExceeded, NotFound


@dataclass(frozen=True)
class SubgroupClass:
    representative: Subgroup
    conjugates: tuple

    @property
    def size(self) -> int:
        return len(self.conjugates)

    @property
    def order(self) -> int:
        return self.representative.order


@dataclass(frozen=True)
class SubgroupClassSet:
    classes: tuple
    total_count: int

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)


@dataclass(frozen=True)
class PrimeSignature:
    primes: tuple
    exponents: tuple
    odd_part: int
    odd_part_squarefree: bool

    @property
    def order(self) -> int:
        return prod(p**e for p, e in zip(self.primes, self.exponents))


def prime_signature(G_or_n) -> PrimeSignature:
    n = G_or_n if isinstance(G_or_n, int) else G_or_n.order
    fac = factorint(n) if n > 1 else {}
    primes = tuple(sorted(fac))
    exps = tuple(fac[p] for p in primes)
    odd = n
    while odd and odd % 2 == 0:
        odd //= 2
    squarefree = all(e == 1 for p, e in fac.items() if p != 2)
    return PrimeSignature(primes, exps, odd, squarefree)


def p_part(n: int, primes) -> int:
    out = 1
    for p in primes:
        while n % p == 0:
            n //= p
            out *= p
    return out


# --------------------------------------------------------------------------
# lattice enumeration


def _cyclic_subgroups(G: GroupTable) -> list[tuple[Subgroup, int]]:
    n = G.order
    done = np.zeros(n, dtype=bool)
    out = []
    orders = G.orders
    for g in range(1, n):
        if done[g]:
            continue
        k = int(orders[g])
        powers = [0]
        x = 0
        for _ in range(k - 1):
            x = int(G.mul[x, g])
            powers.append(x)
        powers.append(int(G.mul[x, g]))
        C = Subgroup(G, powers[:k], [g])
        # every generator of <g> gives the same subgroup
        for e in range(1, k):
            if np.gcd(e, k) == 1:
                done[powers[e]] = True
        out.append((C, g))
    return out


def _conjugacy_orbit(G: GroupTable, H: Subgroup) -> list[Subgroup]:
    conj = G.conj_table()
    n = G.order
    if conj is not None:
        images = conj[:, H.members]
    else:
        images = np.stack([G.conjugate_set(H.members, g) for g in range(n)])
    ind = np.zeros((n, n), dtype=bool)
    ind[np.arange(n)[:, None], images] = True
    packed = np.packbits(ind, axis=1, bitorder="little")
    _, first = np.unique(packed, axis=0, return_index=True)
    out = []
    for g in sorted(first.tolist()):
        out.append(Subgroup(G, images[g], [int(G.conjugate_set(np.asarray([h]), g)[0]) for h in H.gens]))
    return out


_SMALL_PRIMES = frozenset(int(p) for p in range(2, 4096) if isprime(p))


def _is_small_prime(n: int) -> bool:
    return n in _SMALL_PRIMES if n < 4096 else bool(isprime(n))


def _check_lattice_cap(G: GroupTable):
    cap = config.caps().lattice
    if G.order > cap:
        raise CapExceeded("subgroup lattice of group", G.order, cap)


def _build_lattice(G: GroupTable):
    _check_lattice_cap(G)
    cyclics = _cyclic_subgroups(G)
    trivial = trivial_subgroup(G)
    found: dict[bytes, int] = {trivial.key: 0}
    class_members: list[list[Subgroup]] = [[trivial]]
    abelian = G.is_abelian
    queue: list[Subgroup] = []

    def record(K: Subgroup) -> bool:
        if K.key in found:
            return False
        cid = len(class_members)
        orbit = [K] if abelian else _conjugacy_orbit(G, K)
        for C in orbit:
            found[C.key] = cid
        class_members.append(orbit)
        queue.append(K)
        return True

    for C, _ in cyclics:
        record(C)
    i = 0
    while i < len(queue):
        H = queue[i]
        i += 1
        skip = H.indicator.copy()
        for _, c in cyclics:
            if skip[c]:
                continue
            ind = H.indicator.copy()
            members = _extend(G, ind, H.members, list(H.gens), c)
            if _is_small_prime(len(members) // H.order):
                # no subgroup strictly between H and K, so any c' in K gives K again
                skip |= ind
            key = np.packbits(ind, bitorder="little").tobytes()
            if key not in found:
                record(Subgroup(G, members, H.gens + (c,)))
    classes = []
    for members in class_members:
        members = sorted(members, key=lambda S: tuple(S.members.tolist()))
        classes.append(SubgroupClass(members[0], tuple(members)))
    classes.sort(key=lambda c: c.representative.sort_key())
    subgroups = sorted((S for c in classes for S in c.conjugates), key=Subgroup.sort_key)
    return subgroups, SubgroupClassSet(tuple(classes), len(subgroups))


def _lattice(G: GroupTable):
    if "lattice" not in G._cache:
        G._cache["lattice"] = _build_lattice(G)
    return G._cache["lattice"]


def all_subgroups(G: GroupTable) -> list[Subgroup]:
    """Every subgroup of ``G``, sorted by (order, members)."""
    return _lattice(G)[0]


def subgroup_classes(G: GroupTable) -> SubgroupClassSet:
    """Subgroups up to conjugacy; each representative is the class member with
    the lexicographically least sorted member list."""
    return _lattice(G)[1]


def class_of_subgroup(G: GroupTable, H: Subgroup) -> SubgroupClass:
    for c in subgroup_classes(G):
        if c.order == H.order and any(S == H for S in c.conjugates):
            return c
    raise NotFound("subgroup not in lattice")


# --------------------------------------------------------------------------
# distinguished subgroups


def normalizer(G: GroupTable, H: Subgroup) -> Subgroup:
    conj = G.conj_table()
    ind = H.indicator
    if conj is not None:
        mask = ind[conj[:, H.members]].all(axis=1)
    else:
        mask = np.array([ind[G.conjugate_set(H.members, g)].all() for g in range(G.order)])
    return Subgroup.from_indicator(G, mask)


def _p_power_mask(G: GroupTable, cands: np.ndarray, P: Subgroup, p: int, steps: int) -> np.ndarray:
    """Which candidates x have x^(p^steps) in P."""
    y = cands.copy()
    for _ in range(steps):
        acc = y.copy()
        for _ in range(p - 1):
            acc = G.mul[acc, y]
        y = acc
    return P.indicator[y]


def sylow(G: GroupTable, p: int, within: Subgroup | None = None) -> Subgroup:
    """A Sylow ``p``-subgroup of ``within`` (default ``G``); trivial if ``p`` does not divide it.

    Grown one step at a time: while ``P`` is not Sylow, some element of
    ``N(P)`` outside ``P`` has ``p``-power order modulo ``P``. The smallest such
    element id is taken, so the result is deterministic.
    """
    H = within if within is not None else whole_group(G)
    target = p_part(H.order, [p])
    if within is None and "sylow" in G._cache and p in G._cache["sylow"]:
        return G._cache["sylow"][p]
    P = trivial_subgroup(G)
    steps = max(1, target.bit_length())
    conj = G.conj_table()
    while P.order < target:
        cands = H.members[~P.indicator[H.members]]
        if conj is not None:
            norm = P.indicator[conj[np.ix_(cands, P.members)]].all(axis=1)
        else:
            norm = np.array([P.indicator[G.conjugate_set(P.members, int(g))].all() for g in cands])
        cands = cands[norm]
        ok = _p_power_mask(G, cands, P, p, steps)
        x = int(cands[np.argmax(ok)])
        assert ok.any(), "Sylow growth step failed"
        P = join(G, P, x)
    if within is None:
        G._cache.setdefault("sylow", {})[p] = P
    return P


def core_o2(G: GroupTable) -> Subgroup:
    """Largest normal 2-subgroup: the intersection of all Sylow 2-subgroups."""
    if "o2" in G._cache:
        return G._cache["o2"]
    P = sylow(G, 2)
    conj = G.conj_table()
    if conj is not None:
        mask = P.indicator[conj].all(axis=0)
    else:
        mask = P.indicator.copy()
        for g in range(G.order):
            conjugate = np.zeros(G.order, dtype=bool)
            conjugate[G.conjugate_set(P.members, g)] = True
            mask &= conjugate
    O = Subgroup.from_indicator(G, mask)
    G._cache["o2"] = O
    return O


def hall_subgroup(G: GroupTable, primes) -> Subgroup:
    """A subgroup whose order is the full ``primes``-part of ``|G|``.

    Raises ``NotFound`` when the lattice holds none (possible only for
    non-solvable ``G``).
    """
    target = p_part(G.order, set(primes))
    if target == 1:
        return trivial_subgroup(G)
    if target == G.order:
        return whole_group(G)
    for c in subgroup_classes(G):
        if c.order == target:
            return c.representative
    raise NotFound(f"no Hall subgroup of order {target} in {G.name}")


def maximal_subgroups(G: GroupTable) -> SubgroupClassSet:
    classes = subgroup_classes(G)
    subs = all_subgroups(G)
    masks = [(S.order, S.mask) for S in subs]
    out = []
    for c in classes:
        M = c.representative
        if M.order == G.order:
            continue
        m = M.mask
        contained = any(
            o != M.order and o != G.order and o % M.order == 0 and (k & m) == m for o, k in masks
        )
        if not contained:
            out.append(c)
    return SubgroupClassSet(tuple(out), sum(c.size for c in out))


def normal_closure(G: GroupTable, elements) -> Subgroup:
    conj = G.conj_table()
    pool = set()
    for x in elements:
        x = int(x)
        orbit = conj[:, x] if conj is not None else G.conjugates_of(x)
        pool.update(np.unique(orbit).tolist())
    return generate(G, sorted(pool))


def normal_subgroups(G: GroupTable) -> list[Subgroup]:
    """All normal subgroups, sorted by (order, members).

    Every normal subgroup is a join of normal closures of single elements.
    """
    if "normals" in G._cache:
        return G._cache["normals"]
    if G.is_abelian:
        result = list(all_subgroups(G))
    else:
        from .core import conjugacy_classes

        reps = [int(c[0]) for c in conjugacy_classes(G).classes]
        found = {}
        for x in reps:
            N = normal_closure(G, [x])
            found.setdefault(N.key, N)
        basics = list(found.values())
        frontier = list(basics)
        while frontier:
            new = []
            for A in frontier:
                for B in basics:
                    if B.issubset(A):
                        continue
                    J = generate(G, B.gens or B.members.tolist(), within=A)
                    if J.key not in found:
                        found[J.key] = J
                        new.append(J)
            frontier = new
        result = sorted(found.values(), key=Subgroup.sort_key)
    G._cache["normals"] = result
    return result


def normal_subgroups_and_socle(G: GroupTable) -> tuple[list[Subgroup], Subgroup]:
    normals = normal_subgroups(G)
    nontrivial = [N for N in normals if N.order > 1]
    minimal = [N for N in nontrivial if not any(M.order < N.order and M.issubset(N) for M in nontrivial)]
    socle = trivial_subgroup(G)
    for N in minimal:
        socle = generate(G, N.members.tolist(), within=socle)
    return normals, socle


def is_p_group(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1
