"""Recognizing the named shapes and bounded isomorphism testing."""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from .core import GroupTable, conjugacy_classes, generate
from .fields import prime_power
from .errors import InvalidParams

EXACT_LIMIT = 256

# family name of the constructor that produces each shape
FAMILY_OF_SHAPE = {
    "cyclic": "cyclic",
    "dihedral": "dihedral",
    "generalized_quaternion": "quaternion",
    "elementary_abelian": "elementary_abelian",
}


@dataclass(frozen=True)
class ShapeTag:
    kind: str  # cyclic | dihedral | generalized_quaternion | elementary_abelian | other
    params: tuple = ()

    def __str__(self):
        if self.kind == "other":
            return "other"
        return f"{self.kind}({','.join(map(str, self.params))})"

    def is_cyclic_or_quaternion(self) -> bool:
        return self.kind in ("cyclic", "generalized_quaternion")


def _cyclic_members(G: GroupTable, x: int) -> np.ndarray:
    out = [0]
    y = x
    while y != 0:
        out.append(y)
        y = int(G.mul[y, x])
    return np.array(out)


def _inverting_extension(G: GroupTable, y_order_ok) -> bool:
    """Is there ``x`` of order ``n/2`` and ``y`` outside ``<x>`` with
    ``y^-1 x y = x^-1`` and ``y_order_ok(x, y)``?"""
    n = G.order
    for x in np.flatnonzero(G.orders == n // 2):
        x = int(x)
        inside = np.zeros(n, dtype=bool)
        inside[_cyclic_members(G, x)] = True
        ys = np.flatnonzero(~inside)
        conj = G.mul[G.mul[G.inv[ys], x], ys]
        ys = ys[conj == G.inv[x]]
        if any(y_order_ok(x, int(y)) for y in ys):
            return True
    return False


def recognize_shape(G: GroupTable) -> ShapeTag:
    """Identify ``G`` by checking defining relations directly on its table."""
    if "shape" in G._cache:
        return G._cache["shape"]
    G._cache["shape"] = tag = _recognize(G)
    return tag


def _recognize(G: GroupTable) -> ShapeTag:
    n = G.order
    orders = G.orders
    if int(orders.max()) == n:
        return ShapeTag("cyclic", (n,))
    try:
        p, k = prime_power(n)
    except InvalidParams:
        p, k = 0, 0
    if p and G.is_abelian and (orders[1:] == p).all():
        return ShapeTag("elementary_abelian", (p, k))
    if n % 2 or n < 6:
        return ShapeTag("other")
    if p == 2 and n >= 8 and len(G.involutions) == 1:
        z = int(G.involutions[0])
        if _inverting_extension(G, lambda x, y: int(G.squares[y]) == z):
            return ShapeTag("generalized_quaternion", (n,))
    if _inverting_extension(G, lambda x, y: int(G.squares[y]) == 0):
        return ShapeTag("dihedral", (n,))
    return ShapeTag("other")


def shape_of_subgroup(G: GroupTable, H) -> ShapeTag:
    from .core import subgroup_table

    return recognize_shape(subgroup_table(G, H))


# --------------------------------------------------------------------------
# isomorphism


@dataclass(frozen=True)
class IsoVerdict:
    isomorphic: bool
    exact: bool  # False means a fingerprint match only (low confidence)

    def __bool__(self):
        return self.isomorphic


def fingerprint(G: GroupTable) -> tuple:
    """Order, abelianness, element-order profile and (class size, element order) multiset."""
    if "fingerprint" in G._cache:
        return G._cache["fingerprint"]
    part = conjugacy_classes(G)
    classes = Counter((len(c), int(G.orders[c[0]])) for c in part.classes)
    fp = (
        G.order,
        G.is_abelian,
        tuple(sorted(Counter(G.orders.tolist()).items())),
        tuple(sorted(classes.items())),
    )
    G._cache["fingerprint"] = fp
    return fp


def _element_invariants(G: GroupTable) -> np.ndarray:
    """Per element: order and conjugacy class size."""
    part = conjugacy_classes(G)
    size = np.zeros(G.order, dtype=np.int64)
    for c in part.classes:
        size[c] = len(c)
    return G.orders.astype(np.int64) * (G.order + 1) + size


def small_generating_set(G: GroupTable) -> list[int]:
    """Greedy: repeatedly add the highest-order element outside the current subgroup."""
    by_order = sorted(range(G.order), key=lambda g: (-int(G.orders[g]), g))
    gens: list[int] = []
    H = generate(G, [])
    for g in by_order:
        if H.order == G.order:
            break
        if not H.indicator[g]:
            gens.append(g)
            H = generate(G, gens)
    return gens


def _try_extend(G1: GroupTable, G2: GroupTable, gens, images) -> np.ndarray | None:
    """The map on ``<gens>`` sending gens to images, or None if it is not an injective homomorphism."""
    phi = np.full(G1.order, -1, dtype=np.int64)
    phi[0] = 0
    used = np.zeros(G2.order, dtype=bool)
    used[0] = True
    queue = deque([0])
    m1, m2 = G1.rows, G2.rows
    while queue:
        x = queue.popleft()
        px = phi[x]
        for g, h in zip(gens, images):
            y = m1[x][g]
            img = m2[px][h]
            if phi[y] < 0:
                if used[img]:
                    return None
                phi[y] = img
                used[img] = True
                queue.append(y)
            elif phi[y] != img:
                return None
    return phi


def find_isomorphism(G1: GroupTable, G2: GroupTable) -> np.ndarray | None:
    """Complete backtracking over images of a small generating set of ``G1``."""
    if G1.order != G2.order or fingerprint(G1) != fingerprint(G2):
        return None
    gens = small_generating_set(G1)
    inv1, inv2 = _element_invariants(G1), _element_invariants(G2)
    cands = [np.flatnonzero(inv2 == inv1[g]).tolist() for g in gens]

    def search(i, images):
        if i == len(gens):
            phi = _try_extend(G1, G2, gens, images)
            return phi if phi is not None and (phi >= 0).all() else None
        for h in cands[i]:
            trial = images + [h]
            if _try_extend(G1, G2, gens[: i + 1], trial) is None:
                continue
            found = search(i + 1, trial)
            if found is not None:
                return found
        return None

    return search(0, [])


def bounded_isomorphic(G1: GroupTable, G2: GroupTable, exact_limit: int = EXACT_LIMIT) -> IsoVerdict:
    """Exact up to ``exact_limit``; above it only fingerprints are compared."""
    if G1.order != G2.order:
        return IsoVerdict(False, True)
    if fingerprint(G1) != fingerprint(G2):
        return IsoVerdict(False, True)
    if G1.order > exact_limit:
        return IsoVerdict(True, False)
    return IsoVerdict(find_isomorphism(G1, G2) is not None, True)
