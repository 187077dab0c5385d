"""Delta of the double cover 2.PGL(2,q) with quaternion Sylow 2-subgroup.

The group is realized inside SL(2, q^2) as ``<SL(2,q), t>`` with
``t = lam * diag(w, 1)``, ``w`` a non-square of GF(q) and ``lam^2 = 1/w``.
At order 24288 (q = 23) a full table is too large, so elements are kept as
matrices with an index dictionary and subgroups are generated by closure.

Because the Sylow 2-subgroup is generalized quaternion, a subgroup is a
perfect code exactly when its order or its index is odd. Only those classes
are enumerated:

* odd-order subgroups come from joins of odd-order cyclic subgroups, abandoned
  as soon as the closure passes the odd part of ``|G|``;
* odd-index subgroups contain a conjugate of a fixed Sylow 2-subgroup ``P``;
  two overgroups of ``P`` are conjugate in ``G`` iff they are conjugate under
  ``N_G(P)``, so classes are ``N_G(P)``-orbits of overgroups of ``P``.
"""

from __future__ import annotations

import time

import numpy as np

from .core import GroupTable, enumerate_closure
from .fields import gf
from .shapes import recognize_shape
from .theorems import CheckResult


class MatrixGroup:
    def __init__(self, q: int):
        self.q = q
        F = gf(q * q)
        self.F = F
        add, mul = F.add.tolist(), F.mul.tolist()
        self._add, self._mul = add, mul
        neg1 = int(F.neg[1])
        # GF(q) sits inside GF(q^2) as the constants 0..q-1 (q prime)
        w = next(x for x in range(2, q) if pow(x, (q - 1) // 2, q) == q - 1)
        winv = pow(w, q - 2, q)
        lam = next(x for x in range(q * q) if mul[x][x] == winv)
        t = (mul[lam][w], 0, 0, lam)
        gens = [(1, 1, 0, 1), (0, 1, neg1, 0), t]
        closure = enumerate_closure((1, 0, 0, 1), gens, self.mm, lambda a: a, cap=10**6)
        self.elements = closure.keys
        self.index = {k: i for i, k in enumerate(self.elements)}
        self.order = len(self.elements)
        self.orders = np.array([self._element_order(i) for i in range(self.order)])

    def mm(self, a, b):
        add, mul = self._add, self._mul
        return (
            add[mul[a[0]][b[0]]][mul[a[1]][b[2]]],
            add[mul[a[0]][b[1]]][mul[a[1]][b[3]]],
            add[mul[a[2]][b[0]]][mul[a[3]][b[2]]],
            add[mul[a[2]][b[1]]][mul[a[3]][b[3]]],
        )

    def product(self, i: int, j: int) -> int:
        return self.index[self.mm(self.elements[i], self.elements[j])]

    def inverse(self, i: int) -> int:
        a, b, c, d = self.elements[i]  # determinant 1
        neg = self.F.neg
        return self.index[(d, int(neg[b]), int(neg[c]), a)]

    def conjugate(self, x: int, g: int) -> int:
        return self.product(self.product(self.inverse(g), x), g)

    def _element_order(self, i: int) -> int:
        x, k = i, 1
        while x != 0:
            x = self.product(x, i)
            k += 1
        return k

    def generate(self, gens, limit: int | None = None, odd_only: bool = False) -> frozenset | None:
        """Closure of ``gens``; None once it exceeds ``limit`` or meets an even-order element."""
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.product(x, g)
                    if y not in seen:
                        if odd_only and self.orders[y] % 2 == 0:
                            return None
                        seen.add(y)
                        nxt.append(y)
            if limit is not None and len(seen) > limit:
                return None
            frontier = nxt
        return frozenset(seen)

    def conjugate_set(self, H: frozenset, g: int) -> frozenset:
        return frozenset(self.conjugate(h, g) for h in H)

    def table_of(self, H: frozenset) -> GroupTable:
        members = sorted(H)
        pos = {x: i for i, x in enumerate(members)}
        mul = np.array([[pos[self.product(a, b)] for b in members] for a in members])
        return GroupTable(mul)


def _conjugacy_orbit(M: MatrixGroup, H: frozenset, gens) -> set:
    """All conjugates of ``H``; ``N(H) g`` cosets are marked so each conjugate is computed once."""
    normalizer = [g for g in range(M.order) if all(M.conjugate(x, g) in H for x in gens)]
    covered = np.zeros(M.order, dtype=bool)
    orbit = set()
    for g in range(M.order):
        if covered[g]:
            continue
        for n in normalizer:
            covered[M.product(n, g)] = True
        orbit.add(M.conjugate_set(H, g))
    return orbit


def odd_order_classes(M: MatrixGroup, odd_part: int) -> list[frozenset]:
    cyclic = {}
    for x in range(1, M.order):
        if M.orders[x] % 2:
            C = M.generate([x])
            cyclic.setdefault(C, x)
    cyclic_list = list(cyclic.items())
    reps: list[tuple[frozenset, list]] = []
    known: set = set()
    queue = []

    def record(H, gens):
        if H in known:
            return
        orbit = _conjugacy_orbit(M, H, gens)
        known.update(orbit)
        reps.append((H, gens))
        queue.append((H, gens))

    for C, x in cyclic_list:
        record(C, [x])
    while queue:
        H, gens = queue.pop()
        for C, x in cyclic_list:
            if C <= H:
                continue
            J = M.generate(gens + [x], limit=odd_part, odd_only=True)
            if J is not None:
                record(J, gens + [x])
    return [H for H, _ in reps]


def _sylow2(M: MatrixGroup) -> tuple[frozenset, list]:
    """``<x, y>`` with ``x`` of maximal 2-power order and ``y`` inverting it, ``y^2 = x^(m/2)``."""
    two_part = M.order & -M.order
    m = two_part // 2
    x = int(np.flatnonzero(M.orders == m)[0])
    xinv = M.inverse(x)
    z = x
    for _ in range(m // 2 - 1):
        z = M.product(z, x)
    for y in np.flatnonzero(M.orders == 4):
        y = int(y)
        if M.conjugate(x, y) == xinv and M.product(y, y) == z:
            P = M.generate([x, y])
            if len(P) == two_part:
                return P, [x, y]
    raise RuntimeError("no quaternion Sylow 2-subgroup found")


def odd_index_classes(M: MatrixGroup, P: frozenset, pgens: list) -> list[frozenset]:
    # representatives of the double cosets P g P
    covered = np.zeros(M.order, dtype=bool)
    reps = []
    plist = sorted(P)
    for g in range(M.order):
        if covered[g]:
            continue
        reps.append(g)
        for a in plist:
            ag = M.product(a, g)
            for b in plist:
                covered[M.product(ag, b)] = True
    found = {P: pgens}
    queue = [P]
    while queue:
        K = queue.pop()
        for g in reps:
            if g in K:
                continue
            J = M.generate(found[K] + [g])
            if J not in found:
                found[J] = found[K] + [g]
                queue.append(J)
    normalizer = [g for g in range(M.order) if all(M.conjugate(x, g) in P for x in pgens)]
    classes: list[frozenset] = []
    seen: set = set()
    for K in sorted(found, key=len):
        if K in seen:
            continue
        classes.append(K)
        seen.update(M.conjugate_set(K, g) for g in normalizer)
    return classes


def double_cover_delta(q: int = 23) -> dict:
    t0 = time.time()
    M = MatrixGroup(q)
    n = M.order
    odd_part = n
    while odd_part % 2 == 0:
        odd_part //= 2
    P, pgens = _sylow2(M)
    shape = recognize_shape(M.table_of(P))
    odd = [H for H in odd_order_classes(M, odd_part) if 1 < len(H)]
    over = [K for K in odd_index_classes(M, P, pgens) if len(K) < n]
    return {
        "order": n,
        "sylow2_shape": str(shape),
        "odd_order_classes": sorted(len(H) for H in odd),
        "odd_index_classes": sorted(len(K) for K in over),
        "delta_count": len(odd) + len(over),
        "seconds": round(time.time() - t0, 1),
    }


def stretch_check() -> CheckResult:
    info = double_cover_delta(23)
    ok = info["order"] == 24288 and info["sylow2_shape"] == "generalized_quaternion(32)" and info["delta_count"] == 6
    details = (f"order {info['order']}, Sylow 2 {info['sylow2_shape']}, odd-order class orders "
               f"{info['odd_order_classes']}, odd-index class orders {info['odd_index_classes']}, "
               f"delta_count {info['delta_count']}")
    return CheckResult("stretch_double_cover", "pass" if ok else "fail",
                       None if ok else {"group": "2.PGL(2,23)", **info}, details, info)
