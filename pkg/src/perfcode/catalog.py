"""Constructors for the named group families and the default sweep catalogue."""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from math import gcd

import numpy as np
from sympy import isprime, primerange

from . import config
from .core import (
    GroupTable,
    closure_from_permutations,
    enumerate_closure,
    table_from_closure,
    _generator_ids,
)
from .errors import CapExceeded, InternalError, InvalidAction, InvalidParams
from .fields import gf, prime_power


def _check_cap(n: int):
    cap = config.caps().group
    if n > cap:
        raise CapExceeded("group", n, cap)


def cyclic(n: int) -> GroupTable:
    if n < 1:
        raise InvalidParams(f"cyclic order must be positive, got {n}")
    _check_cap(n)
    idx = np.arange(n)
    mul = (idx[:, None] + idx[None, :]) % n
    return GroupTable(mul, name=f"Z{n}", gens=[1] if n > 1 else [])


def dihedral(order: int) -> GroupTable:
    """Dihedral group of the given order; ids are ``i + n*j`` for ``r^i s^j``."""
    if order < 2 or order % 2:
        raise InvalidParams(f"dihedral order must be even and >= 2, got {order}")
    _check_cap(order)
    n = order // 2
    ids = np.arange(order)
    i, j = ids % n, ids // n
    sign = np.where(j == 0, 1, -1)
    rot = (i[:, None] + sign[:, None] * i[None, :]) % n
    ref = (j[:, None] + j[None, :]) % 2
    gens = ([1] if n > 1 else []) + [n]
    return GroupTable(rot + n * ref, name=f"D{order}", gens=gens)


def quaternion(order: int) -> GroupTable:
    """Generalized quaternion group; ids are ``i + m*j`` for ``x^i y^j``."""
    if order < 8 or order & (order - 1):
        raise InvalidParams(f"quaternion order must be a power of 2 and >= 8, got {order}")
    _check_cap(order)
    m = order // 2
    ids = np.arange(order)
    i, j = ids % m, ids // m
    I, K = i[:, None], i[None, :]
    J, L = j[:, None], j[None, :]
    # y x^k = x^-k y and y^2 = x^(m/2)
    exp = np.where(J == 0, I + K, I - K + np.where(L == 1, m // 2, 0))
    yexp = np.where(J == 0, L, (1 + L) % 2)
    mul = (exp % m) + m * yexp
    return GroupTable(mul, name=f"Q{order}", gens=[1, m])


def elementary_abelian(p: int, k: int) -> GroupTable:
    if not isprime(p) or k < 1:
        raise InvalidParams(f"elementary abelian needs prime p and k >= 1, got ({p}, {k})")
    n = p**k
    _check_cap(n)
    ids = np.arange(n)
    mul = np.zeros((n, n), dtype=np.int64)
    for e in range(k):
        d = (ids // p**e) % p
        mul += ((d[:, None] + d[None, :]) % p) * p**e
    return GroupTable(mul, name=f"E{p}^{k}", gens=[p**e for e in range(k)])


def symmetric(n: int) -> GroupTable:
    if n < 1:
        raise InvalidParams(f"symmetric degree must be positive, got {n}")
    if n == 1:
        return closure_from_permutations([], name="S1")
    gens = ["(" + ",".join(map(str, range(1, n + 1))) + ")"]
    if n > 2:
        gens.append("(1,2)")
    return closure_from_permutations(gens, name=f"S{n}")


def alternating(n: int) -> GroupTable:
    if n < 1:
        raise InvalidParams(f"alternating degree must be positive, got {n}")
    if n < 3:
        return closure_from_permutations([], name=f"A{n}")
    return closure_from_permutations([f"(1,2,{i})" for i in range(3, n + 1)], name=f"A{n}")


FAMILIES = {
    "cyclic": (1, lambda n: cyclic(n)),
    "dihedral": (1, lambda n: dihedral(n)),
    "quaternion": (1, lambda n: quaternion(n)),
    "elementary_abelian": (2, lambda p, k: elementary_abelian(p, k)),
    "symmetric": (1, lambda n: symmetric(n)),
    "alternating": (1, lambda n: alternating(n)),
    "sl2": (1, lambda q: matrix_group_family("SL2", q)),
    "psl2": (1, lambda q: matrix_group_family("PSL2", q)),
    "pgl2": (1, lambda q: matrix_group_family("PGL2", q)),
    "binary_octahedral": (0, lambda: binary_octahedral()),
    "trivial": (0, lambda: cyclic(1)),
}


def make_family(kind: str, *params: int) -> GroupTable:
    if kind not in FAMILIES:
        raise InvalidParams(f"unknown family {kind!r}")
    arity, build = FAMILIES[kind]
    if len(params) != arity:
        raise InvalidParams(f"family {kind!r} takes {arity} parameter(s), got {len(params)}")
    return build(*params)


# --------------------------------------------------------------------------
# products


def direct_product(A: GroupTable, B: GroupTable) -> GroupTable:
    """Ids are ``a*|B| + b``."""
    n = A.order * B.order
    _check_cap(n)
    nb = B.order
    ids = np.arange(n)
    a, b = ids // nb, ids % nb
    mul = A.mul[a[:, None], a[None, :]].astype(np.int64) * nb + B.mul[b[:, None], b[None, :]]
    gens = [g * nb for g in A.gens] + list(B.gens)
    return GroupTable(mul, name=f"{A.name}x{B.name}", gens=gens)


def _is_automorphism(N: GroupTable, perm: np.ndarray) -> bool:
    if sorted(perm.tolist()) != list(range(N.order)):
        return False
    return bool(np.array_equal(perm[N.mul], N.mul[perm[:, None], perm[None, :]]))


def _extend_action(N: GroupTable, Q: GroupTable, gen_autos: list[np.ndarray]) -> np.ndarray:
    """Extend per-generator automorphisms of ``N`` to all of ``Q``.

    Returns ``phi`` with ``phi[q]`` the automorphism (as an id permutation) for
    ``q``. Raises ``InvalidAction`` if the assignment is not a homomorphism.
    """
    if len(gen_autos) != len(Q.gens):
        raise InvalidAction(f"need one automorphism per generator of {Q.name} ({len(Q.gens)}), got {len(gen_autos)}")
    for a in gen_autos:
        if not _is_automorphism(N, a):
            raise InvalidAction("action of a generator is not an automorphism of the normal factor")
    phi = np.full((Q.order, N.order), -1, dtype=np.int64)
    phi[0] = np.arange(N.order)
    queue = deque([0])
    seen = np.zeros(Q.order, dtype=bool)
    seen[0] = True
    while queue:
        q = queue.popleft()
        for g, a in zip(Q.gens, gen_autos):
            r = int(Q.mul[q, g])
            img = phi[q][a]  # phi(q g) = phi(q) o phi(g)
            if not seen[r]:
                seen[r] = True
                phi[r] = img
                queue.append(r)
            elif not np.array_equal(phi[r], img):
                raise InvalidAction("generator images do not define a homomorphism into Aut(N)")
    if not seen.all():
        raise InvalidAction(f"generators recorded for {Q.name} do not generate it")
    return phi


def _semidirect_table(N: GroupTable, Q: GroupTable, phi: np.ndarray, name: str) -> GroupTable:
    nn, nq = N.order, Q.order
    n = nn * nq
    _check_cap(n)
    ids = np.arange(n)
    a, q = ids % nn, ids // nn
    twisted = phi[q[:, None], a[None, :]]
    mul = N.mul[a[:, None], twisted].astype(np.int64) + nn * Q.mul[q[:, None], q[None, :]]
    gens = list(N.gens) + [nn * g for g in Q.gens]
    return GroupTable(mul, name=name, gens=gens)


def exponent_automorphism(N: GroupTable, e: int) -> np.ndarray:
    """``x -> x^e`` on an abelian group, as an id permutation."""
    if not N.is_abelian:
        raise InvalidAction("exponent actions need an abelian normal factor")
    k = e % int(np.lcm.reduce(N.orders))
    result = np.zeros(N.order, dtype=np.int64)
    base = np.arange(N.order)
    while k:
        if k & 1:
            result = N.mul[result, base].astype(np.int64)
        base = N.mul[base, base]
        k >>= 1
    if len(np.unique(result)) != N.order:
        raise InvalidAction(f"x -> x^{e} is not an automorphism of {N.name}")
    return result


def matrix_automorphism(N: GroupTable, p: int, k: int, rows: list[list[int]]) -> np.ndarray:
    """Linear map on ``E_{p^k}`` (ids as base-p digit vectors) as an id permutation."""
    if N.order != p**k:
        raise InvalidAction(f"matrix action needs E_{p}^{k}, got order {N.order}")
    M = np.asarray(rows, dtype=np.int64) % p
    if M.shape != (k, k):
        raise InvalidAction(f"expected a {k}x{k} matrix, got shape {M.shape}")
    ids = np.arange(N.order)
    digits = np.stack([(ids // p**e) % p for e in range(k)])  # k x n
    image = (M @ digits) % p
    return (image * (p ** np.arange(k))[:, None]).sum(axis=0)


def semidirect_product(N: GroupTable, Q: GroupTable, action, kind: str = "exp") -> GroupTable:
    """``N:Q`` with ``Q`` acting through the given generator images.

    ``kind="exp"``: ``action`` lists one exponent per generator of ``Q`` (``N``
    abelian, usually cyclic). ``kind="mat"``: one ``k x k`` matrix per generator
    (``N`` elementary abelian). ``kind="auto"``: per generator, the images of
    ``N``'s generators as element ids. A trivial action gives ``N x Q``.
    """
    if isinstance(action, int):
        action = [action]
    action = list(action)
    if kind == "exp":
        autos = [exponent_automorphism(N, e) for e in action]
    elif kind == "mat":
        p, k = _elementary_params(N)
        autos = [matrix_automorphism(N, p, k, m) for m in action]
    elif kind == "auto":
        autos = [_automorphism_from_images(N, imgs) for imgs in action]
    else:
        raise InvalidAction(f"unknown action kind {kind!r}")
    if not Q.gens and Q.order == 1:
        autos = []
    phi = _extend_action(N, Q, autos)
    return _semidirect_table(N, Q, phi, name=f"{N.name}:{Q.name}")


def _elementary_params(N: GroupTable) -> tuple[int, int]:
    p, k = prime_power(N.order) if N.order > 1 else (2, 0)
    if not N.is_abelian or int(N.orders.max()) != p:
        raise InvalidAction("matrix actions need an elementary abelian normal factor")
    return p, k


def _automorphism_from_images(N: GroupTable, images) -> np.ndarray:
    images = [int(x) for x in images]
    if len(images) != len(N.gens):
        raise InvalidAction(f"{N.name} has {len(N.gens)} generators, got {len(images)} images")
    perm = np.full(N.order, -1, dtype=np.int64)
    perm[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g, h in zip(N.gens, images):
            y = int(N.mul[x, g])
            img = int(N.mul[perm[x], h])
            if perm[y] < 0:
                perm[y] = img
                queue.append(y)
            elif perm[y] != img:
                raise InvalidAction("generator images do not define an endomorphism")
    if (perm < 0).any() or len(set(perm.tolist())) != N.order:
        raise InvalidAction("generator images do not define an automorphism")
    return perm


# --------------------------------------------------------------------------
# 2x2 matrix groups over GF(q)


def _field_lists(F):
    return F.add.tolist(), F.mul.tolist()


def _sl2_generators(F):
    neg1 = int(F.neg[1])
    gens = [(1, F.p**i, 0, 1) for i in range(F.f)]
    gens.append((0, 1, neg1, 0))
    return gens


def _matrix_mul_factory(F):
    add, mul = _field_lists(F)

    def mm(a, b):
        return (
            add[mul[a[0]][b[0]]][mul[a[1]][b[2]]],
            add[mul[a[0]][b[1]]][mul[a[1]][b[3]]],
            add[mul[a[2]][b[0]]][mul[a[3]][b[2]]],
            add[mul[a[2]][b[1]]][mul[a[3]][b[3]]],
        )

    return mm


def _projective_perm(F, m) -> np.ndarray:
    """Right action of ``m`` on the ``q+1`` points of the projective line.

    Point ``x < q`` is ``(x:1)``, point ``q`` is ``(1:0)``.
    """
    q = F.q
    a, b, c, d = m
    add, mul, inv = F.add, F.mul, F.inv
    perm = np.empty(q + 1, dtype=np.int64)
    for x in range(q):
        u = add[mul[x, a], c]
        v = add[mul[x, b], d]
        perm[x] = q if v == 0 else mul[u, inv[v]]
    perm[q] = q if b == 0 else mul[a, inv[b]]
    return perm


def matrix_group_order(kind: str, q: int) -> int:
    base = q * (q * q - 1)
    if kind == "PSL2":
        return base // gcd(2, q - 1)
    return base


def matrix_group_elements(kind: str, q: int, cap: int | None = None):
    """Closure of the standard generators without tabulating; returns the Closure."""
    F = gf(q)
    gens = _sl2_generators(F)
    if kind == "SL2":
        return enumerate_closure((1, 0, 0, 1), gens, _matrix_mul_factory(F), lambda a: a, cap)
    if kind not in ("PSL2", "PGL2"):
        raise InvalidParams(f"unknown matrix family {kind!r}")
    if kind == "PGL2":
        gens = gens + [(F.primitive, 0, 0, 1)]
    perms = [_projective_perm(F, g) for g in gens]
    ident = np.arange(q + 1)
    return enumerate_closure(ident, perms, lambda a, b: b[a], lambda a: a.tobytes(), cap)


def matrix_group_family(kind: str, q: int) -> GroupTable:
    """SL(2,q) from matrices; PSL(2,q) and PGL(2,q) on the projective line."""
    kind = kind.upper()
    if q > 31:
        raise InvalidParams(f"matrix families are limited to q <= 31, got {q}")
    prime_power(q)
    if kind not in ("SL2", "PSL2", "PGL2"):
        raise InvalidParams(f"unknown matrix family {kind!r}")
    _check_cap(matrix_group_order(kind, q))
    closure = matrix_group_elements(kind, q)
    mul = table_from_closure(closure)
    label = {"SL2": "SL", "PSL2": "PSL", "PGL2": "PGL"}[kind]
    return GroupTable(mul, name=f"{label}(2,{q})", gens=_generator_ids(closure, len(closure.right)))


@lru_cache(maxsize=1)
def binary_octahedral() -> GroupTable:
    """The order-48 subgroup of SL(2,7) with a unique involution (Sylow 2 = Q16)."""
    from .core import subgroup_table
    from .lattice import all_subgroups

    G = matrix_group_family("SL2", 7)
    for H in all_subgroups(G):
        if H.order == 48 and int((G.orders[H.members] == 2).sum()) == 1:
            T = subgroup_table(G, H, name="2.S4-")
            return T
    raise InternalError("no order-48 subgroup with a unique involution found in SL(2,7)")


# --------------------------------------------------------------------------
# default catalogue


def _unit_of_order(n: int, k: int) -> int | None:
    """Smallest residue mod prime ``n`` of multiplicative order exactly ``k``."""
    for e in range(2, n):
        x, m = e, 1
        while x != 1:
            x = x * e % n
            m += 1
        if m == k:
            return e
    return None


def default_catalogue(max_order: int = 200) -> list[str]:
    """Canonical spec strings of the sweep catalogue, sorted by (order, spec)."""
    specs: dict[str, int] = {}

    def add(spec, order):
        if order <= max_order:
            specs[spec] = order

    for n in range(1, max_order + 1):
        add(f"cyclic:{n}", n)
    for n in range(6, max_order + 1, 2):
        add(f"dihedral:{n}", n)
    k = 8
    while k <= max_order:
        add(f"quaternion:{k}", k)
        k *= 2
    for p in primerange(2, max_order + 1):
        e = 2
        while p**e <= max_order:
            add(f"elementary_abelian:{p}:{e}", p**e)
            e += 1
    # Z_q:Z_p, odd primes p < q, p | q-1
    for p in primerange(3, max_order):
        for q in primerange(p + 1, max_order // p + 1):
            if (q - 1) % p == 0:
                add(f"semidirect:cyclic:{q}:cyclic:{p}:exp={_unit_of_order(q, p)}", p * q)
    # Z_p:Z_{2^n} for every nontrivial image order 2^j
    for p in primerange(3, max_order):
        n = 1
        while p * 2**n <= max_order:
            for j in range(1, n + 1):
                if (p - 1) % 2**j == 0 and not (p == 3 and n == 1):
                    add(f"semidirect:cyclic:{p}:cyclic:{2**n}:exp={_unit_of_order(p, 2**j)}", p * 2**n)
            n += 1
    # Z_p:Q_{2^n}: kernel <x> (y inverts) and, for n >= 4, kernel <x^2, y>
    for p in primerange(3, max_order):
        n = 3
        while p * 2**n <= max_order:
            add(f"semidirect:cyclic:{p}:quaternion:{2**n}:exp=1,-1", p * 2**n)
            if n >= 4:
                add(f"semidirect:cyclic:{p}:quaternion:{2**n}:exp=-1,1", p * 2**n)
            n += 1
    for spec, order in [
        ("alternating:4", 12), ("symmetric:4", 24), ("alternating:5", 60), ("symmetric:5", 120),
        ("sl2:3", 24), ("sl2:5", 120), ("psl2:7", 168), ("binary_octahedral", 48),
        ("semidirect:quaternion:8:cyclic:3:auto=4,5", 24),
    ]:
        add(spec, order)
    # direct products: small nonabelian groups with small cyclic factors,
    # plus the non-cyclic abelian groups of this shape
    left = [
        ("dihedral:6", 6), ("dihedral:8", 8), ("quaternion:8", 8), ("dihedral:10", 10),
        ("alternating:4", 12), ("semidirect:cyclic:3:cyclic:4:exp=2", 12),
        ("semidirect:cyclic:7:cyclic:3:exp=2", 21), ("sl2:3", 24), ("symmetric:4", 24),
        ("quaternion:16", 16), ("dihedral:16", 16), ("alternating:5", 60),
    ]
    right = [("cyclic:2", 2), ("cyclic:3", 3), ("cyclic:4", 4), ("cyclic:5", 5), ("dihedral:6", 6)]
    for a, na in left:
        for b, nb in right:
            if a != b:
                add(f"product:{a}*{b}", na * nb)
    for a in (2, 3, 4, 5):
        for b in range(a, max_order // a + 1):
            if b % a == 0 and (b > a or a == 4):
                add(f"product:cyclic:{a}*cyclic:{b}", a * b)
    return sorted(specs, key=lambda s: (specs[s], s))


def catalogue_orders(max_order: int = 200) -> dict[str, int]:
    """Map spec -> order without building anything (the orders are known)."""
    from .spec import parse_spec, spec_order

    return {s: spec_order(parse_spec(s)) for s in default_catalogue(max_order)}
