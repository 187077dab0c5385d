"""Finite groups as dense multiplication tables over integer element ids.

Every group is normalized to a ``GroupTable``: element ``0`` is the identity,
``mul[a, b]`` is the id of ``a*b`` and ``inv[a]`` the id of ``a**-1``.
Permutation and matrix forms only exist while a table is being built.

Permutations multiply left to right: ``x^(ab) = (x^a)^b``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import config
from .errors import CapExceeded, InvalidGenerator, NotNormal

ElementId = int

# above this order the conjugation table is not materialized
_CONJ_TABLE_LIMIT = 2048


def _index_dtype(n: int):
    return np.int16 if n <= np.iinfo(np.int16).max else np.int32


class GroupTable:
    """A finite group given by its full multiplication table."""

    def __init__(self, mul, name: str = "", source=None, gens: Sequence[int] = ()):
        mul = np.asarray(mul)
        n = mul.shape[0]
        if mul.shape != (n, n) or n == 0:
            raise ValueError("multiplication table must be a non-empty square array")
        self.mul = np.ascontiguousarray(mul, dtype=_index_dtype(n))
        self.mul.flags.writeable = False
        rows, cols = np.nonzero(self.mul == 0)
        if len(rows) != n:
            raise ValueError("table is not a group: identity row/column mismatch")
        inv = np.empty(n, dtype=self.mul.dtype)
        inv[rows] = cols
        inv.flags.writeable = False
        self.inv = inv
        self.order = n
        self.name = name
        self.source = source
        self.gens = tuple(int(g) for g in gens)
        self._cache: dict = {}

    def __repr__(self):
        return f"GroupTable({self.name or '?'}, order={self.order})"

    def __len__(self):
        return self.order

    # element level

    def product(self, a: ElementId, b: ElementId) -> ElementId:
        return int(self.mul[a, b])

    def inverse(self, a: ElementId) -> ElementId:
        return int(self.inv[a])

    def power(self, a: ElementId, k: int) -> ElementId:
        if k < 0:
            a, k = int(self.inv[a]), -k
        result, base = 0, a
        while k:
            if k & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            k >>= 1
        return result

    def element_order(self, a: ElementId) -> int:
        return int(self.orders[a])

    @property
    def orders(self) -> np.ndarray:
        """Order of every element, as an array indexed by element id."""
        if "orders" not in self._cache:
            n = self.order
            idx = np.arange(n)
            result = np.zeros(n, dtype=np.int64)
            power = idx.copy()
            k = 1
            while True:
                hit = (power == 0) & (result == 0)
                result[hit] = k
                if result.all():
                    break
                power = self.mul[power, idx]
                k += 1
            result.flags.writeable = False
            self._cache["orders"] = result
        return self._cache["orders"]

    @property
    def rows(self) -> list:
        """The table as nested lists, for fast scalar lookups."""
        if "rows" not in self._cache:
            self._cache["rows"] = self.mul.tolist()
        return self._cache["rows"]

    @property
    def squares(self) -> np.ndarray:
        if "squares" not in self._cache:
            idx = np.arange(self.order)
            sq = self.mul[idx, idx]
            sq.flags.writeable = False
            self._cache["squares"] = sq
        return self._cache["squares"]

    @property
    def is_abelian(self) -> bool:
        if "abelian" not in self._cache:
            self._cache["abelian"] = bool(np.array_equal(self.mul, self.mul.T))
        return self._cache["abelian"]

    @property
    def involutions(self) -> np.ndarray:
        return np.flatnonzero(self.orders == 2)

    def conj_table(self) -> np.ndarray | None:
        """``conj[g, h] = g^-1 h g``; ``None`` for groups above the table limit."""
        if self.order > _CONJ_TABLE_LIMIT:
            return None
        if "conj" not in self._cache:
            left = self.mul[self.inv]  # left[g, h] = g^-1 h
            conj = self.mul[left, np.arange(self.order)[:, None]]
            conj.flags.writeable = False
            self._cache["conj"] = conj
        return self._cache["conj"]

    def conjugates_of(self, x: ElementId) -> np.ndarray:
        """``g^-1 x g`` for every g, indexed by g."""
        return self.mul[self.mul[self.inv, x], np.arange(self.order)]

    def conjugate_set(self, members: np.ndarray, g: ElementId) -> np.ndarray:
        return self.mul[self.mul[self.inv[g], members], g]


def check_table(G: GroupTable, full_limit: int = 512, samples: int = 100_000, seed: int = 0) -> None:
    """Assert the group axioms on ``G``.

    Associativity is checked exhaustively up to ``full_limit`` and on random
    triples above it.
    """
    n = G.order
    mul = G.mul.astype(np.int64)
    idx = np.arange(n)
    assert np.array_equal(mul[0], idx) and np.array_equal(mul[:, 0], idx), "identity is not id 0"
    srt = np.sort(mul, axis=1)
    assert (srt == idx).all(), "rows are not permutations"
    srt = np.sort(mul, axis=0)
    assert (srt == idx[:, None]).all(), "columns are not permutations"
    assert (mul[idx, G.inv] == 0).all() and np.array_equal(G.inv[G.inv], idx)
    if n <= full_limit:
        for a in range(n):
            assert np.array_equal(mul[mul[a]], mul[a][mul]), f"associativity fails at a={a}"
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        assert np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]), "associativity audit failed"


# --------------------------------------------------------------------------
# subgroups


class Subgroup:
    """A subgroup of ``owner`` stored as sorted member ids plus a packed bitmask."""

    __slots__ = ("members", "key", "owner", "gens", "_indicator")

    def __init__(self, owner: GroupTable, members, gens: Sequence[int] = ()):
        members = np.unique(np.asarray(members, dtype=np.int64))
        members.flags.writeable = False
        self.owner = owner
        self.members = members
        ind = np.zeros(owner.order, dtype=bool)
        ind[members] = True
        ind.flags.writeable = False
        self._indicator = ind
        self.key = np.packbits(ind, bitorder="little").tobytes()
        self.gens = tuple(int(g) for g in gens)

    @classmethod
    def from_indicator(cls, owner, ind, gens=()):
        return cls(owner, np.flatnonzero(ind), gens)

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def indicator(self) -> np.ndarray:
        return self._indicator

    @property
    def mask(self) -> int:
        """Bit ``i`` is set iff element ``i`` is a member."""
        return int.from_bytes(self.key, "little")

    @property
    def index(self) -> int:
        return self.owner.order // self.order

    def __contains__(self, x) -> bool:
        return bool(self._indicator[x])

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(int(m) for m in self.members)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.owner is other.owner and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Subgroup(order={self.order}, of={self.owner.name or self.owner.order})"

    def sort_key(self):
        return (self.order, tuple(self.members.tolist()))

    def issubset(self, other: "Subgroup") -> bool:
        return bool(other.indicator[self.members].all())

    def is_normal(self) -> bool:
        G = self.owner
        gens = G.gens or range(G.order)
        return all(self._indicator[G.conjugate_set(self.members, g)].all() for g in gens)


def trivial_subgroup(G: GroupTable) -> Subgroup:
    return Subgroup(G, [0])


def whole_group(G: GroupTable) -> Subgroup:
    return Subgroup(G, np.arange(G.order), G.gens)


def _extend(G: GroupTable, ind: np.ndarray, members: np.ndarray, gens: list[int], g: int) -> np.ndarray:
    """Dimino step: close the subgroup ``members`` (indicator ``ind``) with ``g``.

    The result is accumulated as a union of right cosets of the starting
    subgroup; ``ind`` is updated in place and the new member array returned.
    """
    mul = G.mul
    rows = G.rows
    base = members
    blocks = [base]
    reps = [0]
    all_gens = gens + [g]
    i = 0
    while i < len(reps):
        row = rows[reps[i]]
        for s in all_gens:
            e = row[s]
            if not ind[e]:
                coset = mul[base, e]
                ind[coset] = True
                blocks.append(coset)
                reps.append(e)
        i += 1
    return np.concatenate(blocks) if len(blocks) > 1 else base


def generate(G: GroupTable, gens: Iterable[int], within: Subgroup | None = None) -> Subgroup:
    """The subgroup generated by ``gens`` (optionally joined with ``within``)."""
    if within is None:
        ind = np.zeros(G.order, dtype=bool)
        ind[0] = True
        members = np.array([0], dtype=np.int64)
        used: list[int] = []
    else:
        ind = within.indicator.copy()
        members = within.members
        used = list(within.gens)
    for g in gens:
        g = int(g)
        if ind[g]:
            continue
        members = _extend(G, ind, members, used, g)
        used.append(g)
    return Subgroup(G, np.flatnonzero(ind), used)


def join(G: GroupTable, H: Subgroup, g: int) -> Subgroup:
    """``<H, g>``."""
    return generate(G, [g], within=H)


# --------------------------------------------------------------------------
# construction by closure


@dataclass(frozen=True)
class Closure:
    """Breadth-first enumeration of a generated group, before tabulation."""

    keys: list
    parent: list  # (parent index, generator index) per element; identity has (-1, -1)
    right: list  # right[i][a] = index of a * gens[i]


def enumerate_closure(identity: Hashable, gens: Sequence, multiply: Callable, key: Callable, cap: int | None = None) -> Closure:
    """Breadth-first closure of ``gens`` from ``identity``.

    ``multiply(a, b)`` composes native elements; ``key`` maps a native element
    to a hashable. Raises ``CapExceeded`` once more than ``cap`` elements appear.
    """
    cap = config.caps().group if cap is None else cap
    elements = [identity]
    keys = [key(identity)]
    index = {keys[0]: 0}
    parent = [(-1, -1)]
    right: list[list[int]] = [[] for _ in gens]
    queue = deque([0])
    while queue:
        a = queue.popleft()
        x = elements[a]
        for gi, g in enumerate(gens):
            y = multiply(x, g)
            k = key(y)
            j = index.get(k)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise CapExceeded("generated group", f">{cap}", cap)
                index[k] = j
                elements.append(y)
                keys.append(k)
                parent.append((a, gi))
                queue.append(j)
            right[gi].append(j)
    # right lists were filled in BFS order of `a`, which equals index order
    return Closure(keys, parent, right)


def table_from_closure(closure: Closure) -> np.ndarray:
    n = len(closure.keys)
    dtype = _index_dtype(n)
    mul = np.empty((n, n), dtype=dtype)
    mul[:, 0] = np.arange(n)
    right = [np.asarray(r, dtype=dtype) for r in closure.right]
    for b in range(1, n):
        p, gi = closure.parent[b]
        mul[:, b] = right[gi][mul[:, p]]
    return mul


def parse_cycles(text: str) -> list[list[int]]:
    """``"(1,2,3)(4,5)"`` -> ``[[1,2,3],[4,5]]``; ``"()"`` is the identity."""
    text = text.replace(" ", "")
    cycles = []
    pos = 0
    while pos < len(text):
        if text[pos] != "(":
            raise InvalidGenerator(f"malformed cycle notation: {text!r}")
        end = text.find(")", pos)
        if end < 0:
            raise InvalidGenerator(f"unclosed cycle: {text!r}")
        body = text[pos + 1 : end]
        if body:
            try:
                cycles.append([int(t) for t in body.split(",")])
            except ValueError:
                raise InvalidGenerator(f"non-integer point in {text!r}") from None
        pos = end + 1
    return cycles


def perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int) -> np.ndarray:
    """Image array on points ``0..degree-1`` for 1-based cycles."""
    perm = np.arange(degree)
    seen = set()
    for cyc in cycles:
        for p in cyc:
            if p < 1 or p > degree or p in seen:
                raise InvalidGenerator(f"point {p} repeated or out of range in {cycles}")
            seen.add(p)
        for i, p in enumerate(cyc):
            perm[p - 1] = cyc[(i + 1) % len(cyc)] - 1
    return perm


def _as_perm_arrays(gens) -> list[np.ndarray]:
    parsed = []
    for g in gens:
        if isinstance(g, str):
            parsed.append(("cycles", parse_cycles(g)))
        else:
            arr = np.asarray(g, dtype=np.int64)
            if arr.ndim != 1 or sorted(arr.tolist()) != list(range(len(arr))):
                raise InvalidGenerator(f"not a permutation image array: {g!r}")
            parsed.append(("array", arr))
    degree = 1
    for kind, g in parsed:
        if kind == "cycles":
            degree = max([degree] + [max(c) for c in g if c])
        else:
            degree = max(degree, len(g))
    out = []
    for kind, g in parsed:
        if kind == "cycles":
            out.append(perm_from_cycles(g, degree))
        else:
            out.append(np.concatenate([g, np.arange(len(g), degree)]))
    return out


def closure_from_permutations(gens, name: str = "", source=None, cap: int | None = None) -> GroupTable:
    """Tabulate the group generated by permutations.

    ``gens`` holds cycle strings like ``"(1,2,3)(4,5)"`` (1-based) or 0-based
    image arrays.
    """
    perms = _as_perm_arrays(gens)
    degree = len(perms[0]) if perms else 1
    ident = np.arange(degree)
    closure = enumerate_closure(ident, perms, lambda a, b: b[a], lambda a: a.tobytes(), cap)
    mul = table_from_closure(closure)
    return GroupTable(mul, name=name, source=source, gens=_generator_ids(closure, len(perms)))


def _generator_ids(closure: Closure, k: int) -> list[int]:
    return [closure.right[i][0] for i in range(k)]


def _matmul_mod(a, b, p):
    return (
        (a[0] * b[0] + a[1] * b[2]) % p,
        (a[0] * b[1] + a[1] * b[3]) % p,
        (a[2] * b[0] + a[3] * b[2]) % p,
        (a[2] * b[1] + a[3] * b[3]) % p,
    )


def closure_from_matrices(p: int, gens, name: str = "", source=None, cap: int | None = None) -> GroupTable:
    """Tabulate the group generated by 2x2 matrices over the prime field ``F_p``.

    Matrices are row-major 4-tuples ``(a, b, c, d)``.
    """
    from sympy import isprime

    if not isprime(p):
        raise InvalidGenerator(f"matrix field size {p} is not prime")
    mats = []
    for g in gens:
        g = tuple(int(x) % p for x in g)
        if len(g) != 4:
            raise InvalidGenerator(f"expected 4 matrix entries, got {g}")
        if (g[0] * g[3] - g[1] * g[2]) % p == 0:
            raise InvalidGenerator(f"singular matrix {g} mod {p}")
        mats.append(g)
    closure = enumerate_closure((1, 0, 0, 1), mats, lambda a, b: _matmul_mod(a, b, p), lambda a: a, cap)
    mul = table_from_closure(closure)
    return GroupTable(mul, name=name, source=source, gens=_generator_ids(closure, len(mats)))


def closure_from_generators(gens, p: int | None = None, name: str = "", source=None, cap: int | None = None) -> GroupTable:
    """Permutation generators, or 2x2 matrices over ``F_p`` when ``p`` is given."""
    if p is None:
        return closure_from_permutations(gens, name=name, source=source, cap=cap)
    return closure_from_matrices(p, gens, name=name, source=source, cap=cap)


# --------------------------------------------------------------------------
# element-level structure


@dataclass(frozen=True)
class ConjClassPartition:
    classes: list  # list of sorted np arrays
    class_of: np.ndarray
    involution_class_count: int

    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


def conjugacy_classes(G: GroupTable) -> ConjClassPartition:
    if "conj_classes" in G._cache:
        return G._cache["conj_classes"]
    n = G.order
    class_of = np.full(n, -1, dtype=np.int64)
    classes = []
    for x in range(n):
        if class_of[x] >= 0:
            continue
        orbit = np.unique(G.conjugates_of(x))
        class_of[orbit] = len(classes)
        classes.append(orbit)
    sq = G.squares
    inv_classes = sum(1 for c in classes[1:] if sq[c[0]] == 0)
    class_of.flags.writeable = False
    result = ConjClassPartition(classes, class_of, inv_classes)
    G._cache["conj_classes"] = result
    return result


def center(G: GroupTable) -> Subgroup:
    if G.is_abelian:
        return whole_group(G)
    central = (G.mul == G.mul.T).all(axis=1)
    return Subgroup.from_indicator(G, central)


def commutator_subgroup(G: GroupTable, K: Subgroup) -> Subgroup:
    m = K.members
    inv = G.inv
    # [a, b] = a^-1 b^-1 a b
    left = G.mul[inv[m][:, None], inv[m][None, :]]
    right = G.mul[m[:, None], m[None, :]]
    comms = np.unique(G.mul[left, right])
    return generate(G, comms.tolist())


def derived_series(G: GroupTable) -> tuple[list[Subgroup], bool]:
    """``G >= G' >= G'' >= ...`` until it stabilizes, plus the solvability verdict."""
    if "derived" in G._cache:
        return G._cache["derived"]
    series = [whole_group(G)]
    while True:
        nxt = commutator_subgroup(G, series[-1])
        if nxt.order == series[-1].order:
            break
        series.append(nxt)
    result = (series, series[-1].order == 1)
    G._cache["derived"] = result
    return result


def is_solvable(G: GroupTable) -> bool:
    return derived_series(G)[1]


def subgroup_table(G: GroupTable, H: Subgroup, name: str = "") -> GroupTable:
    """``H`` as a group in its own right; ids follow the sorted member order."""
    m = H.members
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[m] = np.arange(len(m))
    sub = pos[G.mul[m[:, None], m[None, :]]]
    gens = [int(pos[g]) for g in H.gens if pos[g] > 0]
    T = GroupTable(sub, name=name or f"sub{H.order}({G.name})", gens=gens)
    T._cache["embedding"] = m
    return T


@dataclass(frozen=True)
class Quotient:
    group: GroupTable
    projection: np.ndarray  # element id of G -> coset id
    representatives: np.ndarray


def quotient(G: GroupTable, N: Subgroup, name: str = "") -> Quotient:
    """``G/N`` with its projection; raises ``NotNormal`` unless ``N`` is normal."""
    if not N.is_normal():
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.name}")
    n = G.order
    proj = np.full(n, -1, dtype=np.int64)
    reps = []
    for x in range(n):
        if proj[x] >= 0:
            continue
        proj[G.mul[x, N.members]] = len(reps)
        reps.append(x)
    reps = np.asarray(reps, dtype=np.int64)
    qmul = proj[G.mul[reps[:, None], reps[None, :]]]
    gens = sorted({int(proj[g]) for g in G.gens} - {0})
    Q = GroupTable(qmul, name=name or f"{G.name}/{N.order}", gens=gens)
    return Quotient(Q, proj, reps)


def exponent(G: GroupTable) -> int:
    return math.lcm(*G.orders.tolist())


def order_profile(G: GroupTable) -> tuple:
    """Sorted ``(element order, count)`` pairs."""
    vals, counts = np.unique(G.orders, return_counts=True)
    return tuple(zip(vals.tolist(), counts.tolist()))
