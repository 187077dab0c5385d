"""Deciding whether a subgroup is a perfect code in some Cayley graph.

Three independent routes are available:

* the coset criterion: for every ``x`` with ``x^2`` in ``H`` and
  ``|H|/|H cap H^x|`` odd, the coset ``Hx`` must contain an element squaring
  to the identity;
* the Sylow 2-reduction: replace ``H`` by a Sylow 2-subgroup ``Q`` of ``H`` and
  ``G`` by a Sylow 2-subgroup ``P`` of ``N_G(Q)``, then test ``Q`` inside ``P``;
* an explicit search for an inverse-closed right transversal, whose
  non-identity elements form a connection set in which ``H`` is a perfect code.

``delta`` uses the odd order/index shortcut and the criterion; the other two
routes run in audit mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config
from .core import GroupTable, Subgroup
from .errors import CapExceeded, InternalError, NotATransversal, NotInverseClosed
from .lattice import normalizer, prime_signature, subgroup_classes, sylow


@dataclass(frozen=True)
class Transversal:
    reps: tuple  # one element id per right coset, indexed by coset number
    inverse_closed: bool


@dataclass(frozen=True)
class CayleyGraph:
    owner: GroupTable
    connection_set: tuple

    def adjacency(self) -> np.ndarray:
        """``A[x, y]`` is true iff ``y x^-1`` lies in the connection set."""
        G = self.owner
        inS = np.zeros(G.order, dtype=bool)
        inS[list(self.connection_set)] = True
        return inS[G.mul[np.arange(G.order)[None, :], G.inv[:, None]]]


def fast_path_odd(G: GroupTable, H: Subgroup) -> bool | None:
    """``True`` when ``|H|`` or ``[G:H]`` is odd, otherwise ``None`` (unknown)."""
    if H.order % 2 or (G.order // H.order) % 2:
        return True
    return None


def _involution_or_identity(G: GroupTable) -> np.ndarray:
    return G.squares == 0


def is_perfect_code_criterion(G: GroupTable, H: Subgroup) -> bool:
    inH = H.indicator
    sq = G.squares
    cands = np.flatnonzero(inH[sq] & ~inH)
    if len(cands) == 0:
        return True
    conj = G.conj_table()
    if conj is not None:
        inter = inH[conj[np.ix_(cands, H.members)]].sum(axis=1)
    else:
        inter = np.array([inH[G.conjugate_set(H.members, int(x))].sum() for x in cands])
    cands = cands[(H.order // inter) % 2 == 1]
    if len(cands) == 0:
        return True
    cosets = G.mul[np.ix_(H.members, cands)]
    return bool(_involution_or_identity(G)[cosets].any(axis=0).all())


def _two_group_test(G: GroupTable, Q: Subgroup, P: Subgroup) -> bool:
    """For each ``x`` in ``P`` with ``x^2`` in ``Q``, ``Qx`` holds an element squaring to 1."""
    sq = G.squares
    xs = P.members[Q.indicator[sq[P.members]]]
    cosets = G.mul[np.ix_(Q.members, xs)]
    return bool(_involution_or_identity(G)[cosets].any(axis=0).all())


def sylow_reduction_pair(G: GroupTable, H: Subgroup) -> tuple[Subgroup, Subgroup]:
    Q = sylow(G, 2, within=H)
    N = normalizer(G, Q)
    P = sylow(G, 2, within=N)
    return Q, P


def is_perfect_code_sylow_reduction(G: GroupTable, H: Subgroup) -> bool:
    Q, P = sylow_reduction_pair(G, H)
    return _two_group_test(G, Q, P)


def right_coset_ids(G: GroupTable, H: Subgroup) -> np.ndarray:
    """``ids[x]`` numbers the right coset ``Hx``; ``H`` itself is coset 0."""
    ids = np.full(G.order, -1, dtype=np.int64)
    k = 0
    for x in range(G.order):
        if ids[x] < 0:
            ids[G.mul[H.members, x]] = k
            k += 1
    return ids


def find_inverse_closed_transversal(G: GroupTable, H: Subgroup) -> Transversal | None:
    """Complete backtracking search; ``None`` proves that no such transversal exists.

    Choosing ``t`` as the representative of ``Ht`` forces ``t^-1`` for
    ``Ht^-1``, and ``t`` must square to 1 when both cosets coincide. Options
    only link cosets inside ``HxH`` and ``Hx^-1H``, so each such block is
    solved on its own. Within a block the coset with the fewest live options
    is branched on first.
    """
    index = G.order // H.order
    cap = config.caps().transversal
    if index > cap:
        raise CapExceeded("transversal index", index, cap)
    coset = right_coset_ids(G, H)
    inv = G.inv
    sq = G.squares
    options: list[list[int]] = [[] for _ in range(index)]
    for t in range(G.order):
        c, d = int(coset[t]), int(coset[inv[t]])
        if c != d or sq[t] == 0:
            options[c].append(t)
    options[0] = [0]

    # blocks of cosets linked by options
    parent = list(range(index))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c in range(index):
        for t in options[c]:
            a, b = find(c), find(int(coset[inv[t]]))
            if a != b:
                parent[a] = b
    blocks: dict[int, list[int]] = {}
    for c in range(index):
        blocks.setdefault(find(c), []).append(c)

    rep = [-1] * index

    def live(c):
        return [t for t in options[c] if rep[int(coset[inv[t]])] < 0 or int(coset[inv[t]]) == c]

    def solve(cosets):
        open_ = [c for c in cosets if rep[c] < 0]
        if not open_:
            return True
        best, best_opts = None, None
        for c in open_:
            opts = live(c)
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = c, opts
                if len(opts) <= 1:
                    break
        for t in best_opts:
            d = int(coset[inv[t]])
            rep[best] = t
            rep[d] = int(inv[t])
            if solve(cosets):
                return True
            rep[best] = -1
            rep[d] = -1
        return False

    for cosets in blocks.values():
        if not solve(cosets):
            return None
    return Transversal(tuple(rep), True)


def verify_in_cayley(G: GroupTable, H: Subgroup, T: Transversal | list) -> bool:
    """Check from the graph definition that ``H`` is a perfect code of
    ``Cay(G, T minus {1})``.

    The representative of ``H``'s own coset is first replaced by the identity.
    """
    reps = list(T.reps if isinstance(T, Transversal) else T)
    index = G.order // H.order
    coset = right_coset_ids(G, H)
    hits = np.bincount(coset[reps], minlength=index) if reps else np.zeros(index, dtype=int)
    if len(reps) != index or (hits != 1).any():
        raise NotATransversal(f"{len(reps)} elements do not meet each of the {index} right cosets once")
    rep_set = {int(r) for r in reps if not H.indicator[r]} | {0}
    if rep_set != {int(G.inv[r]) for r in rep_set}:
        raise NotInverseClosed("transversal is not closed under inversion")
    graph = CayleyGraph(G, tuple(sorted(rep_set - {0})))
    A = graph.adjacency()
    if (A != A.T).any() or A.diagonal().any():
        raise InternalError("connection set produced a non-simple graph")
    degree = len(graph.connection_set)
    if not (A.sum(axis=1) == degree).all():
        raise InternalError("Cayley graph is not regular")
    hm = H.members
    if A[np.ix_(hm, hm)].any():
        return False
    outside = np.flatnonzero(~H.indicator)
    if len(outside) == 0:
        return True
    return bool((A[np.ix_(outside, hm)].sum(axis=1) == 1).all())


def is_perfect_code(G: GroupTable, H: Subgroup) -> bool:
    return bool(fast_path_odd(G, H)) or is_perfect_code_criterion(G, H)


# --------------------------------------------------------------------------
# Delta(G)


@dataclass(frozen=True)
class DeltaClass:
    representative: Subgroup
    class_size: int
    routes: tuple

    @property
    def order(self) -> int:
        return self.representative.order


@dataclass(frozen=True)
class DeltaReport:
    group: str
    order: int
    delta_classes: tuple
    pi_count: int
    audit: dict = field(default_factory=dict)

    @property
    def delta_count(self) -> int:
        return len(self.delta_classes)


def audit_routes(G: GroupTable, H: Subgroup) -> dict:
    """Run every route on ``H``; the ``agree`` entry says whether they concur."""
    crit = is_perfect_code_criterion(G, H)
    syl = is_perfect_code_sylow_reduction(G, H)
    T = find_inverse_closed_transversal(G, H)
    cay = verify_in_cayley(G, H, T) if T is not None else None
    out = {"criterion": crit, "sylow_reduction": syl, "transversal": T is not None, "cayley": cay}
    out["agree"] = crit == syl == (T is not None) and (cay is None or cay)
    return out


def delta(G: GroupTable, audit: bool = False) -> DeltaReport:
    """Conjugacy classes of nontrivial proper subgroups that are perfect codes."""
    cache_key = ("delta", audit)
    if cache_key in G._cache:
        return G._cache[cache_key]
    n = G.order
    found = []
    audits = {}
    for c in subgroup_classes(G):
        H = c.representative
        if H.order == 1 or H.order == n:
            continue
        routes = []
        if H.order % 2:
            routes.append("odd_order")
        if (n // H.order) % 2:
            routes.append("odd_index")
        code = bool(routes) or is_perfect_code_criterion(G, H)
        if code and not routes:
            routes.append("criterion")
        if audit:
            info = audit_routes(G, H)
            info["class_constant"] = all(is_perfect_code(G, K) == code for K in c.conjugates)
            info["agree"] = info["agree"] and info["criterion"] == code and info["class_constant"]
            audits[tuple(H.members.tolist())] = info
            if code:
                routes += [r for r in ("sylow_reduction", "transversal", "cayley") if info[r]]
        if code:
            found.append(DeltaClass(H, c.size, tuple(routes)))
    report = DeltaReport(G.name, n, tuple(found), len(prime_signature(G).primes), audits)
    G._cache[cache_key] = report
    return report
