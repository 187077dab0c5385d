"""Checkers that test the classification statements on concrete groups.

Every checker returns a ``CheckResult``; a failing result always carries a
witness naming the group and the offending values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from sympy import factorint, isprime, primerange

from .catalog import make_family
from .codes import delta
from .core import GroupTable, center, conjugacy_classes, is_solvable, quotient, subgroup_table
from .errors import InternalError, InvalidRange
from .lattice import core_o2, normal_subgroups, normal_subgroups_and_socle, prime_signature, sylow
from .shapes import ShapeTag, bounded_isomorphic, recognize_shape

PASS, FAIL, NOT_APPLICABLE = "pass", "fail", "not_applicable"


@dataclass(frozen=True)
class CheckResult:
    check_name: str
    status: str
    witness: dict | None = None
    details: str = ""
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (PASS, FAIL, NOT_APPLICABLE):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAIL and self.witness is None:
            raise InternalError(f"{self.check_name}: failing result without a witness")

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        return {"check_name": self.check_name, "status": self.status,
                "witness": self.witness, "details": self.details}


def label(G: GroupTable) -> str:
    return str(G.source) if G.source else G.name


def _result(name, ok, G, details, **extra) -> CheckResult:
    witness = None if ok else {"group": label(G), **extra}
    return CheckResult(name, PASS if ok else FAIL, witness, details, dict(extra))


# --------------------------------------------------------------------------
# structural facts shared by the checkers


def sylow2_shape(G: GroupTable) -> ShapeTag:
    if "sylow2_shape" not in G._cache:
        P = sylow(G, 2)
        G._cache["sylow2_shape"] = recognize_shape(subgroup_table(G, P))
    return G._cache["sylow2_shape"]


def involution_class_count(G: GroupTable) -> int:
    return conjugacy_classes(G).involution_class_count


def _is_prime_power(n: int) -> tuple[int, int] | None:
    if n < 2:
        return None
    fac = factorint(n)
    if len(fac) != 1:
        return None
    (p, e), = fac.items()
    return p, e


def _normal_sylow(G: GroupTable, p: int):
    S = sylow(G, p)
    return S if S.is_normal() else None


def table1_row(G: GroupTable) -> str | None:
    """The equality-table row whose shape ``G`` has, or None."""
    n = G.order
    sig = prime_signature(G)
    primes = sig.primes
    shape = recognize_shape(G)
    pp = _is_prime_power(n)
    if shape.kind == "cyclic" and pp and pp[0] > 2 and pp[1] == 2:
        return "Z_{p^2}"
    if len(primes) == 2 and sig.exponents == (1, 1) and primes[0] > 2:
        return "Z_q:Z_p"
    if len(primes) == 2 and primes[0] == 2 and sig.exponents[1] == 1:
        p = primes[1]
        two = sylow2_shape(G)
        if _normal_sylow(G, p) is not None:
            if two.kind == "cyclic":
                return "Z_p:Z_{2^n}"
            if two.kind == "generalized_quaternion":
                return "Z_p:Q_{2^n}"
        if n == 24 and two == ShapeTag("generalized_quaternion", (8,)) and _normal_sylow(G, 2) is not None:
            return "Q_8:Z_3"
        if n == 48 and two == ShapeTag("generalized_quaternion", (16,)):
            sl23 = make_family("sl2", 3)
            for N in normal_subgroups(G):
                if N.order == 24 and bounded_isomorphic(subgroup_table(G, N), sl23):
                    return "SL(2,3).Z_2"
    return None


def is_exceptional_shape(G: GroupTable) -> bool:
    """Prime order, a cyclic 2-group of order at least 4, or generalized quaternion."""
    n = G.order
    shape = recognize_shape(G)
    if shape.kind == "cyclic" and n > 1 and isprime(n):
        return True
    pp = _is_prime_power(n)
    return bool(pp) and pp[0] == 2 and shape.is_cyclic_or_quaternion()


# --------------------------------------------------------------------------
# checkers


def check_empty_delta(G: GroupTable) -> CheckResult:
    name = "empty_delta"
    n = G.order
    if n == 1 or isprime(n):
        return CheckResult(name, NOT_APPLICABLE, None, f"order {n} is not composite; delta_count 0",
                           {"delta_count": 0})
    d = delta(G).delta_count
    pp = _is_prime_power(n)
    two_group = bool(pp) and pp[0] == 2
    unique_involution = two_group and len(G.involutions) == 1
    shaped = two_group and recognize_shape(G).is_cyclic_or_quaternion()
    ok = (d == 0) == shaped == unique_involution
    return _result(name, ok, G, f"delta_count {d}, cyclic/quaternion 2-group {shaped}, "
                   f"2-group with unique involution {unique_involution}",
                   delta_count=d, shape=str(recognize_shape(G)))


def check_main_theorem(G: GroupTable) -> CheckResult:
    name = "main_theorem"
    if G.order == 1:
        return CheckResult(name, NOT_APPLICABLE, None, "trivial group")
    d = delta(G).delta_count
    pi = len(prime_signature(G).primes)
    exceptional = is_exceptional_shape(G)
    if d < pi and not exceptional:
        return _result(name, False, G, f"delta_count {d} < |pi| {pi}", delta_count=d, pi=pi)
    row = table1_row(G) if pi >= 1 and not exceptional else None
    if d == pi and pi >= 1 and not exceptional and row is None:
        return _result(name, False, G, f"equality {d} = {pi} but no table row matches",
                       delta_count=d, pi=pi)
    if row is not None and d != pi:
        return _result(name, False, G, f"matches row {row} but delta_count {d} != {pi}",
                       delta_count=d, pi=pi, row=row)
    if exceptional:
        details = f"exceptional shape {recognize_shape(G)}, delta_count {d}"
    elif d == pi:
        details = f"equality {d} = {pi}, row {row}"
    else:
        details = f"strict {d} > {pi}"
    return CheckResult(name, PASS, None, details, {"delta_count": d, "pi": pi, "row": row})


# quotient orders allowed in the non-solvable case, with buildable specs
_NONSOLVABLE_QUOTIENTS = {
    60: ("psl2", 5), 120: ("pgl2", 5), 336: ("pgl2", 7), 720: ("pgl2", 9),
    2448: ("psl2", 17), 4896: ("pgl2", 17),
    257 * (257**2 - 1) // 2: ("psl2", 257), 257 * (257**2 - 1): ("pgl2", 257),
}


def _identify_quotient(Qg: GroupTable):
    """(name, exact) when the quotient is one of the allowed groups, else None."""
    key = _NONSOLVABLE_QUOTIENTS.get(Qg.order)
    if key is None:
        return None
    kind, q = key
    if q > 31:
        return None
    verdict = bounded_isomorphic(Qg, make_family(kind, q))
    if not verdict:
        return None
    return f"{kind[:-1].upper()}(2,{q})", verdict.exact


def _abelian_normal_sylow_quotient(Qg: GroupTable, p: int, a: int) -> bool:
    """``Qg`` has a normal abelian Sylow ``p``-subgroup of order ``p^a``.

    Any abelian group of order ``p`` or ``p^2`` is cyclic or elementary abelian,
    and a normal Sylow subgroup always has a complement.
    """
    S = sylow(Qg, p)
    if S.order != p**a or not S.is_normal():
        return False
    return subgroup_table(Qg, S).is_abelian


def check_pi_plus_one(G: GroupTable) -> CheckResult:
    name = "pi_plus_one"
    d = delta(G).delta_count
    sig = prime_signature(G)
    pi = len(sig.primes)
    if d != pi + 1:
        return CheckResult(name, NOT_APPLICABLE, None, f"delta_count {d} != |pi|+1 = {pi + 1}")
    n = G.order
    O = core_o2(G)
    if not is_solvable(G):
        two = sylow2_shape(G)
        reasons = []
        if two.kind != "generalized_quaternion":
            reasons.append(f"Sylow 2-subgroup is {two}")
        if O.order == 1 or recognize_shape(subgroup_table(G, O)).kind != "cyclic":
            reasons.append(f"O2 of order {O.order} is trivial or not cyclic")
        Qg = quotient(G, O).group
        found = _identify_quotient(Qg)
        if found is None:
            reasons.append(f"G/O2 of order {Qg.order} is not an allowed quotient")
        ok = not reasons
        details = "non-solvable: " + ("; ".join(reasons) if reasons else
                                      f"Sylow {two}, O2 cyclic of order {O.order}, G/O2 = {found[0]}"
                                      + ("" if found[1] else " (fingerprint confidence)"))
        return _result(name, ok, G, details, delta_count=d, pi=pi, case="non-solvable")
    # solvable cases
    shape = recognize_shape(G)
    pp = _is_prime_power(n)
    if shape.kind == "cyclic" and pp and pp[0] >= 3 and pp[1] == 3:
        return _result(name, True, G, f"case Z_(p^3) with p = {pp[0]}", delta_count=d, case="i")
    if pp and pp[0] == 2:
        z_cyclic = recognize_shape(subgroup_table(G, center(G))).kind == "cyclic"
        k = involution_class_count(G)
        ok = z_cyclic and k == 2
        return _result(name, ok, G, f"2-group: center cyclic {z_cyclic}, involution classes {k}",
                       delta_count=d, case="ii", involution_classes=k)
    if len(sig.primes) == 2 and sig.primes[0] == 2 and sig.exponents[1] in (1, 2):
        p, a = sig.primes[1], sig.exponents[1]
        Qg = quotient(G, O).group
        normal_part = _abelian_normal_sylow_quotient(Qg, p, a)
        k = involution_class_count(G)
        two = sylow2_shape(G)
        sylow_ok = a == 1 or two.is_cyclic_or_quaternion()
        ok = normal_part and k == 1 and sylow_ok
        return _result(name, ok, G,
                       f"|G| = 2^n p^{a}: G/O2 (order {Qg.order}) has normal abelian Sylow {p} "
                       f"{normal_part}, involution classes {k}, Sylow 2 {two}",
                       delta_count=d, case="iii", involution_classes=k)
    return _result(name, False, G, "solvable but matches none of the listed shapes",
                   delta_count=d, pi=pi)


def check_solvable_bound(G: GroupTable) -> CheckResult:
    name = "solvable_bound"
    if G.order == 1:
        return CheckResult(name, NOT_APPLICABLE, None, "trivial group")
    if not is_solvable(G):
        return CheckResult(name, NOT_APPLICABLE, None, "not solvable")
    d = delta(G).delta_count
    sig = prime_signature(G)
    bound = 2 ** len(sig.primes) - 2
    two = sylow2_shape(G)
    condition = sig.odd_part_squarefree and two.is_cyclic_or_quaternion()
    equality = d == bound
    ok = d >= bound and equality == condition
    return _result(name, ok, G,
                   f"delta_count {d} vs bound {bound}; odd part {sig.odd_part} squarefree "
                   f"{sig.odd_part_squarefree}, Sylow 2 {two}; equality {equality}, condition {condition}",
                   delta_count=d, bound=bound, equality=equality, condition=condition)


def _psl2_prime_order(s: int) -> int | None:
    """The odd prime ``p`` with ``p(p^2-1)/2 = s``, if any."""
    p = round((2 * s) ** (1 / 3))
    for c in range(max(3, p - 2), p + 3):
        if c * (c * c - 1) // 2 == s and isprime(c):
            return c
    return None


def _two_distinct_primes(m: int) -> bool:
    fac = factorint(m)
    return len(fac) == 2 and all(e == 1 for e in fac.values())


def allowed_socle_order(s: int) -> bool:
    if s in (60, 168, 360, 2448, 29120):
        return True
    p = _psl2_prime_order(s)
    if p is None or p in (5, 7, 17):
        return False
    odd = p * p - 1
    while odd % 2 == 0:
        odd //= 2
    return _two_distinct_primes(odd)


def check_small_delta(G: GroupTable) -> CheckResult:
    name = "small_delta"
    if G.order == 1:
        return CheckResult(name, NOT_APPLICABLE, None, "trivial group")
    d = delta(G).delta_count
    pi = len(prime_signature(G).primes)
    solvable = is_solvable(G)
    reasons = []
    if d <= 3 and not (solvable and pi <= 2):
        reasons.append(f"delta_count {d} <= 3 but solvable {solvable}, |pi| {pi}")
    if not solvable and pi == 5 and d < 7:
        reasons.append(f"non-solvable with |pi| 5 and delta_count {d} < 7")
    socle_order = None
    if not solvable and d <= 6:
        Qg = quotient(G, core_o2(G)).group
        socle_order = normal_subgroups_and_socle(Qg)[1].order
        if not allowed_socle_order(socle_order):
            reasons.append(f"socle of G/O2 has order {socle_order}")
    ok = not reasons
    details = "; ".join(reasons) if reasons else f"delta_count {d}, solvable {solvable}, |pi| {pi}" + (
        f", socle of G/O2 order {socle_order}" if socle_order else "")
    return _result(name, ok, G, details, delta_count=d, pi=pi, socle_order=socle_order)


def check_observation_quaternion(n_max: int) -> CheckResult:
    """For each Q_{2^n}, 3 <= n <= n_max: nontrivial normal K with noncyclic quotient is cyclic."""
    name = "observation_quaternion"
    if n_max < 3:
        raise InvalidRange(f"n_max must be at least 3, got {n_max}")
    checked = 0
    for n in range(3, n_max + 1):
        G = make_family("quaternion", 2**n)
        for K in normal_subgroups(G):
            if K.order == 1:
                continue
            Qg = quotient(G, K).group
            if recognize_shape(Qg).kind == "cyclic":
                continue
            checked += 1
            if recognize_shape(subgroup_table(G, K)).kind != "cyclic":
                return CheckResult(name, FAIL, {"group": f"quaternion:{2**n}", "normal_subgroup": K.members.tolist()},
                                   f"non-cyclic normal subgroup of order {K.order} with noncyclic quotient")
    return CheckResult(name, PASS, None, f"{checked} normal subgroups with noncyclic quotient, all cyclic",
                       {"checked": checked})


def _is_power_of_two(m: int) -> bool:
    return m >= 1 and m & (m - 1) == 0


def _odd_prime_power(m: int) -> bool:
    pp = _is_prime_power(m)
    return bool(pp) and pp[0] > 2


def lemma_scans(m_max: int, p_max: int) -> tuple[CheckResult, CheckResult, CheckResult]:
    """Brute-force scans of the three elementary number-theory lemmas."""
    if m_max < 2 or p_max < 5:
        raise InvalidRange(f"need m_max >= 2 and p_max >= 5, got {m_max}, {p_max}")
    sols = sorted(m for m in range(2, m_max + 1) if isprime(2**m + 1) and isprime(2 ** (m - 1) + 1))
    a = CheckResult("lemma_fermat_pair", PASS if sols == [2] else FAIL,
                    None if sols == [2] else {"solutions": sols}, f"m <= {m_max}: solutions {sols}",
                    {"solutions": sols})

    bad = []
    first, second = [], []
    for p in primerange(5, p_max + 1):
        p = int(p)
        sq = p * p
        if _is_power_of_two(sq - 1) or _is_power_of_two(sq + 1):
            bad.append(p)
        if _is_power_of_two(p + 1) and _odd_prime_power((p - 1) // 2):
            first.append(p)
        if _is_power_of_two(p - 1) and _odd_prime_power((p + 1) // 2):
            second.append(p)
    b = CheckResult("lemma_square_pm_one", PASS if not bad else FAIL, {"counterexamples": bad} if bad else None,
                    f"primes 5..{p_max}: {len(bad)} counterexamples", {"counterexamples": bad})
    ok = first == [7] and second == [5, 17]
    c = CheckResult("lemma_mersenne_fermat", PASS if ok else FAIL,
                    None if ok else {"first": first, "second": second},
                    f"primes 5..{p_max}: first clause {first}, second clause {second}",
                    {"first": first, "second": second})
    return a, b, c


ALL_GROUP_CHECKS = (
    check_empty_delta,
    check_main_theorem,
    check_pi_plus_one,
    check_solvable_bound,
    check_small_delta,
)


def run_group_checks(G: GroupTable) -> list[CheckResult]:
    return [check(G) for check in ALL_GROUP_CHECKS]

