"""Analysis records, the catalogue survey and the verification suite."""

from __future__ import annotations

import csv
import io
import json
import time
from collections import Counter
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field, fields

from . import config
from .catalog import default_catalogue
from .codes import delta
from .core import is_solvable, subgroup_table
from .errors import CapExceeded
from .lattice import core_o2, prime_signature
from .shapes import recognize_shape
from .spec import build, canonical, spec_order
from .theorems import FAIL, CheckResult, label, run_group_checks, sylow2_shape

SCHEMA_VERSION = "1.0"

CSV_COLUMNS = ["spec", "order", "pi", "solvable", "sylow2_shape", "o2_order", "delta_count", "checks_failed"]


@dataclass
class AnalysisRecord:
    spec: str
    order: int
    pi: int
    primes: list
    solvable: bool
    sylow2_shape: str
    o2_order: int
    delta_count: int
    delta_classes: list  # dicts: order, class_size, shape, routes
    checks: list  # dicts: check_name, status, witness, details
    empty_delta_family: bool
    main_equality: bool
    solvable_equality: bool | None
    audit_agree: bool | None = None
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        if self.delta_count != len(self.delta_classes):
            raise ValueError("delta_count must equal the number of listed classes")

    @property
    def checks_failed(self) -> list[str]:
        return [c["check_name"] for c in self.checks if c["status"] == FAIL]

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisRecord":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    @classmethod
    def from_json(cls, text: str) -> "AnalysisRecord":
        return cls.from_dict(json.loads(text))

    def csv_row(self) -> dict:
        row = {c: getattr(self, c) for c in CSV_COLUMNS if c != "checks_failed"}
        row["checks_failed"] = ";".join(self.checks_failed)
        return row


@contextmanager
def cap_override(value: int | None):
    old = config.set_caps(config.caps().with_override(value))
    try:
        yield
    finally:
        config.set_caps(old)


def analyze_group(G, spec: str | None = None, audit: bool = False) -> AnalysisRecord:
    report = delta(G, audit=audit)
    sig = prime_signature(G)
    classes = []
    for c in report.delta_classes:
        H = c.representative
        classes.append({
            "order": H.order,
            "class_size": c.class_size,
            "shape": str(recognize_shape(subgroup_table(G, H))),
            "routes": list(c.routes),
        })
    checks = run_group_checks(G)
    by_name = {r.check_name: r for r in checks}
    main = by_name["main_theorem"]
    bound = by_name["solvable_bound"]
    n = G.order
    composite = n > 1 and len(sig.primes) > 0 and sum(sig.exponents) > 1
    audit_agree = None
    if audit:
        audit_agree = all(info["agree"] for info in report.audit.values())
    return AnalysisRecord(
        spec=spec or label(G),
        order=n,
        pi=len(sig.primes),
        primes=list(sig.primes),
        solvable=is_solvable(G),
        sylow2_shape=str(sylow2_shape(G)),
        o2_order=core_o2(G).order,
        delta_count=report.delta_count,
        delta_classes=classes,
        checks=[r.to_dict() for r in checks],
        empty_delta_family=composite and report.delta_count == 0,
        main_equality=main.status != FAIL and main.data.get("row") is not None,
        solvable_equality=bound.data.get("equality") if bound.status != "not_applicable" else None,
        audit_agree=audit_agree,
    )


def run_analyze(spec: str, audit: bool = False, cap: int | None = None) -> AnalysisRecord:
    """Parse, build and analyze one group. ``ParseError`` and ``CapExceeded`` propagate."""
    text = canonical(spec)
    with cap_override(cap):
        G = build(text)
        return analyze_group(G, text, audit=audit)


# --------------------------------------------------------------------------
# survey


@dataclass
class SurveySummary:
    total: int = 0
    solvable: int = 0
    nonsolvable: int = 0
    main_equality: int = 0
    solvable_equality: int = 0
    check_status: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    interrupted: bool = False


def summarize(records: list[AnalysisRecord], interrupted: bool = False) -> SurveySummary:
    status = Counter()
    failures = []
    for r in records:
        for c in r.checks:
            status[f"{c['check_name']}:{c['status']}"] += 1
            if c["status"] == FAIL:
                failures.append({"spec": r.spec, "check_name": c["check_name"], "witness": c["witness"]})
    return SurveySummary(
        total=len(records),
        solvable=sum(r.solvable for r in records),
        nonsolvable=sum(not r.solvable for r in records),
        main_equality=sum(r.main_equality for r in records),
        solvable_equality=sum(bool(r.solvable_equality) for r in records),
        check_status=dict(sorted(status.items())),
        failures=failures,
        interrupted=interrupted,
    )


def survey_specs(max_order: int) -> list[str]:
    lattice_cap = config.caps().lattice
    if max_order > lattice_cap:
        raise CapExceeded("survey max order", max_order, lattice_cap)
    specs = default_catalogue(max_order)
    return sorted(specs, key=lambda s: (spec_order(s), s))


def _analyze_spec(spec: str) -> AnalysisRecord:
    return analyze_group(build(spec), spec)


def iter_survey(max_order: int, filter_: str | None = None, workers: int = 1):
    """Yield records in (order, spec) order; groups may be analyzed in worker processes."""
    specs = survey_specs(max_order)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            results = pool.map(_analyze_spec, specs, chunksize=8)
            for rec in results:
                if _keep(rec, filter_):
                    yield rec
        return
    for spec in specs:
        rec = _analyze_spec(spec)
        if _keep(rec, filter_):
            yield rec


def _keep(rec: AnalysisRecord, filter_: str | None) -> bool:
    if filter_ == "solvable":
        return rec.solvable
    if filter_ == "nonsolvable":
        return not rec.solvable
    return True


def run_survey(max_order: int, filter_: str | None = None, workers: int = 1):
    records = list(iter_survey(max_order, filter_, workers))
    return records, summarize(records)


# --------------------------------------------------------------------------
# verification suite


@dataclass
class VerifyRow:
    name: str
    status: str
    details: str
    witness: dict | None = None
    seconds: float = 0.0


def _row_from(name: str, res: CheckResult, seconds: float) -> VerifyRow:
    return VerifyRow(name, res.status, res.details, res.witness, round(seconds, 2))


def _sweep(max_order: int, check: str, only_solvable: bool = False, get=build) -> CheckResult:
    from .theorems import ALL_GROUP_CHECKS

    fn = {f.__name__: f for f in ALL_GROUP_CHECKS}[check]
    counts = Counter()
    for spec in default_catalogue(max_order):
        G = get(spec)
        if only_solvable and not is_solvable(G):
            continue
        res = fn(G)
        counts[res.status] += 1
        if res.status == FAIL:
            return res
    return CheckResult(check, "pass", None, f"catalogue <= {max_order}: {dict(counts)}")


def _simple(name: str, ok: bool, details: str, witness=None) -> CheckResult:
    return CheckResult(name, "pass" if ok else FAIL, None if ok else (witness or {"details": details}), details)


def verification_suite(include_stretch: bool = False):
    """Yield (name, thunk) pairs; each thunk returns a CheckResult."""
    from .lattice import maximal_subgroups
    from .theorems import (
        check_observation_quaternion, check_pi_plus_one, check_solvable_bound, lemma_scans, table1_row,
    )

    built = {}

    def get(spec):
        # groups are shared across rows so each lattice is computed once
        if spec not in built:
            built[spec] = build(spec)
        return built[spec]

    def delta_of(spec):
        return delta(get(spec)).delta_count

    def a5():
        d = delta_of("alternating:5")
        return _simple("delta_A5", d == 7, f"delta_count {d}", {"group": "alternating:5", "delta_count": d})

    def sl25():
        G = get("sl2:5")
        rep = delta(G)
        orders = sorted(c.order for c in rep.delta_classes)
        q8 = [c for c in rep.delta_classes if c.order == 8]
        q8_shape = str(recognize_shape(subgroup_table(G, q8[0].representative))) if q8 else None
        ok = orders == [3, 5, 8, 24] and q8_shape == "generalized_quaternion(8)"
        return _simple("delta_SL25", ok, f"class orders {orders}, order-8 class {q8_shape}",
                       {"group": "sl2:5", "orders": orders})

    def cyclic_powers():
        bad = []
        for p, ns in ((3, range(1, 6)), (5, range(1, 4)), (7, range(1, 4))):
            for n in ns:
                d = delta_of(f"cyclic:{p**n}")
                if d != n - 1:
                    bad.append((p, n, d))
        return _simple("delta_cyclic_prime_powers", not bad, f"mismatches {bad}", {"mismatches": bad})

    def table1():
        rows = ["cyclic:9", "cyclic:25", "cyclic:49", "semidirect:cyclic:7:cyclic:3:exp=2",
                "semidirect:cyclic:11:cyclic:5:exp=3", "semidirect:cyclic:3:cyclic:4:exp=2", "cyclic:12",
                "semidirect:cyclic:5:cyclic:8:exp=2", "product:cyclic:5*cyclic:8",
                "product:cyclic:3*quaternion:8", "semidirect:cyclic:5:quaternion:8:exp=1,-1",
                "sl2:3", "binary_octahedral"]
        bad = []
        for s in rows:
            G = get(s)
            d, pi = delta(G).delta_count, len(prime_signature(G).primes)
            row = table1_row(G)
            if d != pi or row is None:
                bad.append({"group": s, "delta_count": d, "pi": pi, "row": row})
        return _simple("table1_rows", not bad, f"{len(rows)} groups, failures {bad}", {"failures": bad})

    def empty_delta():
        found = []
        for s in default_catalogue(200):
            G = get(s)
            n = G.order
            if n > 1 and sum(prime_signature(G).exponents) > 1 and delta(G).delta_count == 0:
                found.append(s)
        res = _sweep(200, "check_empty_delta", get=get)
        return CheckResult("empty_delta", res.status, res.witness, f"{res.details}; empty: {', '.join(found)}")

    def main_sweep():
        return _sweep(200, "check_main_theorem", get=get)

    def solvable_bound():
        z30 = check_solvable_bound(get("cyclic:30"))
        a4 = check_solvable_bound(get("alternating:4"))
        ok = (z30.status == "pass" and z30.data["delta_count"] == 6 and z30.data["equality"]
              and a4.status == "pass" and a4.data["delta_count"] == 3 and not a4.data["equality"])
        if not ok:
            return _simple("solvable_bound", False, f"Z30: {z30.details}; A4: {a4.details}")
        res = _sweep(200, "check_solvable_bound", only_solvable=True, get=get)
        return CheckResult("solvable_bound", res.status, res.witness, f"Z30 and A4 ok; {res.details}")

    def pi_plus_one():
        out = {s: check_pi_plus_one(get(s)) for s in ("cyclic:27", "alternating:4", "sl2:5")}
        bad = {s: r.details for s, r in out.items() if r.status != "pass"}
        return _simple("pi_plus_one_instances", not bad,
                       "; ".join(f"{s}: {r.details}" for s, r in out.items()), {"failures": bad})

    def small_delta():
        return _sweep(200, "check_small_delta", get=get)

    def table2():
        G5 = get("psl2:5")
        shapes = sorted(
            (c.order, str(recognize_shape(subgroup_table(G5, c.representative)))) for c in maximal_subgroups(G5)
        )
        G7 = get("psl2:7")
        orders = sorted(c.order for c in maximal_subgroups(G7))
        a4 = get("alternating:4")
        from .shapes import bounded_isomorphic

        ok5 = [s for _, s in shapes[:2]] == ["dihedral(6)", "dihedral(10)"] and len(shapes) == 3
        if ok5:
            M = [c for c in maximal_subgroups(G5) if c.order == 12][0].representative
            ok5 = bool(bounded_isomorphic(subgroup_table(G5, M), a4))
        ok = ok5 and orders == [21, 24, 24]
        return _simple("table2_maximal", ok, f"PSL(2,5): {shapes}; PSL(2,7) orders {orders}")

    def oracle():
        from .codes import (find_inverse_closed_transversal, is_perfect_code_criterion,
                            is_perfect_code_sylow_reduction, verify_in_cayley)
        from .lattice import all_subgroups

        checked = 0
        for s in default_catalogue(120):
            G = get(s)
            for H in all_subgroups(G):
                a = is_perfect_code_criterion(G, H)
                b = is_perfect_code_sylow_reduction(G, H)
                T = find_inverse_closed_transversal(G, H)
                ok = a == b == (T is not None) and (T is None or verify_in_cayley(G, H, T))
                checked += 1
                if not ok:
                    return _simple("oracle_agreement", False, f"disagreement in {s}",
                                   {"group": s, "subgroup": H.members.tolist()})
        return _simple("oracle_agreement", True, f"{checked} subgroups, all routes agree")

    def lemmas():
        return lemma_scans(60, 10**6)

    suite = [
        ("delta_A5", a5), ("delta_SL25", sl25), ("delta_cyclic_prime_powers", cyclic_powers),
        ("table1_rows", table1), ("empty_delta", empty_delta), ("main_theorem_sweep", main_sweep),
        ("solvable_bound", solvable_bound), ("pi_plus_one_instances", pi_plus_one),
        ("small_delta_sweep", small_delta), ("table2_maximal", table2), ("oracle_agreement", oracle),
        ("lemma_scans", lemmas),
        ("observation_quaternion", lambda: check_observation_quaternion(6)),
    ]
    if include_stretch:
        from .stretch import stretch_check

        suite.append(("stretch_double_cover_pgl2_23", stretch_check))
    return suite


def run_verify(include_stretch: bool = False, on_row=None) -> list[VerifyRow]:
    rows = []
    for name, thunk in verification_suite(include_stretch):
        t = time.time()
        res = thunk()
        results = res if isinstance(res, tuple) else (res,)
        for r in results:
            row_name = name if len(results) == 1 else f"{name}:{r.check_name}"
            row = _row_from(row_name, r, time.time() - t)
            rows.append(row)
            if on_row:
                on_row(row)
    return rows


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def format_record(r: AnalysisRecord) -> str:
    lines = [
        f"group          {r.spec}",
        f"order          {r.order}",
        f"primes         {r.primes} (|pi| = {r.pi})",
        f"solvable       {r.solvable}",
        f"sylow 2        {r.sylow2_shape}",
        f"O2 order       {r.o2_order}",
        f"delta count    {r.delta_count}" + ("  (empty-delta family)" if r.empty_delta_family else ""),
    ]
    if r.delta_classes:
        lines.append("  order  size  shape                         routes")
        for c in r.delta_classes:
            lines.append(f"  {c['order']:>5}  {c['class_size']:>4}  {c['shape']:<28}  {','.join(c['routes'])}")
    if r.audit_agree is not None:
        lines.append(f"audit          routes agree: {r.audit_agree}")
    lines.append("checks")
    for c in r.checks:
        lines.append(f"  {c['check_name']:<16} {c['status']:<15} {c['details']}")
    return "\n".join(lines)


def format_summary(s: SurveySummary) -> str:
    lines = [
        f"groups analyzed        {s.total}" + ("  (interrupted)" if s.interrupted else ""),
        f"solvable / non         {s.solvable} / {s.nonsolvable}",
        f"|Delta| = |pi| cases   {s.main_equality}",
        f"solvable bound equal   {s.solvable_equality}",
        f"check failures         {len(s.failures)}",
    ]
    for f in s.failures:
        lines.append(f"  {f['spec']}: {f['check_name']} {f['witness']}")
    return "\n".join(lines)
