"""Inequality bookkeeping for quasi-isolated blocks.

A ledger file lists blocks with the data needed to test c(B) < l^s(B):
the contributions to c(B), the shape of the torus Z(L)^F bounding s(B) from
below, and whether the inequality is expected to follow. Separate rows feed
the E7 defect-group table.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Mapping, Sequence

import yaml

from .generic_order import (
    BAD_PRIMES,
    EllProfile,
    OrderError,
    Valuation,
    compute_e,
    ell_valuation,
    generic_order_of,
    padic_valuation,
    torus_sectional_rank,
)
from .rootsys import RootDatum, build_root_datum
from .torsion import (
    DEFAULT_MAX_ORDER,
    CentralizerDatum,
    canonical_class,
    enumerate_quasi_isolated,
)
from .unipotent import SeriesSizeQuery, UnipotentCountTable, UnipotentError, load_table, series_size

__all__ = [
    "LedgerError",
    "BlockRecord",
    "DefectRow",
    "InequalityReport",
    "BoundTerm",
    "BrauerCountBound",
    "LedgerReport",
    "brauer_count_bound",
    "malle_robinson_check",
    "defect_table_E7",
    "load_ledger",
    "run_ledger",
    "default_ledger_path",
    "LEDGER_SCHEMA",
    "REPORT_SCHEMA",
]

LEDGER_SCHEMA = "qiblocks-ledger/1"
REPORT_SCHEMA = "qiblocks-report/1"

VERDICTS = ("holds", "holds-strictly", "undecided")
EXPECTATIONS = ("holds", "open")


class LedgerError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# ---------------------------------------------------------------- Brauer character bound


@dataclass(frozen=True)
class BoundTerm:
    type_string: str
    order: int
    a_s_order: int
    size: int | None
    point: str


@dataclass(frozen=True)
class BrauerCountBound:
    """Upper bound on the number of Brauer characters in E_l(G, s).

    ``case`` is 'multiplier' (multiplier * |E(s)|) or 'sum'
    (|E(s)| + sum of |E(st)| over ``terms``). ``total`` is None when some
    series size needs a disconnected-centralizer convention that was not given.
    """

    group: str
    ell: int
    s_type: str
    s_order: int
    case: str
    multiplier: int
    base_size: int | None
    terms: tuple[BoundTerm, ...]

    @property
    def total(self) -> int | None:
        sizes = [self.base_size] + [t.size for t in self.terms]
        if any(v is None for v in sizes):
            return None
        if self.case == "multiplier":
            return self.multiplier * self.base_size
        return sum(sizes)

    @property
    def term_types(self) -> tuple[str, ...]:
        return tuple(t.type_string for t in self.terms)


_MULTIPLIER_CASES = {("E6", 3, "A5+A1"): 3, ("E7", 2, "A5+A2"): 2}


@lru_cache(maxsize=None)
def _inventory(label: str, max_order: int):
    return enumerate_quasi_isolated(build_root_datum(label), max_order).classes


def _size_of(cent: CentralizerDatum, table: UnipotentCountTable | None, convention: str | None) -> int | None:
    query = SeriesSizeQuery(cent.type_string, component_order=cent.a_s_order, convention=convention)
    try:
        return series_size(query, table)
    except UnipotentError:
        if cent.a_s_order > 1 and convention is None:
            return None
        raise


def _ell_prime_part_exponent(order: int, s_order: int, ell: int) -> int | None:
    """a with z^a the l'-part of z, or None if order/s_order is not a positive power of l."""
    ratio, rem = divmod(order, s_order)
    if rem or ratio == 1:
        return None
    if ell ** padic_valuation(ratio, ell) != ratio or math.gcd(s_order, ell) != 1:
        return None
    # a = 1 mod s_order, a = 0 mod ratio
    return ratio * pow(ratio, -1, s_order) if s_order > 1 else ratio


def brauer_count_bound(
    entry: CentralizerDatum,
    ell: int,
    datum: RootDatum,
    table: UnipotentCountTable | None = None,
    *,
    convention: str | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
) -> BrauerCountBound:
    """Select the bound on l_s for a quasi-isolated l'-element s.

    In the sum case t runs over l-elements with st quasi-isolated whose
    centralizer is disconnected or has a component not of type A. Classes
    of st are found among the quasi-isolated classes of order o(s) * l^j
    whose l'-part is conjugate to s.
    """
    if not entry.quasi_isolated:
        raise OrderError(f"{entry.point} is not quasi-isolated")
    if entry.order % ell == 0:
        raise OrderError(f"order {entry.order} of s is divisible by l = {ell}")
    label = datum.label
    base = _size_of(entry, table, convention)
    mult = _MULTIPLIER_CASES.get((label, ell, entry.type_string)) if entry.connected else None
    if mult is not None:
        return BrauerCountBound(label, ell, entry.type_string, entry.order, "multiplier", mult, base, ())
    s_key = canonical_class(entry.point.coords, datum).coords
    terms = []
    for z in _inventory(label, max_order):
        a = _ell_prime_part_exponent(z.order, entry.order, ell)
        if a is None:
            continue
        if canonical_class(z.point.scaled(a), datum).coords != s_key:
            continue
        if z.connected and z.phi_s.is_type_a:
            continue
        terms.append(BoundTerm(z.type_string, z.order, z.a_s_order, _size_of(z, table, convention), str(z.point)))
    return BrauerCountBound(label, ell, entry.type_string, entry.order, "sum", 1, base, tuple(terms))


# ---------------------------------------------------------------- ledger rows


@dataclass(frozen=True)
class BlockRecord:
    block_id: str
    group: str
    ell: int
    e: int
    series_label: str = ""
    levi_center_shape: str | None = None
    rank_bound: int | None = None
    rank_offset: int = 0
    relative_weyl: Mapping[str, int] = field(default_factory=dict)
    c_terms: tuple[tuple[str, int], ...] = ()
    expect: str = "holds"
    note: str = ""
    line: int | None = None


@dataclass(frozen=True)
class InequalityReport:
    block_id: str
    c_value: int | None
    rank_bound: int | None
    threshold: int | None
    verdict: str
    expect: str
    notes: tuple[str, ...] = ()

    @property
    def failed(self) -> bool:
        return self.expect == "holds" and self.verdict == "undecided"


def malle_robinson_check(record: BlockRecord, sink: list | None = None) -> InequalityReport:
    """Test c(B) < l^(rank bound); missing data or c(B) above the threshold gives 'undecided'."""
    notes: list[str] = []
    c_value = sum(n for _, n in record.c_terms) if record.c_terms else None
    if c_value is None:
        notes.append("no c(B) contributions recorded")
    rank = record.rank_bound
    if rank is None and record.levi_center_shape:
        try:
            rank = torus_sectional_rank(record.levi_center_shape, EllProfile(record.ell, record.e))
        except OrderError as exc:
            notes.append(str(exc))
    if rank is None:
        notes.append("no lower bound on the sectional rank")
    threshold = None
    if rank is not None:
        rank += record.rank_offset
        threshold = record.ell**rank
    if c_value is None or threshold is None:
        verdict = "undecided"
    elif c_value < threshold:
        verdict = "holds-strictly"
    elif c_value == threshold:
        verdict = "holds"
    else:
        verdict = "undecided"
        notes.append(f"c(B) = {c_value} exceeds {record.ell}^{rank} = {threshold}; this bound does not decide the block")
    if record.note:
        notes.append(record.note)
    report = InequalityReport(record.block_id, c_value, rank, threshold, verdict, record.expect, tuple(notes))
    if sink is not None:
        sink.append(report)
    return report


# ---------------------------------------------------------------- E7 defect table


@dataclass(frozen=True)
class DefectRow:
    block_id: str
    defect: Valuation
    cofactor: Valuation
    expected_defect: str | None = None
    expected_cofactor: str | None = None

    @property
    def matches(self) -> bool:
        return (self.expected_defect in (None, self.defect.render())) and (
            self.expected_cofactor in (None, self.cofactor.render())
        )


def defect_table_E7(rows: Sequence[BlockRecord], q: int | None = None, expected: Mapping[str, tuple[str, str]] | None = None) -> list[DefectRow]:
    """|D| = |Z(L)_3| * |W_G(L, lambda)|_3 and the cofactor |G|_3 / |D| for E7 at l = 3, e = 1."""
    profile = compute_e(3, q) if q is not None else EllProfile(3, 1)
    if profile.e != 1:
        raise OrderError(f"q = {q} has e = {profile.e}; the E7 defect table needs e = 1")
    group = ell_valuation(generic_order_of("E7"), profile)
    out = []
    for rec in rows:
        if (rec.group, rec.ell, rec.e) != ("E7", 3, 1):
            raise LedgerError(f"{rec.block_id}: defect rows must be E7 with l = 3, e = 1", rec.line)
        if not rec.levi_center_shape or "ell_part" not in rec.relative_weyl:
            raise LedgerError(f"{rec.block_id}: needs levi_center_shape and relative_weyl.ell_part", rec.line)
        torus = torus_sectional_rank(rec.levi_center_shape, profile)
        w = padic_valuation(rec.relative_weyl["ell_part"], 3)
        defect = Valuation(w, torus, 3, 1)
        cofactor = group / defect
        if not cofactor.is_integral:
            raise LedgerError(f"{rec.block_id}: |D| exceeds |G|_3", rec.line)
        exp = (expected or {}).get(rec.block_id, (None, None))
        out.append(DefectRow(rec.block_id, defect, cofactor, exp[0], exp[1]))
    return out


# ---------------------------------------------------------------- file handling


def default_ledger_path() -> Path:
    return Path(__file__).parent / "data" / "ledger.yaml"


_BLOCK_FIELDS = {
    "block_id", "group", "ell", "e", "series_label", "levi_center_shape", "rank_bound",
    "rank_offset", "relative_weyl", "c_terms", "expect", "note", "provenance",
    "expected_defect", "expected_cofactor",
}


def _record_from(raw: Any, line: int, table: UnipotentCountTable | None) -> tuple[BlockRecord, tuple[str, str]]:
    if not isinstance(raw, dict):
        raise LedgerError("row must be a mapping", line)
    unknown = set(raw) - _BLOCK_FIELDS
    if unknown:
        raise LedgerError(f"unknown fields {sorted(unknown)}", line)
    for key in ("block_id", "group", "ell", "e"):
        if key not in raw:
            raise LedgerError(f"missing field {key!r}", line)
    ell = raw["ell"]
    if not isinstance(ell, int) or ell not in BAD_PRIMES.get(raw["group"], ()):
        raise LedgerError(f"ell = {ell!r} is not a bad prime for {raw['group']!r}", line)
    expect = raw.get("expect", "holds")
    if expect not in EXPECTATIONS:
        raise LedgerError(f"expect must be one of {EXPECTATIONS}", line)
    terms = []
    for term in raw.get("c_terms") or []:
        if not isinstance(term, dict) or "series" not in term:
            raise LedgerError("each c_terms entry needs a 'series'", line)
        count = term.get("count")
        if count is None:
            try:
                count = series_size(SeriesSizeQuery(str(term["series"])), table)
            except UnipotentError as exc:
                raise LedgerError(str(exc), line) from None
        if not isinstance(count, int) or count < 0:
            raise LedgerError(f"bad count {count!r}", line)
        terms.append((str(term["series"]), count))
    rec = BlockRecord(
        block_id=str(raw["block_id"]),
        group=str(raw["group"]),
        ell=ell,
        e=int(raw["e"]),
        series_label=str(raw.get("series_label", "")),
        levi_center_shape=raw.get("levi_center_shape"),
        rank_bound=raw.get("rank_bound"),
        rank_offset=int(raw.get("rank_offset", 0)),
        relative_weyl=dict(raw.get("relative_weyl") or {}),
        c_terms=tuple(terms),
        expect=expect,
        note=str(raw.get("note", "")),
        line=line,
    )
    return rec, (raw.get("expected_defect"), raw.get("expected_cofactor"))


@dataclass(frozen=True)
class Ledger:
    blocks: tuple[BlockRecord, ...]
    defect_rows: tuple[BlockRecord, ...]
    defect_expected: Mapping[str, tuple[str, str]]
    source: str


def load_ledger(path: str | Path, table: UnipotentCountTable | None = None) -> Ledger:
    """Parse a ledger file; errors carry the 1-based line number."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise LedgerError(f"{path}: {getattr(exc, 'problem', exc)}", mark.line + 1 if mark else None) from None
    if data is None:
        return Ledger((), (), {}, str(path))
    if not isinstance(data, dict):
        raise LedgerError(f"{path}: top level must be a mapping", 1)
    if data.get("schema", LEDGER_SCHEMA) != LEDGER_SCHEMA:
        raise LedgerError(f"{path}: unsupported schema {data.get('schema')!r}", 1)
    lines = {}
    for key_node, value_node in node.value:
        if isinstance(value_node, yaml.SequenceNode):
            lines[key_node.value] = [item.start_mark.line + 1 for item in value_node.value]

    def section(name):
        rows = data.get(name) or []
        if not isinstance(rows, list):
            raise LedgerError(f"{name} must be a list", 1)
        return [_record_from(r, ln, table) for r, ln in zip(rows, lines.get(name, []))]

    blocks = section("blocks")
    defects = section("defect_rows")
    seen: set[str] = set()
    for rec, _ in blocks + defects:
        if rec.block_id in seen:
            raise LedgerError(f"duplicate block_id {rec.block_id}", rec.line)
        seen.add(rec.block_id)
    return Ledger(
        tuple(r for r, _ in blocks),
        tuple(r for r, _ in defects),
        {r.block_id: exp for r, exp in defects},
        str(path),
    )


@dataclass(frozen=True)
class LedgerReport:
    source: str
    table_checksum: str
    reports: tuple[InequalityReport, ...]
    defect_rows: tuple[DefectRow, ...]

    @property
    def failures(self) -> list[str]:
        bad = [r.block_id for r in self.reports if r.failed]
        bad += [d.block_id for d in self.defect_rows if not d.matches]
        return bad

    @property
    def undecided(self) -> list[str]:
        return [r.block_id for r in self.reports if r.verdict == "undecided"]

    def to_structured(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "ledger": Path(self.source).name,
            "unipotent_table_sha256": self.table_checksum,
            "rows": [asdict(r) for r in self.reports],
            "defect_rows": [
                {
                    "block_id": d.block_id,
                    "defect": d.defect.render(),
                    "cofactor": d.cofactor.render(),
                    "matches": d.matches,
                }
                for d in self.defect_rows
            ],
            "failures": self.failures,
            "undecided": self.undecided,
        }

    def render_json(self) -> str:
        return json.dumps(self.to_structured(), indent=2, ensure_ascii=False, sort_keys=True) + "\n"

    def render_text(self) -> str:
        out = [
            f"ledger: {Path(self.source).name}",
            f"unipotent table sha256: {self.table_checksum}",
        ]
        if self.reports:
            out.append(f"{'block':<8} {'c(B)':>6} {'rank':>5} {'threshold':>10}  verdict")
        for r in self.reports:
            fmt = lambda v: "-" if v is None else str(v)  # noqa: E731
            out.append(f"{r.block_id:<8} {fmt(r.c_value):>6} {fmt(r.rank_bound):>5} {fmt(r.threshold):>10}  {r.verdict}")
            out.extend(f"    note: {n}" for n in r.notes)
        if self.defect_rows:
            out.append(f"{'block':<8} {'|D|':<18} |G|_3/|D|")
            for d in self.defect_rows:
                flag = "" if d.matches else "  MISMATCH"
                out.append(f"{d.block_id:<8} {d.defect.render():<18} {d.cofactor.render()}{flag}")
        out.append(f"failures: {len(self.failures)}  undecided: {len(self.undecided)}")
        return "\n".join(out) + "\n"


def run_ledger(path: str | Path | None = None, table: UnipotentCountTable | None = None) -> LedgerReport:
    """Check every row of a ledger file; rows are reported in block_id order."""
    table = table or load_table()
    ledger = load_ledger(path or default_ledger_path(), table)
    sink: list[InequalityReport] = []
    for rec in sorted(ledger.blocks, key=lambda r: _block_sort_key(r.block_id)):
        malle_robinson_check(rec, sink)
    rows = sorted(ledger.defect_rows, key=lambda r: _block_sort_key(r.block_id))
    defects = defect_table_E7(rows, expected=ledger.defect_expected) if rows else []
    return LedgerReport(ledger.source, table.checksum, tuple(sink), tuple(defects))


def _block_sort_key(block_id: str):
    group, _, num = block_id.partition(":")
    digits = "".join(ch for ch in num if ch.isdigit())
    return (group, int(digits) if digits else 0, num)
