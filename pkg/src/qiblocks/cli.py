"""Command-line front end: ``qiblocks <subcommand> ...``.

Exit status: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .generic_order import (
    BAD_PRIMES,
    EllProfile,
    OrderError,
    compute_e,
    ell_valuation,
    generic_order_of,
    padic_valuation,
)
from .ledger import LedgerError, default_ledger_path, defect_table_E7, load_ledger, run_ledger, brauer_count_bound
from .rootsys import EXCEPTIONAL, RootSystemError, build_root_datum
from .torsion import DEFAULT_MAX_ORDER, TorsionError, enumerate_quasi_isolated
from .unipotent import CONVENTIONS, SeriesSizeQuery, UnipotentError, load_table, series_size

CLI_SCHEMA = "qiblocks-cli/1"
E8_SWEEP_BUDGET = "E8 sweeps are opt-in (--allow-e8); expected budget: a few seconds of CPU and under 100 MB at max order 6, growing roughly with max_order^8"

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    groups: list[str] = field(default_factory=list)
    ell: int | None = None
    e: int | None = None
    q: list[int] = field(default_factory=list)
    max_order: int = DEFAULT_MAX_ORDER
    ledger: str | None = None
    table: str | None = None
    fmt: str = "text"
    allow_e8: bool = False

    def validate(self) -> None:
        for q in self.q:
            if self.ell is not None and q % self.ell == 0:
                raise UsageError(f"l = {self.ell} divides q = {q}")
        if self.e is not None and self.q:
            for q in self.q:
                got = compute_e(self.ell, q).e
                if got != self.e:
                    raise UsageError(f"q = {q} has e = {got}, not {self.e}")

    def profile(self) -> EllProfile:
        if self.ell is None:
            raise UsageError("--ell is required")
        if self.e is not None:
            return EllProfile(self.ell, self.e)
        if self.q:
            return compute_e(self.ell, self.q[0])
        raise UsageError("give --e or --q to fix e")


def _emit(cfg: RunConfig, text: str, data: dict) -> None:
    if cfg.fmt == "structured":
        payload = {"schema": CLI_SCHEMA, "command": cfg.subcommand, **data}
        sys.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _datum(cfg: RunConfig, label: str):
    if label not in EXCEPTIONAL:
        raise UsageError(f"unknown exceptional group {label!r}; choose from {', '.join(EXCEPTIONAL)}")
    if label == "E8" and not cfg.allow_e8:
        raise UsageError(E8_SWEEP_BUDGET)
    return build_root_datum(label)


def cmd_quasi_isolated(cfg: RunConfig) -> int:
    chunks, data = [], {}
    for label in cfg.groups:
        inv = enumerate_quasi_isolated(_datum(cfg, label), cfg.max_order)
        rows = [c for c in inv.classes if c.order > 1]
        lines = [f"{label}  (orders <= {inv.search_order_bound})", f"{'o(s)':>4}  {'C(s)':<14} {'|A(s)|':>6}  isolated  point"]
        for c in rows:
            lines.append(f"{c.order:>4}  {c.type_string:<14} {c.a_s_order:>6}  {'yes' if c.isolated else 'no':<8}  {c.point}")
        chunks.append("\n".join(lines))
        data[label] = [
            {"order": c.order, "centralizer": c.type_string, "A_s": c.a_s_order, "isolated": c.isolated, "point": str(c.point)}
            for c in rows
        ]
    _emit(cfg, "\n\n".join(chunks), {"groups": data})
    return EXIT_OK


def _split_twist(label: str) -> tuple[str, str]:
    if label[:1] in "23" and len(label) > 1:
        return label[1:], label[0]
    return label, ""


def cmd_order(cfg: RunConfig) -> int:
    lines, data = [], {}
    for label in cfg.groups:
        base, twist = _split_twist(label)
        order = generic_order_of(base, twist)
        entry = {"order": order.render()}
        line = f"|{label}(q)| = {order.render()}"
        if cfg.ell is not None:
            val = ell_valuation(order, cfg.profile())
            entry["ell_part"] = val.render()
            line += f"\n|{label}(q)|_{cfg.ell} = {val.render()}"
            for q in cfg.q:
                entry.setdefault("samples", {})[str(q)] = val.at(q)
                line += f"\n  q = {q}: {val.at(q)}"
        lines.append(line)
        data[label] = entry
    _emit(cfg, "\n".join(lines), {"groups": data})
    return EXIT_OK


def cmd_ell_part(cfg: RunConfig) -> int:
    profile = cfg.profile()
    lines, data = [], {}
    for label in cfg.groups:
        base, twist = _split_twist(label)
        order = generic_order_of(base, twist)
        val = ell_valuation(order, profile)
        entry = {"ell_part": val.render(), "samples": {}}
        lines.append(f"|{label}(q)|_{profile.ell} = {val.render()}  (e = {profile.e})")
        for q in cfg.q:
            exact = order.evaluate(q)
            numeric = profile.ell ** padic_valuation(exact, profile.ell)
            entry["samples"][str(q)] = {"symbolic": val.at(q), "exact": numeric}
            lines.append(f"  q = {q}: symbolic {val.at(q)}, exact {numeric}")
            if val.at(q) != numeric:
                raise OrderError(f"symbolic and exact l-parts differ at q = {q}")
        data[label] = entry
    _emit(cfg, "\n".join(lines), {"ell": profile.ell, "e": profile.e, "groups": data})
    return EXIT_OK


def cmd_series_size(cfg: RunConfig, args) -> int:
    query = SeriesSizeQuery(
        args.centralizer,
        component_order=args.components,
        convention=args.convention,
        explicit_size=args.explicit_size,
    )
    size = series_size(query, load_table(cfg.table))
    _emit(cfg, f"|E(G, s)| for C(s) = {args.centralizer}: {size}", {"centralizer": args.centralizer, "size": size})
    return EXIT_OK


def cmd_bound(cfg: RunConfig, args) -> int:
    table = load_table(cfg.table)
    lines, data = [], []
    for label in cfg.groups:
        datum = _datum(cfg, label)
        ells = [cfg.ell] if cfg.ell is not None else list(BAD_PRIMES[label])
        for ell in ells:
            for c in enumerate_quasi_isolated(datum, cfg.max_order).classes:
                if c.order % ell == 0:
                    continue
                b = brauer_count_bound(c, ell, datum, table, convention=args.convention, max_order=cfg.max_order)
                total = "unresolved" if b.total is None else str(b.total)
                if b.case == "multiplier":
                    desc = f"{b.multiplier} * |E(s)|"
                else:
                    desc = "|E(s)|" + "".join(f" + |E({t.type_string})|" for t in b.terms)
                lines.append(f"{label} l={ell} o(s)={c.order} C(s)={c.type_string}: {desc} = {total}")
                data.append({
                    "group": label, "ell": ell, "order": c.order, "centralizer": c.type_string,
                    "case": b.case, "multiplier": b.multiplier, "base_size": b.base_size,
                    "terms": [{"centralizer": t.type_string, "order": t.order, "A": t.a_s_order, "size": t.size} for t in b.terms],
                    "total": b.total,
                })
    _emit(cfg, "\n".join(lines), {"bounds": data})
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    report = run_ledger(cfg.ledger, load_table(cfg.table))
    if cfg.fmt == "structured":
        sys.stdout.write(report.render_json())
    else:
        sys.stdout.write(report.render_text())
    return EXIT_FAIL if report.failures else EXIT_OK


def cmd_defect_table(cfg: RunConfig) -> int:
    ledger = load_ledger(cfg.ledger or default_ledger_path())
    q = cfg.q[0] if cfg.q else None
    rows = defect_table_E7(ledger.defect_rows, q=q, expected=ledger.defect_expected)
    lines = [f"{'B':<8} {'|D|':<18} |G|_3/|D|"]
    for r in rows:
        lines.append(f"{r.block_id:<8} {r.defect.render():<18} {r.cofactor.render()}" + ("" if r.matches else "  MISMATCH"))
    _emit(cfg, "\n".join(lines), {
        "rows": [{"block_id": r.block_id, "defect": r.defect.render(), "cofactor": r.cofactor.render(), "matches": r.matches} for r in rows]
    })
    return EXIT_OK if all(r.matches for r in rows) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("text", "structured"), default="text")
    common.add_argument("--allow-e8", action="store_true", help="permit E8 sweeps")
    common.add_argument("--ell", type=int)
    common.add_argument("--e", type=int)
    common.add_argument("--q", type=int, action="append", default=[], help="sample prime power (repeatable)")
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    common.add_argument("--table", help="alternative unipotent count data file")

    parser = argparse.ArgumentParser(prog="qiblocks", description="Quasi-isolated blocks of exceptional groups in bad characteristic")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    p = sub.add_parser("quasi-isolated", parents=[common], help="quasi-isolated classes of the adjoint group")
    p.add_argument("groups", nargs="+")
    p = sub.add_parser("order", parents=[common], help="generic order as a cyclotomic product")
    p.add_argument("groups", nargs="+")
    p = sub.add_parser("ell-part", parents=[common], help="symbolic l-part of the generic order")
    p.add_argument("groups", nargs="+")
    p = sub.add_parser("series-size", parents=[common], help="size of a Lusztig series from its centralizer")
    p.add_argument("centralizer")
    p.add_argument("--components", type=int, default=1, help="|A(s)^F|")
    p.add_argument("--convention", choices=CONVENTIONS)
    p.add_argument("--explicit-size", type=int)
    p = sub.add_parser("bound", parents=[common], help="bound on Brauer characters per quasi-isolated class")
    p.add_argument("groups", nargs="+")
    p.add_argument("--convention", choices=CONVENTIONS)
    p = sub.add_parser("check", parents=[common], help="check a block ledger")
    p.add_argument("ledger", nargs="?")
    p = sub.add_parser("defect-table-e7", parents=[common], help="E7 defect orders at l = 3, e = 1")
    p.add_argument("--ledger")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        subcommand=args.subcommand,
        groups=list(getattr(args, "groups", [])),
        ell=args.ell,
        e=args.e,
        q=list(args.q),
        max_order=args.max_order,
        ledger=getattr(args, "ledger", None),
        table=args.table,
        fmt=args.fmt,
        allow_e8=args.allow_e8,
    )
    handlers = {
        "quasi-isolated": lambda: cmd_quasi_isolated(cfg),
        "order": lambda: cmd_order(cfg),
        "ell-part": lambda: cmd_ell_part(cfg),
        "series-size": lambda: cmd_series_size(cfg, args),
        "bound": lambda: cmd_bound(cfg, args),
        "check": lambda: cmd_check(cfg),
        "defect-table-e7": lambda: cmd_defect_table(cfg),
    }
    try:
        cfg.validate()
        return handlers[cfg.subcommand]()
    except (UsageError, LedgerError, OrderError, RootSystemError, TorsionError, UnipotentError, OSError) as exc:
        sys.stderr.write(f"qiblocks: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
