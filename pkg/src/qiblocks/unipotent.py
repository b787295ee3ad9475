"""Numbers of unipotent characters and sizes of Lusztig series.

Classical types are counted by enumerating partitions (type A) and
Lusztig symbols (types B, C, D); exceptional types come from a checksummed
data file shipped with the package.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator

__all__ = [
    "UnipotentError",
    "UnipotentCountTable",
    "SeriesSizeQuery",
    "partitions",
    "partition_count",
    "bipartition_count",
    "symbols",
    "count_unipotent",
    "series_size",
    "load_table",
    "parse_factor",
    "CONVENTIONS",
]

CONVENTIONS = ("explicit", "upper-bound")


class UnipotentError(ValueError):
    pass


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    """p(n) by Euler's pentagonal number recurrence."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total, k = 0, 1
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 > n:
            break
        sign = 1 if k % 2 else -1
        total += sign * partition_count(n - g1)
        g2 = k * (3 * k + 1) // 2
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total


def bipartition_count(n: int) -> int:
    return sum(partition_count(k) * partition_count(n - k) for k in range(n + 1))


Symbol = tuple[tuple[int, ...], tuple[int, ...]]


def _reduce_symbol(top: tuple[int, ...], bottom: tuple[int, ...]) -> Symbol:
    while top and bottom and top[0] == 0 and bottom[0] == 0:
        top = tuple(v - 1 for v in top[1:])
        bottom = tuple(v - 1 for v in bottom[1:])
    return top, bottom


def _beta_set(parts: tuple[int, ...], length: int) -> tuple[int, ...]:
    padded = sorted(parts + (0,) * (length - len(parts)))
    return tuple(v + i for i, v in enumerate(padded))


def symbols(rank: int, defect: int) -> list[Symbol]:
    """Reduced symbols (top, bottom) of the given rank and defect |top| - |bottom|.

    Built from bipartitions of rank - floor(defect^2 / 4). For defect 0 the
    pair is unordered and each symbol is listed once (top <= bottom).
    """
    if defect < 0:
        raise UnipotentError("defect must be non-negative")
    core = rank - defect * defect // 4
    if core < 0:
        return []
    out = set()
    for k in range(core + 1):
        for alpha in partitions(k):
            for beta in partitions(core - k):
                m = max(len(alpha) - defect, len(beta), 0)
                top = _beta_set(alpha, m + defect)
                bottom = _beta_set(beta, m)
                sym = _reduce_symbol(top, bottom)
                if defect == 0:
                    sym = tuple(sorted(sym))
                out.add(sym)
    return sorted(out)


def symbol_rank(sym: Symbol) -> int:
    top, bottom = sym
    size = len(top) + len(bottom)
    return sum(top) + sum(bottom) - (size - 1) ** 2 // 4


def _classical_count(letter: str, twist: str, n: int) -> int:
    if letter == "A":
        if twist not in ("", "2"):
            raise UnipotentError(f"unsupported twist {twist!r} for type A")
        return partition_count(n + 1)
    if letter in "BC":
        if twist:
            raise UnipotentError(f"unsupported twist {twist!r} for type {letter}")
        return sum(len(symbols(n, d)) for d in range(1, 2 * n + 2, 2))
    if letter == "D":
        if twist == "":
            total = 0
            for d in range(0, 2 * n + 1, 4):
                syms = symbols(n, d)
                total += len(syms)
                if d == 0:
                    total += sum(1 for top, bottom in syms if top == bottom)
            return total
        if twist == "2":
            return sum(len(symbols(n, d)) for d in range(2, 2 * n + 1, 4))
    raise UnipotentError(f"unsupported classical factor {twist}{letter}{n}")


def _data_path() -> Path:
    return Path(str(resources.files("qiblocks") / "data" / "unipotent_counts.txt"))


@dataclass(frozen=True)
class UnipotentCountTable:
    """Exceptional unipotent counts keyed by (label, twist), plus the file checksum."""

    exceptional: tuple[tuple[tuple[str, str], int], ...]
    checksum: str
    source: str

    def lookup(self, label: str, twist: str) -> int:
        for key, count in self.exceptional:
            if key == (label, twist):
                return count
        raise UnipotentError(f"no unipotent count for {twist}{label} in {self.source}")


def load_table(path: str | Path | None = None) -> UnipotentCountTable:
    """Read the exceptional-count data file and verify its sha256 header."""
    path = Path(path) if path is not None else _data_path()
    declared = None
    records: list[str] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = re.match(r"#\s*sha256:\s*([0-9a-f]{64})", line)
            if m:
                declared = m.group(1)
            continue
        if len(line.split()) != 3:
            raise UnipotentError(f"{path}:{lineno}: expected '<type> <twist> <count>'")
        records.append(" ".join(line.split()))
    digest = hashlib.sha256(("\n".join(records) + "\n").encode()).hexdigest()
    if declared is None:
        raise UnipotentError(f"{path}: missing sha256 header")
    if declared != digest:
        raise UnipotentError(f"{path}: checksum mismatch (header {declared}, content {digest})")
    entries = []
    for rec in records:
        label, twist, count = rec.split()
        entries.append(((label, "" if twist == "-" else twist), int(count)))
    return UnipotentCountTable(tuple(entries), digest, str(path))


def count_unipotent(letter: str, twist: str = "", rank: int = 0, table: UnipotentCountTable | None = None) -> int:
    """Number of unipotent characters of one simple factor, e.g. ('B', '', 2) -> 6."""
    twist = str(twist or "")
    if letter == "A" and rank == 0:
        return 1
    if rank < 1:
        raise UnipotentError(f"bad rank {rank}")
    label = f"{letter}{rank}"
    if letter in "EFG" or (letter == "D" and twist == "3"):
        return (table or load_table()).lookup(label, twist)
    return _classical_count(letter, twist, rank)


_FACTOR = re.compile(r"(?P<twist>[23]?)(?P<letter>[A-G])(?P<rank>\d+)(?:\(q(?:\^(?P<field>\d+))?\))?")


def parse_factor(token: str) -> tuple[str, str, int] | None:
    """'2A5' -> ('A', '2', 5); 'A1(q^3)' -> ('A', '', 1); torus tokens -> None."""
    token = token.strip()
    if re.fullmatch(r"T\d*|(?:Φ|Phi)\d+(?:\^\d+)?|\d+", token):
        return None
    m = _FACTOR.fullmatch(token)
    if not m:
        raise UnipotentError(f"cannot parse centralizer factor {token!r}")
    return m.group("letter"), m.group("twist"), int(m.group("rank"))


@dataclass(frozen=True)
class SeriesSizeQuery:
    """A centralizer C(s) given as factors joined by '+' or '.'.

    Factors carry optional twist prefixes ('2A5', '3D4') and field suffixes
    ('A1(q^3)', counted like A1). Torus factors ('T2', 'Φ3') count 1. A bare
    integer such as the trailing '.3' in 'Φ3.3D4(q).3' is a component-group
    tag and is skipped; the component count goes in ``component_order``.
    A disconnected centralizer needs ``component_order`` and a convention:
    'explicit' takes ``explicit_size`` as given, 'upper-bound' multiplies the
    connected count by the component order.
    """

    centralizer: str
    torus_rank: int = 0
    component_order: int = 1
    convention: str | None = None
    explicit_size: int | None = None

    def factors(self) -> list[tuple[str, str, int]]:
        if self.centralizer.strip() in ("", "T", "1"):
            return []
        tokens = re.split(r"[+.]", self.centralizer.replace(" ", ""))
        return [f for f in (parse_factor(t) for t in tokens if t) if f is not None]


def series_size(query: SeriesSizeQuery, table: UnipotentCountTable | None = None) -> int:
    """|E(G^F, s)| from the unipotent characters of C(s)."""
    connected = math.prod(count_unipotent(l, t, n, table) for l, t, n in query.factors())
    if query.component_order == 1:
        return connected
    if query.convention is None:
        raise UnipotentError(
            f"centralizer {query.centralizer} has {query.component_order} components; "
            f"choose a counting convention from {CONVENTIONS}"
        )
    if query.convention == "explicit":
        if query.explicit_size is None:
            raise UnipotentError("convention 'explicit' needs explicit_size")
        return query.explicit_size
    if query.convention == "upper-bound":
        return connected * query.component_order
    raise UnipotentError(f"unknown convention {query.convention!r}")
