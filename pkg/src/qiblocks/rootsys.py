"""Exact root systems, Weyl group action and subsystem classification.

Roots are integer vectors in the simple-root basis, coroots integer vectors
in the simple-coroot basis. Simple roots follow Bourbaki numbering.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from . import _linalg

__all__ = [
    "RootSystemError",
    "RootDatum",
    "Subsystem",
    "LatticeTestResult",
    "build_root_datum",
    "classify_subsystem",
    "subsystem_from_roots",
    "enumerate_levi_subsystems",
    "levi_canonical_key",
    "pseudo_levi_subsystems",
    "derived_simply_connected",
    "weyl_degrees",
    "weyl_order",
    "parse_type_string",
]

EXCEPTIONAL = ("G2", "F4", "E6", "E7", "E8")
MAX_CLASSICAL_RANK = 8
LETTER_ORDER = "ABCDEFG"


class RootSystemError(ValueError):
    """Unsupported Cartan type, or a set of roots that is not a valid base."""


def _parse_label(label: str) -> tuple[str, int]:
    m = re.fullmatch(r"([A-G])(\d+)", label)
    if not m:
        raise RootSystemError(f"unsupported Cartan type {label!r}")
    letter, n = m.group(1), int(m.group(2))
    ok = {
        "A": 1 <= n <= MAX_CLASSICAL_RANK,
        "B": 2 <= n <= MAX_CLASSICAL_RANK,
        "C": 2 <= n <= MAX_CLASSICAL_RANK,
        "D": 4 <= n <= MAX_CLASSICAL_RANK,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }[letter]
    if not ok:
        raise RootSystemError(f"unsupported Cartan type {label!r}")
    return letter, n


def weyl_degrees(letter: str, n: int) -> tuple[int, ...]:
    """Degrees of the basic invariants of the Weyl group of type letter_n."""
    if letter == "A":
        return tuple(range(2, n + 2))
    if letter in "BC":
        return tuple(range(2, 2 * n + 1, 2))
    if letter == "D":
        return tuple(sorted(list(range(2, 2 * n - 1, 2)) + [n]))
    table = {
        ("G", 2): (2, 6),
        ("F", 4): (2, 6, 8, 12),
        ("E", 6): (2, 5, 6, 8, 9, 12),
        ("E", 7): (2, 6, 8, 10, 12, 14, 18),
        ("E", 8): (2, 8, 12, 14, 18, 20, 24, 30),
    }
    try:
        return table[(letter, n)]
    except KeyError:
        raise RootSystemError(f"no Weyl degrees for {letter}{n}") from None


def parse_type_string(type_string: str) -> list[tuple[str, int]]:
    """'A5+A1' -> [('A', 5), ('A', 1)]; 'T' -> []."""
    if type_string in ("T", ""):
        return []
    out = []
    for part in type_string.split("+"):
        m = re.fullmatch(r"([A-G])(\d+)", part.strip())
        if not m:
            raise RootSystemError(f"bad type string {type_string!r}")
        out.append((m.group(1), int(m.group(2))))
    return out


def weyl_order(type_string: str) -> int:
    """Order of the Weyl group of a (possibly reducible) type like 'D4+A1+A1'."""
    return math.prod(math.prod(weyl_degrees(l, n)) for l, n in parse_type_string(type_string))


def _dynkin(letter: str, n: int) -> tuple[list[tuple[int, int]], list[Fraction]]:
    """Edges (0-based) and squared lengths of the simple roots."""
    one, two = Fraction(1), Fraction(2)
    if letter == "A":
        return [(i, i + 1) for i in range(n - 1)], [two] * n
    if letter == "B":
        return [(i, i + 1) for i in range(n - 1)], [two] * (n - 1) + [one]
    if letter == "C":
        return [(i, i + 1) for i in range(n - 1)], [one] * (n - 1) + [two]
    if letter == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        return edges, [two] * n
    if letter == "E":
        edges = [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, n - 1)]
        return edges, [two] * n
    if letter == "F":
        return [(0, 1), (1, 2), (2, 3)], [two, two, one, one]
    if letter == "G":
        return [(0, 1)], [Fraction(2, 3), two]
    raise RootSystemError(letter)


def _cartan_from_dynkin(letter: str, n: int) -> tuple[tuple[int, ...], ...]:
    edges, norms = _dynkin(letter, n)
    # adjacent simple roots: (a_i, a_j) = -|longer|^2 / 2
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = norms[i]
    for i, j in edges:
        gram[i][j] = gram[j][i] = -max(norms[i], norms[j]) / 2
    # cartan[i][j] = <a_i, a_j^vee> = 2 (a_i, a_j) / (a_j, a_j)
    return tuple(
        tuple(int(2 * gram[i][j] / gram[j][j]) for j in range(n)) for i in range(n)
    )


@dataclass(frozen=True)
class RootDatum:
    """A root system in exact integer coordinates.

    ``cartan[i][j]`` is the pairing of simple root i with simple coroot j.
    Roots are indexed with positives first (sorted by height), then their
    negatives in the same order, so root ``r + N`` is ``-root r``.
    """

    label: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    norms: tuple[Fraction, ...] = field(repr=False)

    @cached_property
    def num_positive(self) -> int:
        return len(self.positive_roots)

    @cached_property
    def roots(self) -> tuple[tuple[int, ...], ...]:
        return self.positive_roots + tuple(tuple(-c for c in r) for r in self.positive_roots)

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {r: i for i, r in enumerate(self.roots)}

    @cached_property
    def root_norms(self) -> tuple[Fraction, ...]:
        """Squared length of every root, in root-index order."""
        n = self.rank
        gram = [[self.cartan[i][j] * self.norms[j] / 2 for j in range(n)] for i in range(n)]
        out = []
        for r in self.roots:
            out.append(sum(r[i] * gram[i][j] * r[j] for i in range(n) for j in range(n)))
        return tuple(out)

    @cached_property
    def coroots(self) -> tuple[tuple[int, ...], ...]:
        out = []
        for r, nr in zip(self.roots, self.root_norms):
            out.append(tuple(int(c * self.norms[j] / nr) for j, c in enumerate(r)))
        return tuple(out)

    @cached_property
    def coweight_basis(self) -> tuple[tuple[Fraction, ...], ...]:
        """Row i: the fundamental coweight i in the simple-coroot basis."""
        # simple coroot j in coweight coordinates is column j of the Cartan matrix
        inv = _linalg.inverse([list(row) for row in self.cartan])
        return tuple(tuple(inv[j][i] for j in range(self.rank)) for i in range(self.rank))

    @cached_property
    def highest_root(self) -> tuple[int, ...]:
        return max(self.positive_roots, key=sum)

    @cached_property
    def marks(self) -> tuple[int, ...]:
        """Coefficients of the highest root."""
        return self.highest_root

    @cached_property
    def minuscule(self) -> tuple[int, ...]:
        """Simple-root indices with mark 1 (minuscule coweights)."""
        return tuple(i for i, m in enumerate(self.marks) if m == 1)

    @cached_property
    def fundamental_group_order(self) -> int:
        return abs(round(_det(self.cartan)))

    @cached_property
    def weyl_order(self) -> int:
        return weyl_order(self.label)

    def pairing(self, root: Sequence[int], coroot: Sequence[int]) -> int:
        """<root, coroot> for a root and coroot given in simple coordinates."""
        return sum(
            root[i] * self.cartan[i][j] * coroot[j]
            for i in range(self.rank)
            for j in range(self.rank)
            if root[i] and coroot[j]
        )

    def coroot_in_coweights(self, r: int) -> tuple[int, ...]:
        g = self.coroots[r]
        return tuple(sum(self.cartan[i][j] * g[j] for j in range(self.rank)) for i in range(self.rank))

    def negate(self, r: int) -> int:
        return r + self.num_positive if r < self.num_positive else r - self.num_positive

    def positive_index(self, r: int) -> int:
        return r if r < self.num_positive else r - self.num_positive

    def reflect(self, r: int, by: int) -> int:
        """Index of s_by(root r)."""
        beta = self.roots[r]
        alpha = self.roots[by]
        k = self.pairing(beta, self.coroots[by])
        return self.index[tuple(b - k * a for b, a in zip(beta, alpha))]

    @cached_property
    def simple_reflection_perms(self) -> tuple[tuple[int, ...], ...]:
        """perms[j][r] = index of s_j(root r)."""
        return tuple(
            tuple(self.reflect(r, j) for r in range(len(self.roots))) for j in range(self.rank)
        )

    def reflection_matrix(self, r: int) -> list[list[int]]:
        """Matrix of s_r on coweight coordinates (x -> x - <root, x> coroot)."""
        root = self.roots[r]
        cv = self.coroot_in_coweights(r)
        n = self.rank
        return [[int(i == j) - cv[i] * root[j] for j in range(n)] for i in range(n)]


def _det(m) -> Fraction:
    red = _linalg.to_fractions(m)
    n = len(red)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if red[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            red[c], red[p] = red[p], red[c]
            det = -det
        det *= red[c][c]
        for i in range(c + 1, n):
            f = red[i][c] / red[c][c]
            red[i] = [a - f * b for a, b in zip(red[i], red[c])]
    return det


@lru_cache(maxsize=None)
def build_root_datum(label: str) -> RootDatum:
    """Root datum of an irreducible Cartan type such as 'E7' or 'B3'."""
    letter, n = _parse_label(label)
    cartan = _cartan_from_dynkin(letter, n)
    _, norms = _dynkin(letter, n)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    queue = deque(simple)
    while queue:
        beta = queue.popleft()
        for j in range(n):
            k = sum(beta[i] * cartan[i][j] for i in range(n))
            image = tuple(b - k * int(i == j) for i, b in enumerate(beta))
            if image not in found:
                found.add(image)
                queue.append(image)
    positive = sorted((r for r in found if all(c >= 0 for c in r)), key=lambda r: (sum(r), tuple(-c for c in r)))
    if 2 * len(positive) != len(found):
        raise AssertionError("root closure produced a non-symmetric set")
    return RootDatum(label=label, rank=n, cartan=cartan, positive_roots=tuple(positive), norms=tuple(norms))


@dataclass(frozen=True)
class Subsystem:
    """A root subsystem of an ambient datum, given by a base of root indices."""

    simple_roots: tuple[int, ...]
    type_string: str
    full_roots: frozenset[int]
    components: tuple[tuple[str, int, tuple[int, ...]], ...] = field(default=(), repr=False)

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @property
    def is_type_a(self) -> bool:
        return all(letter == "A" for letter, _, _ in self.components)


@dataclass(frozen=True)
class LatticeTestResult:
    elementary_divisors: tuple[int, ...]
    is_saturated: bool


def _component_type(cm: list[list[int]], norms: list[Fraction]) -> tuple[str, int]:
    n = len(cm)
    bonds = {(i, j): cm[i][j] * cm[j][i] for i in range(n) for j in range(n) if i < j and cm[i][j]}
    if n == 1:
        return "A", 1
    if 3 in bonds.values():
        return "G", 2
    if 2 in bonds.values():
        if n == 2:
            return "B", 2
        deg = [sum(1 for (i, j) in bonds if k in (i, j)) for k in range(n)]
        (i, j), = [e for e, m in bonds.items() if m == 2]
        if n == 4 and deg[i] == 2 and deg[j] == 2:
            return "F", 4
        longest = max(norms)
        short = sum(1 for v in norms if v < longest)
        return ("B", n) if short == 1 else ("C", n)
    deg = [sum(1 for (i, j) in bonds if k in (i, j)) for k in range(n)]
    if max(deg) <= 2:
        return "A", n
    centre = deg.index(3)
    arms = []
    for start in [j for (i, j) in bonds if i == centre] + [i for (i, j) in bonds if j == centre]:
        length, prev, cur = 1, centre, start
        while True:
            nxt = [k for k in range(n) if k not in (prev, cur) and ((min(cur, k), max(cur, k)) in bonds)]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return "D", n
    if arms == [1, 2, 2]:
        return "E", 6
    if arms == [1, 2, 3]:
        return "E", 7
    if arms == [1, 2, 4]:
        return "E", 8
    raise RootSystemError(f"unrecognised Dynkin diagram with arms {arms}")


def _type_key(letter: str, rank: int) -> tuple[int, int]:
    return (-rank, LETTER_ORDER.index(letter))


def _orbit_closure(base: Sequence[int], datum: RootDatum) -> frozenset[int]:
    found = set(base)
    queue = deque(base)
    while queue:
        r = queue.popleft()
        for b in base:
            img = datum.reflect(r, b)
            if img not in found:
                found.add(img)
                queue.append(img)
    return frozenset(found)


def classify_subsystem(base: Sequence[int], datum: RootDatum) -> Subsystem:
    """Type of the subsystem with the given base, plus all of its roots."""
    base = tuple(base)
    if not base:
        return Subsystem((), "T", frozenset(), ())
    if len(set(base)) != len(base) or any(not 0 <= b < len(datum.roots) for b in base):
        raise RootSystemError("base must be distinct root indices")
    if _linalg.rank([datum.roots[b] for b in base]) != len(base):
        raise RootSystemError("base roots are linearly dependent")
    k = len(base)
    cm = [[datum.pairing(datum.roots[base[i]], datum.coroots[base[j]]) for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(k):
            if i != j and (cm[i][j] > 0 or cm[i][j] * cm[j][i] > 3):
                raise RootSystemError("base roots do not form a simple system")
    # connected components of the Dynkin graph
    seen: set[int] = set()
    comps = []
    for start in range(k):
        if start in seen:
            continue
        stack, comp = [start], []
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in range(k):
                if w not in seen and cm[v][w]:
                    seen.add(w)
                    stack.append(w)
        comp.sort()
        sub = [[cm[i][j] for j in comp] for i in comp]
        letter, n = _component_type(sub, [datum.root_norms[base[i]] for i in comp])
        comps.append((letter, n, tuple(base[i] for i in comp)))
    comps.sort(key=lambda c: (_type_key(c[0], c[1]), c[2]))
    type_string = "+".join(f"{l}{n}" for l, n, _ in comps)
    return Subsystem(base, type_string, _orbit_closure(base, datum), tuple(comps))


def subsystem_from_roots(roots: Iterable[int], datum: RootDatum) -> Subsystem:
    """Classify a symmetric set of roots; the base is taken inside the ambient positive system."""
    roots = frozenset(roots)
    pos = sorted(r for r in roots if r < datum.num_positive)
    pos_set = set(pos)
    vectors = {r: datum.roots[r] for r in pos}
    sums = set()
    for a, b in itertools.combinations(pos, 2):
        s = tuple(x + y for x, y in zip(vectors[a], vectors[b]))
        idx = datum.index.get(s)
        if idx is not None and idx in pos_set:
            sums.add(idx)
    base = [r for r in pos if r not in sums]
    sub = classify_subsystem(base, datum)
    if sub.full_roots != roots:
        raise RootSystemError("root set is not a root subsystem")
    return sub


def _standard_levi_roots(datum: RootDatum, subset: Iterable[int]) -> frozenset[int]:
    subset = set(subset)
    pos = {
        r
        for r, vec in enumerate(datum.positive_roots)
        if all(c == 0 or i in subset for i, c in enumerate(vec))
    }
    return frozenset(pos | {datum.negate(r) for r in pos})


def _abs_perms(datum: RootDatum) -> list[list[int]]:
    return [[datum.positive_index(p[r]) for r in range(datum.num_positive)] for p in datum.simple_reflection_perms]


def _walk_orbit(start: frozenset[int], perms: list[list[int]]):
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        yield cur
        for p in perms:
            img = frozenset(p[r] for r in cur)
            if img not in seen:
                seen.add(img)
                queue.append(img)


E8_BUDGET_NOTE = (
    "E8 orbit walks visit every W(E8)-conjugate of each subsystem; "
    "expect several minutes and a few hundred MB of memory"
)


def _check_e8(datum: RootDatum, allow_e8: bool) -> None:
    if datum.label == "E8" and not allow_e8:
        raise RootSystemError(f"E8 orbit walk requires allow_e8=True ({E8_BUDGET_NOTE})")


def levi_canonical_key(sub: Subsystem, datum: RootDatum, *, allow_e8: bool = False) -> tuple[int, ...]:
    """Lexicographically least sorted positive-root tuple in the W-orbit of a subsystem."""
    _check_e8(datum, allow_e8)
    start = frozenset(datum.positive_index(r) for r in sub.full_roots)
    return min(tuple(sorted(s)) for s in _walk_orbit(start, _abs_perms(datum)))


def enumerate_levi_subsystems(datum: RootDatum, *, allow_e8: bool = False) -> list[Subsystem]:
    """One standard parabolic subsystem per W-conjugacy class of Levi subsystems."""
    _check_e8(datum, allow_e8)
    n = datum.rank
    perms = _abs_perms(datum)
    standard: dict[frozenset[int], tuple[int, ...]] = {}
    subsets = [c for k in range(n + 1) for c in itertools.combinations(range(n), k)]
    for subset in subsets:
        roots = _standard_levi_roots(datum, subset)
        standard[frozenset(r for r in roots if r < datum.num_positive)] = subset
    done: set[tuple[int, ...]] = set()
    reps = []
    for subset in subsets:
        if subset in done:
            continue
        start = frozenset(r for r in _standard_levi_roots(datum, subset) if r < datum.num_positive)
        for member in _walk_orbit(start, perms):
            hit = standard.get(member)
            if hit is not None:
                done.add(hit)
        reps.append(classify_subsystem(subset, datum))
    return reps


def is_levi(sub: Subsystem, datum: RootDatum) -> bool:
    """A subsystem is Levi iff it contains every root in its rational span."""
    if not sub.simple_roots:
        return True
    span = [datum.roots[b] for b in sub.simple_roots]
    for r in range(datum.num_positive):
        if r in sub.full_roots:
            continue
        if _linalg.rank(span + [datum.roots[r]]) == len(span):
            return False
    return True


def _highest_in(roots: Iterable[int], datum: RootDatum) -> int:
    return max((r for r in roots if r < datum.num_positive), key=lambda r: sum(datum.roots[r]))


def pseudo_levi_subsystems(datum: RootDatum) -> list[Subsystem]:
    """Subsystems reachable by repeatedly deleting nodes from (extended) Dynkin diagrams.

    One representative per type string, sorted by decreasing rank; the full
    system is included.
    """
    full = subsystem_from_roots(range(len(datum.roots)), datum)
    found = {full.type_string: full}
    queue = deque([full])
    while queue:
        sub = queue.popleft()
        for ci, (_, _, comp_base) in enumerate(sub.components):
            others = [b for cj, c in enumerate(sub.components) if cj != ci for b in c[2]]
            comp_roots = _orbit_closure(comp_base, datum)
            lowest = datum.negate(_highest_in(comp_roots, datum))
            extended = list(comp_base) + [lowest]
            candidates = []
            for drop in comp_base:
                candidates.append([b for b in comp_base if b != drop])
                candidates.append([b for b in extended if b != drop])
            for new_comp in candidates:
                new = classify_subsystem(others + new_comp, datum)
                new = subsystem_from_roots(new.full_roots, datum)
                if new.type_string not in found:
                    found[new.type_string] = new
                    queue.append(new)
    return sorted(found.values(), key=lambda s: (-s.rank, s.type_string))


def derived_simply_connected(levi: Subsystem, datum: RootDatum) -> LatticeTestResult:
    """Saturation of the Levi's coroot lattice inside the coweight lattice.

    The ambient group is adjoint, so its cocharacter lattice is spanned by the
    fundamental coweights; the derived subgroup of the Levi is simply
    connected exactly when the span of its simple coroots is saturated there.
    """
    if not is_levi(levi, datum):
        raise RootSystemError(f"{levi.type_string} is not a Levi subsystem of {datum.label}")
    cols = [datum.coroot_in_coweights(b) for b in levi.simple_roots]
    if not cols:
        return LatticeTestResult((), True)
    rows = [list(r) for r in zip(*cols)]
    divisors = tuple(_linalg.smith_diagonal(rows))
    return LatticeTestResult(divisors, all(d == 1 for d in divisors))
