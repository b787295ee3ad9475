"""Finite-order elements of the adjoint torus and their centralizers.

A point x is stored by its coordinates in the fundamental-coweight basis, so
the pairing of simple root i with x is simply ``x[i]`` and the element
exp(2 pi i x) of the adjoint torus has order lcm(denominators of x). The
closed fundamental alcove is {x : x[i] >= 0, sum(marks[i] * x[i]) <= 1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _linalg
from .rootsys import (
    RootDatum,
    Subsystem,
    subsystem_from_roots,
    weyl_order,
)

__all__ = [
    "TorsionError",
    "TorsionPoint",
    "CentralizerDatum",
    "ClassInventory",
    "alcove_reduce",
    "canonical_class",
    "centralizer_of",
    "enumerate_torsion_classes",
    "enumerate_quasi_isolated",
    "minimal_levi_containing",
    "factor_order6",
    "DEFAULT_MAX_ORDER",
]

DEFAULT_MAX_ORDER = 6


class TorsionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TorsionPoint:
    coords: tuple[Fraction, ...]
    order: int

    @classmethod
    def of(cls, coords: Iterable) -> "TorsionPoint":
        c = tuple(Fraction(v) for v in coords)
        return cls(c, _order(c))

    def scaled(self, k: int) -> tuple[Fraction, ...]:
        return tuple(k * v for v in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.coords) + ")"


def _order(coords: Sequence[Fraction]) -> int:
    return math.lcm(*(Fraction(v).denominator for v in coords)) if coords else 1


def _theta_pairing(x: Sequence[Fraction], datum: RootDatum) -> Fraction:
    return sum((m * v for m, v in zip(datum.marks, x)), Fraction(0))


def _reduce(x: Sequence[Fraction], datum: RootDatum) -> tuple[list[Fraction], list[int]]:
    """Move x into the closed alcove; returns the point and the reflection word.

    Word letters are simple-root indices, or -1 for the affine reflection in
    the wall <highest root, x> = 1.
    """
    x = [Fraction(v) for v in x]
    n = datum.rank
    cartan = datum.cartan
    theta = datum.index[datum.highest_root]
    theta_cv = datum.coroot_in_coweights(theta)
    word: list[int] = []
    while True:
        moved = False
        for i in range(n):
            if x[i] < 0:
                xi = x[i]
                for k in range(n):
                    x[k] -= xi * cartan[k][i]
                word.append(i)
                moved = True
                break
        if moved:
            continue
        t = _theta_pairing(x, datum)
        if t > 1:
            shift = t - 1
            for k in range(n):
                x[k] -= shift * theta_cv[k]
            word.append(-1)
            continue
        return x, word


def _word_matrix(word: Sequence[int], datum: RootDatum) -> list[list[int]]:
    theta = datum.index[datum.highest_root]
    m = _linalg.identity(datum.rank)
    for letter in word:
        r = theta if letter == -1 else letter
        m = _linalg.matmul(datum.reflection_matrix(r), m)
    return m


def alcove_reduce(point: Sequence, datum: RootDatum) -> TorsionPoint:
    """Representative of the affine-Weyl orbit (W and coroot translations) in the closed alcove."""
    y, _ = _reduce(point, datum)
    return TorsionPoint.of(y)


def _omega_images(x: Sequence[Fraction], datum: RootDatum):
    """Yield (alcove image, reflection word) of x under each fundamental-group element."""
    for j in (None,) + datum.minuscule:
        shifted = [v + int(j == k) for k, v in enumerate(x)]
        y, word = _reduce(shifted, datum)
        yield y, word


def canonical_class(point: Sequence, datum: RootDatum) -> TorsionPoint:
    """Canonical representative of the conjugacy class in the adjoint group."""
    return TorsionPoint.of(min(tuple(y) for y, _ in _omega_images(alcove_reduce(point, datum).coords, datum)))


@dataclass(frozen=True)
class CentralizerDatum:
    point: TorsionPoint
    phi_s: Subsystem
    a_s_order: int
    isolated: bool
    quasi_isolated: bool
    stabilizer_order: int
    fixed_space: tuple[tuple[Fraction, ...], ...]
    stabilizer_generators: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def order(self) -> int:
        return self.point.order

    @property
    def type_string(self) -> str:
        return self.phi_s.type_string

    @property
    def connected(self) -> bool:
        return self.a_s_order == 1


def centralizer_of(point: TorsionPoint | Sequence, datum: RootDatum) -> CentralizerDatum:
    """Root system, component group and (quasi-)isolation of a torsion point.

    The stabilizer of x in W (modulo the coweight lattice) is generated by the
    reflections of its root subsystem together with the linear parts of the
    fundamental-group elements fixing the alcove point, so it never has to be
    enumerated.
    """
    coords = point.coords if isinstance(point, TorsionPoint) else point
    x = alcove_reduce(coords, datum).coords
    n = datum.rank
    phi = [
        r for r, root in enumerate(datum.roots)
        if sum(c * v for c, v in zip(root, x)).denominator == 1
    ]
    phi_s = subsystem_from_roots(phi, datum)
    gens = [datum.reflection_matrix(b) for b in phi_s.simple_roots]
    a_s = 0
    for y, word in _omega_images(x, datum):
        if tuple(y) == tuple(x):
            a_s += 1
            m = _word_matrix(word, datum)
            if m != _linalg.identity(n):
                gens.append(m)
    eye = _linalg.identity(n)
    rows = [[g[i][j] - eye[i][j] for j in range(n)] for g in gens for i in range(n)]
    fixed = _linalg.nullspace(rows, n) if rows else _linalg.nullspace([], n)
    return CentralizerDatum(
        point=TorsionPoint.of(x),
        phi_s=phi_s,
        a_s_order=a_s,
        isolated=phi_s.rank == n,
        quasi_isolated=not fixed,
        stabilizer_order=weyl_order(phi_s.type_string) * a_s,
        fixed_space=tuple(tuple(v) for v in fixed),
        stabilizer_generators=tuple(tuple(tuple(r) for r in g) for g in gens),
    )


@dataclass(frozen=True)
class ClassInventory:
    group_label: str
    classes: tuple[CentralizerDatum, ...]
    search_order_bound: int

    def rows(self) -> list[tuple[int, str, int, bool]]:
        return [(c.order, c.type_string, c.a_s_order, c.isolated) for c in self.classes]


def _kac_points(datum: RootDatum, m: int):
    """All alcove points with coordinates in (1/m)Z."""
    marks = datum.marks

    def rec(i: int, budget: int, acc: list[int]):
        if i == len(marks):
            yield tuple(Fraction(a, m) for a in acc)
            return
        for a in range(budget // marks[i] + 1):
            acc.append(a)
            yield from rec(i + 1, budget - a * marks[i], acc)
            acc.pop()

    yield from rec(0, m, [])


def _class_sort_key(c: CentralizerDatum):
    return (c.order, not c.isolated, -c.phi_s.rank, c.type_string, c.point.coords)


def enumerate_torsion_classes(datum: RootDatum, max_order: int = DEFAULT_MAX_ORDER) -> list[CentralizerDatum]:
    """Every adjoint conjugacy class of elements of order <= max_order."""
    if max_order < 1:
        raise TorsionError("max_order must be at least 1")
    seen: dict[tuple, CentralizerDatum] = {}
    for m in range(1, max_order + 1):
        for x in _kac_points(datum, m):
            if _order(x) != m:
                continue
            key = canonical_class(x, datum).coords
            if key not in seen:
                seen[key] = centralizer_of(TorsionPoint.of(key), datum)
    return sorted(seen.values(), key=_class_sort_key)


def enumerate_quasi_isolated(datum: RootDatum, max_order: int = DEFAULT_MAX_ORDER) -> ClassInventory:
    """Quasi-isolated classes of the adjoint group of order <= max_order (identity included)."""
    classes = [c for c in enumerate_torsion_classes(datum, max_order) if c.quasi_isolated]
    return ClassInventory(datum.label, tuple(classes), max_order)


def minimal_levi_containing(cent: CentralizerDatum, datum: RootDatum) -> Subsystem:
    """Roots vanishing on the fixed space of the stabilizer of the point."""
    roots = [
        r for r, root in enumerate(datum.roots)
        if all(sum(c * v for c, v in zip(root, f)) == 0 for f in cent.fixed_space)
    ]
    return subsystem_from_roots(roots, datum)


def factor_order6(cent: CentralizerDatum, datum: RootDatum) -> tuple[CentralizerDatum, CentralizerDatum]:
    """Split an order-6 element z into z^3 (order 2) and z^4 (order 3); z^3 z^4 = z."""
    if cent.order != 6:
        raise TorsionError(f"expected an element of order 6, got order {cent.order}")
    if not cent.quasi_isolated:
        raise TorsionError("expected a quasi-isolated element")
    two = centralizer_of(canonical_class(cent.point.scaled(3), datum), datum)
    three = centralizer_of(canonical_class(cent.point.scaled(4), datum), datum)
    return two, three
