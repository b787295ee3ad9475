"""Generic orders as cyclotomic products, and their l-parts.

A generic order is written q^N * prod Phi_d(q)^a_d (times an optional integer
for component groups). l-parts are kept symbolic: a constant power of l plus
a multiplicity of the q-dependent factor |Phi_e(q)|_l.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import sympy

from .rootsys import parse_type_string, weyl_degrees

__all__ = [
    "OrderError",
    "CycloProduct",
    "EllProfile",
    "Valuation",
    "cyclotomic",
    "factor_cyclotomic",
    "generic_order_of",
    "order_of_type",
    "compute_e",
    "ell_valuation",
    "padic_valuation",
    "torus_sectional_rank",
    "degree_ell_part",
    "BAD_PRIMES",
    "GROUP_DIMENSION",
]

MAX_CYCLOTOMIC = 30

BAD_PRIMES = {"G2": (2, 3), "F4": (2, 3), "E6": (2, 3), "E7": (2, 3), "E8": (2, 3, 5)}
GROUP_DIMENSION = {"G2": 14, "F4": 52, "E6": 78, "E7": 133, "E8": 248}


class OrderError(ValueError):
    pass


Poly = tuple[int, ...]  # coefficients, constant term first


def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _divmod(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    """Division by a monic integer polynomial."""
    if b[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(a)
    quot = [0] * max(len(a) - len(b) + 1, 1)
    for k in range(len(a) - len(b), -1, -1):
        c = rem[k + len(b) - 1]
        if c:
            quot[k] = c
            for j, y in enumerate(b):
                rem[k + j] -= c * y
    return _trim(quot), _trim(rem[: len(b) - 1] or [0])


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> Poly:
    """Coefficients of the d-th cyclotomic polynomial."""
    p = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            p, r = _divmod(p, cyclotomic(e))
            assert r == [0]
    return tuple(p)


def _eval(p: Sequence[int], q: int) -> int:
    v = 0
    for c in reversed(p):
        v = v * q + c
    return v


def factor_cyclotomic(poly: Sequence[int], max_index: int = MAX_CYCLOTOMIC) -> tuple[int, dict[int, int]]:
    """Write poly = c * q^N * prod Phi_d^a_d by trial division; returns (N, {d: a_d}).

    Raises OrderError when a non-cyclotomic factor remains.
    """
    p = _trim(list(poly))
    n = 0
    while len(p) > 1 and p[0] == 0:
        p.pop(0)
        n += 1
    exps: dict[int, int] = {}
    for d in range(max_index, 0, -1):
        phi = cyclotomic(d)
        while len(p) >= len(phi):
            quot, rem = _divmod(p, phi)
            if rem != [0]:
                break
            p = quot
            exps[d] = exps.get(d, 0) + 1
    if len(p) != 1 or p[0] != 1:
        raise OrderError(f"polynomial does not factor into cyclotomics (leftover {p})")
    return n, dict(sorted(exps.items()))


def _phi_label(d: int) -> str:
    return f"Φ{d}"


@dataclass(frozen=True)
class CycloProduct:
    """q^q_power * prod Phi_d(q)^a_d * scalar."""

    q_power: int
    factors: tuple[tuple[int, int], ...]
    scalar: int = 1

    @classmethod
    def make(cls, q_power: int = 0, factors: Mapping[int, int] | None = None, scalar: int = 1) -> "CycloProduct":
        f = {d: a for d, a in (factors or {}).items() if a}
        if any(a < 0 for a in f.values()) or q_power < 0 or scalar < 1:
            raise OrderError("negative exponent in cyclotomic product")
        return cls(q_power, tuple(sorted(f.items())), scalar)

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self.factors)

    def degree(self) -> int:
        return self.q_power + sum(a * sympy.totient(d) for d, a in self.factors)

    def __mul__(self, other: "CycloProduct") -> "CycloProduct":
        f = self.exponents
        for d, a in other.factors:
            f[d] = f.get(d, 0) + a
        return CycloProduct.make(self.q_power + other.q_power, f, self.scalar * other.scalar)

    def __pow__(self, k: int) -> "CycloProduct":
        return CycloProduct.make(self.q_power * k, {d: a * k for d, a in self.factors}, self.scalar**k)

    def evaluate(self, q: int) -> int:
        v = self.scalar * q**self.q_power
        for d, a in self.factors:
            v *= _eval(cyclotomic(d), q) ** a
        return v

    def render(self) -> str:
        parts = []
        if self.q_power:
            parts.append("q" if self.q_power == 1 else f"q^{self.q_power}")
        for d, a in self.factors:
            parts.append(_phi_label(d) if a == 1 else f"{_phi_label(d)}^{a}")
        if self.scalar != 1:
            parts.append(str(self.scalar))
        return ".".join(parts) or "1"

    __str__ = render

    @classmethod
    def parse(cls, text: str) -> "CycloProduct":
        """Inverse of render; accepts 'Phi' for 'Φ' and '*' for '.'."""
        text = text.strip().replace("Phi", "Φ").replace("*", ".").replace(" ", "")
        if text in ("", "1"):
            return cls.make()
        q_power, factors, scalar = 0, {}, 1
        for part in text.split("."):
            if m := re.fullmatch(r"q(?:\^(\d+))?", part):
                q_power += int(m.group(1) or 1)
            elif m := re.fullmatch(r"Φ(\d+)(?:\^(\d+))?", part):
                d = int(m.group(1))
                factors[d] = factors.get(d, 0) + int(m.group(2) or 1)
            elif part.isdigit():
                scalar *= int(part)
            else:
                raise OrderError(f"cannot parse order term {part!r} in {text!r}")
        return cls.make(q_power, factors, scalar)


# Twisted forms: which Weyl degrees pick up a sign, or pair up into q^8+q^4+1.
_TWISTS = {"", "1", "2", "3"}


def _order_polynomial(letter: str, n: int, twist: str) -> tuple[int, list[int]]:
    degrees = list(weyl_degrees(letter, n))
    label = f"{letter}{n}"
    num_pos = sum(d - 1 for d in degrees)
    poly = [1]
    if twist in ("", "1"):
        for d in degrees:
            poly = _mul(poly, [-1] + [0] * (d - 1) + [1])
        return num_pos, poly
    if twist == "2" and letter in "ADE" and not (letter == "E" and n != 6):
        if letter == "A":
            signs = {i: (-1) ** d for i, d in enumerate(degrees)}
        elif letter == "D":
            odd = degrees.index(n) if n % 2 else len(degrees) - 1 - degrees[::-1].index(n)
            signs = {i: (-1 if i == odd else 1) for i in range(len(degrees))}
        else:
            signs = {i: (-1 if d in (5, 9) else 1) for i, d in enumerate(degrees)}
        for i, d in enumerate(degrees):
            poly = _mul(poly, [-signs[i]] + [0] * (d - 1) + [1])
        return num_pos, poly
    if twist == "3" and label == "D4":
        # eigenvalues 1, w, w^2, 1 on degrees 2, 4, 4, 6
        for d in (2, 6):
            poly = _mul(poly, [-1] + [0] * (d - 1) + [1])
        poly = _mul(poly, [1, 0, 0, 0, 1, 0, 0, 0, 1])
        return num_pos, poly
    raise OrderError(f"unsupported twisted form {twist}{label}")


def generic_order_of(label: str, twist: str = "") -> CycloProduct:
    """Order polynomial of the finite group of Lie type label (optionally twisted) as a cyclotomic product."""
    m = re.fullmatch(r"([A-G])(\d+)", label)
    if not m:
        raise OrderError(f"unsupported Cartan type {label!r}")
    twist = str(twist or "")
    if twist not in _TWISTS:
        raise OrderError(f"unsupported twist {twist!r}")
    letter, n = m.group(1), int(m.group(2))
    try:
        num_pos, poly = _order_polynomial(letter, n, twist)
    except ValueError as exc:
        raise OrderError(str(exc)) from None
    n0, exps = factor_cyclotomic(poly)
    assert n0 == 0
    return CycloProduct.make(num_pos, exps)


def order_of_type(type_string: str, torus: CycloProduct | None = None) -> CycloProduct:
    """Untwisted order of a product of simple factors, e.g. 'A2+A2+A2', times an optional torus."""
    out = torus or CycloProduct.make()
    for letter, n in parse_type_string(type_string):
        out = out * generic_order_of(f"{letter}{n}")
    return out


def padic_valuation(n: int, p: int) -> int:
    if n == 0:
        raise OrderError("valuation of zero")
    n, v = abs(n), 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _is_prime_power(q: int) -> bool:
    return q > 1 and len(sympy.factorint(q)) == 1


@dataclass(frozen=True)
class EllProfile:
    """A prime l with the order e of q modulo l (modulo 4 when l = 2).

    ``q`` may be left out for purely symbolic work.
    """

    ell: int
    e: int
    q: int | None = None

    @property
    def min_depth(self) -> int:
        """Smallest possible l-adic valuation of Phi_e(q)."""
        return 2 if self.ell == 2 else 1

    def divides_phi(self, d: int) -> bool:
        """Whether l divides Phi_d(q) for every q in this congruence class."""
        if self.ell == 2:
            return d in (1, 2) or (d >= 4 and d & (d - 1) == 0)
        if d % self.e:
            return False
        k = d // self.e
        while k % self.ell == 0:
            k //= self.ell
        return k == 1


def compute_e(ell: int, q: int) -> EllProfile:
    if not sympy.isprime(ell):
        raise OrderError(f"{ell} is not prime")
    if not _is_prime_power(q):
        raise OrderError(f"{q} is not a prime power")
    if q % ell == 0:
        raise OrderError(f"l = {ell} divides q = {q}")
    modulus = 4 if ell == 2 else ell
    e, r = 1, q % modulus
    while r != 1:
        r = r * q % modulus
        e += 1
    return EllProfile(ell, e, q)


@dataclass(frozen=True, order=True)
class Valuation:
    """l-part l^constant * |Phi_e(q)|_l^multiplicity."""

    constant: int
    multiplicity: int
    ell: int = field(compare=False)
    e: int = field(compare=False)

    def _check(self, other: "Valuation") -> None:
        if (self.ell, self.e) != (other.ell, other.e):
            raise OrderError("valuations for different (l, e) profiles")

    def __mul__(self, other: "Valuation") -> "Valuation":
        self._check(other)
        return Valuation(self.constant + other.constant, self.multiplicity + other.multiplicity, self.ell, self.e)

    def __truediv__(self, other: "Valuation") -> "Valuation":
        self._check(other)
        return Valuation(self.constant - other.constant, self.multiplicity - other.multiplicity, self.ell, self.e)

    @property
    def is_integral(self) -> bool:
        return self.constant >= 0 and self.multiplicity >= 0

    def exponent_at(self, q: int) -> int:
        """l-adic valuation at a concrete q."""
        prof = compute_e(self.ell, q)
        if prof.e != self.e:
            raise OrderError(f"q = {q} has e = {prof.e}, expected {self.e}")
        depth = padic_valuation(_eval(cyclotomic(self.e), q), self.ell)
        return self.constant + self.multiplicity * depth

    def at(self, q: int) -> int:
        return self.ell ** self.exponent_at(q)

    def always_less_than(self, other: "Valuation") -> bool:
        """Strictly smaller for every admissible q (|Phi_e(q)|_l >= l^min_depth)."""
        self._check(other)
        depth = 2 if self.ell == 2 else 1
        dc = self.constant - other.constant
        dm = self.multiplicity - other.multiplicity
        return dm <= 0 and dc + dm * depth < 0

    def render(self) -> str:
        parts = []
        if self.constant:
            parts.append(str(self.ell) if self.constant == 1 else f"{self.ell}^{self.constant}")
        if self.multiplicity:
            base = f"|Φ{self.e}|_{self.ell}"
            parts.append(base if self.multiplicity == 1 else f"{base}^{self.multiplicity}")
        return ".".join(parts) or "1"

    __str__ = render


def ell_valuation(product: CycloProduct, profile: EllProfile) -> Valuation:
    """Symbolic l-part of a cyclotomic product.

    Phi_d(q) is divisible by l only for d = e * l^k; for k >= 1 exactly once.
    For l = 2 both Phi_1 and Phi_2 are even; the one that is not Phi_e
    contributes exactly one factor 2.
    """
    ell, e = profile.ell, profile.e
    if profile.q is not None and compute_e(ell, profile.q).e != e:
        raise OrderError(f"inconsistent profile {profile}")
    constant = padic_valuation(product.scalar, ell)
    mult = 0
    for d, a in product.factors:
        if d == e:
            mult += a
        elif profile.divides_phi(d):
            constant += a
    return Valuation(constant, mult, ell, e)


_SHAPE = re.compile(r"(?:Φ|Phi)(\d+)(?:\^(\d+))?")


def _parse_shape(shape) -> list[tuple[int, int]]:
    if isinstance(shape, tuple):
        return [shape]
    shape = shape.strip()
    if shape in ("", "1"):
        return []
    out = []
    for part in shape.replace("*", ".").split("."):
        m = _SHAPE.fullmatch(part)
        if not m:
            raise OrderError(f"cannot parse torus shape {shape!r}")
        out.append((int(m.group(1)), int(m.group(2) or 1)))
    return out


def torus_sectional_rank(shape, profile: EllProfile) -> int:
    """l-rank of a torus with generic order Phi_d^k (products allowed): the sum of the k's."""
    total = 0
    for d, k in _parse_shape(shape):
        if k == 0:
            continue
        if not profile.divides_phi(d):
            raise OrderError(f"l = {profile.ell} does not divide Φ{d}(q) when e = {profile.e}")
        if profile.q is not None and _eval(cyclotomic(d), profile.q) % profile.ell:
            raise OrderError(f"l = {profile.ell} does not divide Φ{d}({profile.q})")
        total += k
    return total


def degree_ell_part(
    jordan_degree_ell_part: int | Valuation,
    centralizer_order: CycloProduct,
    group_order: CycloProduct,
    profile: EllProfile,
) -> Valuation:
    """l-part of chi(1) = |G|_l / |C(st)|_l * (degree of the Jordan correspondent)_l."""
    g = ell_valuation(group_order, profile)
    c = ell_valuation(centralizer_order, profile)
    quot = g / c
    if not quot.is_integral:
        raise OrderError(f"centralizer order {centralizer_order} does not divide {group_order} at l = {profile.ell}")
    if isinstance(jordan_degree_ell_part, Valuation):
        psi = jordan_degree_ell_part
    else:
        k = padic_valuation(jordan_degree_ell_part, profile.ell)
        if profile.ell**k != jordan_degree_ell_part:
            raise OrderError(f"{jordan_degree_ell_part} is not a power of {profile.ell}")
        psi = Valuation(k, 0, profile.ell, profile.e)
    return quot * psi
