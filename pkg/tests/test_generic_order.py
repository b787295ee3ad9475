import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from golden import E7_ORDER
from qiblocks.generic_order import (
    GROUP_DIMENSION,
    CycloProduct,
    EllProfile,
    OrderError,
    Valuation,
    compute_e,
    cyclotomic,
    degree_ell_part,
    ell_valuation,
    factor_cyclotomic,
    generic_order_of,
    order_of_type,
    padic_valuation,
    torus_sectional_rank,
)
from qiblocks.rootsys import build_root_datum, weyl_degrees

Q = sympy.Symbol("q")
EXCEPTIONAL = ["G2", "F4", "E6", "E7", "E8"]
PRIME_POWERS = [q for q in range(2, 101) if len(sympy.factorint(q)) == 1]


def _sympy_order(label, twist=""):
    """Order polynomial straight from the degrees, with twisted signs written out by hand."""
    letter, n = label[0], int(label[1:])
    degs = weyl_degrees(letter, n)
    N = sum(d - 1 for d in degs)
    if twist == "3" and label == "D4":
        return Q**12 * (Q**8 + Q**4 + 1) * (Q**6 - 1) * (Q**2 - 1)
    # epsilon_i = -1 turns q^d - 1 into q^d + 1
    eps = [1] * len(degs)
    if twist == "2" and letter == "A":
        eps = [(-1) ** d for d in degs]
    elif twist == "2" and letter == "D":
        eps[degs.index(n, len(degs) - 1 if degs[-1] == n else 0)] = -1
    elif twist == "2" and label == "E6":
        eps = [-1 if d in (5, 9) else 1 for d in degs]
    expr = Q**N
    for d, sign in zip(degs, eps):
        expr *= Q**d - sign
    return sympy.expand(expr)


@pytest.mark.parametrize("label", EXCEPTIONAL + ["A1", "A4", "B3", "C4", "D5"])
def test_factorization_matches_sympy(label):
    prod = generic_order_of(label)
    poly = sympy.Poly(_sympy_order(label), Q)
    assert sympy.expand(sympy.sympify(_render_to_sympy(prod))) == poly.as_expr()
    _, factors = sympy.factor_list(poly.as_expr())
    # every irreducible factor is q or some cyclotomic polynomial
    found = {}
    for f, mult in factors:
        if f == Q:
            assert mult == prod.q_power
            continue
        d = next(d for d in range(1, 31) if sympy.expand(f - sympy.cyclotomic_poly(d, Q)) == 0)
        found[d] = mult
    assert found == prod.exponents


def _render_to_sympy(prod):
    expr = Q**prod.q_power * prod.scalar
    for d, a in prod.factors:
        expr *= sympy.cyclotomic_poly(d, Q) ** a
    return expr


@pytest.mark.parametrize("label,twist", [("E6", "2"), ("D4", "3"), ("A3", "2"), ("D5", "2")])
def test_twisted_orders_match_sympy(label, twist):
    prod = generic_order_of(label, twist)
    assert sympy.expand(_render_to_sympy(prod) - _sympy_order(label, twist)) == 0


@pytest.mark.parametrize("label", EXCEPTIONAL)
def test_specialization_at_prime_powers(label):
    prod = generic_order_of(label)
    expr = _sympy_order(label)
    for q in PRIME_POWERS[:20]:
        assert prod.evaluate(q) == int(expr.subs(Q, q))


@pytest.mark.parametrize("label", EXCEPTIONAL)
def test_degree_bookkeeping(label):
    prod = generic_order_of(label)
    assert prod.q_power == build_root_datum(label).num_positive
    assert prod.degree() == GROUP_DIMENSION[label]


def test_e7_formula_verbatim():
    assert generic_order_of("E7").render() == E7_ORDER
    assert generic_order_of("A1").render() == "q.Φ1.Φ2"
    assert CycloProduct.parse(E7_ORDER) == generic_order_of("E7")


def test_e7_three_part():
    val = ell_valuation(generic_order_of("E7"), EllProfile(3, 1))
    assert (val.constant, val.multiplicity) == (4, 7)
    assert val.render() == "3^4.|Φ1|_3^7"
    for q in (4, 7, 13):
        assert val.at(q) == 3 ** padic_valuation(generic_order_of("E7").evaluate(q), 3)


@pytest.mark.parametrize("d", range(1, 31))
def test_cyclotomic_matches_sympy(d):
    assert sympy.Poly(list(reversed(cyclotomic(d))), Q).as_expr() == sympy.cyclotomic_poly(d, Q)


def test_factor_cyclotomic_rejects_non_cyclotomic():
    with pytest.raises(OrderError):
        factor_cyclotomic([1, 1, 1, 1, 0, 1])  # 1 + q + q^2 + q^3 + q^5


GRID = [(label, ell, q) for label in EXCEPTIONAL + ["2E6", "3D4"] for ell in (2, 3, 5) for q in PRIME_POWERS if q % ell]


@pytest.mark.parametrize("label,ell,q", GRID)
def test_valuation_symbolic_vs_numeric(label, ell, q):
    base, twist = (label[1:], label[0]) if label[0] in "23" else (label, "")
    prod = generic_order_of(base, twist)
    val = ell_valuation(prod, compute_e(ell, q))
    assert val.exponent_at(q) == padic_valuation(prod.evaluate(q), ell)


@given(st.sampled_from([2, 3]), st.sampled_from(PRIME_POWERS))
def test_e_for_small_primes(ell, q):
    if q % ell == 0:
        with pytest.raises(OrderError):
            compute_e(ell, q)
    else:
        assert compute_e(ell, q).e in (1, 2)


@given(st.sampled_from(PRIME_POWERS))
def test_e_for_five(q):
    if q % 5:
        assert compute_e(5, q).e in (1, 2, 4)


@pytest.mark.parametrize("ell,q", [(4, 7), (3, 6), (3, 9)])
def test_compute_e_errors(ell, q):
    with pytest.raises(OrderError):
        compute_e(ell, q)


def test_torus_rank():
    assert torus_sectional_rank("Φ1^7", EllProfile(3, 1)) == 7
    assert torus_sectional_rank("Phi2^4", EllProfile(2, 1)) == 4
    assert 2 ** torus_sectional_rank("Φ2^4", EllProfile(2, 1, 3)) == 16
    with pytest.raises(OrderError):
        torus_sectional_rank("Φ2^3", EllProfile(3, 1))


def test_degree_ell_part_e7_series():
    """C = Φ1.A2(q)^3.2 inside E7 at l = 3: every chi(1)_3 stays below 3^3 |Φ1|_3^4."""
    profile = EllProfile(3, 1)
    cent = CycloProduct.make(0, {1: 1}, 2) * order_of_type("A2+A2+A2")
    group = generic_order_of("E7")
    threshold = Valuation(3, 4, 3, 1)
    # unipotent degrees of A2(q) are 1, q.Φ2, q^3: all prime to 3 when e = 1
    deg = degree_ell_part(1, cent, group, profile)
    assert deg.render() == "3"
    assert deg.always_less_than(threshold)
    for q in (4, 7, 13):
        exact = generic_order_of("E7").evaluate(q) // cent.evaluate(q)
        assert deg.at(q) == 3 ** padic_valuation(exact, 3)
        assert deg.at(q) < threshold.at(q)


def test_degree_ell_part_trivial_case():
    g = generic_order_of("F4")
    assert degree_ell_part(1, g, g, EllProfile(2, 1)).render() == "1"


def test_degree_ell_part_rejects_non_divisor():
    with pytest.raises(OrderError):
        degree_ell_part(1, generic_order_of("E8"), generic_order_of("E7"), EllProfile(3, 1))
