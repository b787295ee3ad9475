import hashlib

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qiblocks.unipotent import (
    SeriesSizeQuery,
    UnipotentError,
    bipartition_count,
    count_unipotent,
    load_table,
    partition_count,
    partitions,
    series_size,
    symbol_rank,
    symbols,
)


def _series_coefficients(n):
    """p(k) for k <= n from the product 1/prod(1 - x^j), by polynomial multiplication."""
    coeffs = [1] + [0] * n
    for j in range(1, n + 1):
        for k in range(j, n + 1):
            coeffs[k] += coeffs[k - j]
    return coeffs


def test_pentagonal_recurrence_matches_generating_function():
    assert [partition_count(k) for k in range(31)] == _series_coefficients(30)


@pytest.mark.parametrize("n", range(0, 13))
def test_partition_generator_matches_count(n):
    parts = list(partitions(n))
    assert len(parts) == len(set(parts)) == partition_count(n)
    assert all(sum(p) == n and list(p) == sorted(p, reverse=True) for p in parts)


def _strict_sets(size, total, low=0):
    """Increasing tuples of `size` distinct integers >= low summing to `total`."""
    if size == 0:
        if total == 0:
            yield ()
        return
    # smallest possible sum for the remaining entries
    for first in range(low, total + 1):
        if first * size + size * (size - 1) // 2 > total:
            break
        for rest in _strict_sets(size - 1, total - first, first + 1):
            yield (first,) + rest


def brute_symbols(rank):
    """All reduced symbols of a given rank, by direct search over pairs of finite sets."""
    found = set()
    for size in range(0, 2 * rank + 3):
        shift = (size - 1) ** 2 // 4 if size else 0
        total = rank + shift
        for top_size in range(size + 1):
            bottom_size = size - top_size
            if top_size < bottom_size:
                continue
            for t_sum in range(total + 1):
                for top in _strict_sets(top_size, t_sum):
                    for bottom in _strict_sets(bottom_size, total - t_sum):
                        if top and bottom and top[0] == 0 and bottom[0] == 0:
                            continue
                        sym = (top, bottom)
                        if top_size == bottom_size:
                            sym = tuple(sorted(sym))
                        found.add(sym)
    return found


@pytest.mark.parametrize("rank", range(1, 9))
def test_symbols_match_brute_force(rank):
    brute = brute_symbols(rank)
    ours = set()
    for defect in range(0, 2 * rank + 2):
        for sym in symbols(rank, defect):
            assert symbol_rank(sym) == rank
            assert len(sym[0]) - len(sym[1]) == defect
            ours.add(sym)
    assert ours == brute


@pytest.mark.parametrize("rank", range(1, 9))
def test_defect_partition_count_identity(rank):
    odd = sum(len(symbols(rank, d)) for d in range(1, 2 * rank + 2, 2))
    assert odd == sum(bipartition_count(rank - s * (s + 1)) for s in range(rank + 1) if s * (s + 1) <= rank)
    even = sum(len(symbols(rank, d)) for d in range(0, 2 * rank + 2, 2))
    degenerate = sum(1 for a, b in symbols(rank, 0) if a == b)
    # defect-0 pairs are unordered: ordered bipartitions = 2 * classes - degenerate
    expected = (bipartition_count(rank) + degenerate) // 2 + sum(
        bipartition_count(rank - d * d // 4) for d in range(2, 2 * rank + 2, 2) if d * d // 4 <= rank
    )
    assert even == expected


def test_counts_monotone_in_rank():
    for letter in "BCD":
        start = 4 if letter == "D" else 1
        counts = [count_unipotent(letter, "", n) for n in range(start, 9)]
        assert counts == sorted(counts)


@pytest.mark.parametrize("letter,twist,rank,count", [
    ("A", "", 1, 2), ("A", "", 0, 1), ("A", "2", 4, 7), ("B", "", 2, 6), ("C", "", 3, 12),
    ("B", "", 4, 25), ("D", "", 4, 14), ("D", "2", 4, 10), ("D", "3", 4, 8),
    ("G", "", 2, 10), ("F", "", 4, 37), ("E", "", 6, 30), ("E", "2", 6, 30), ("E", "", 7, 76), ("E", "", 8, 166),
])
def test_known_counts(letter, twist, rank, count):
    assert count_unipotent(letter, twist, rank) == count


@pytest.mark.parametrize("rank", range(1, 9))
def test_type_a_counts_partitions(rank):
    assert count_unipotent("A", "", rank) == len(list(partitions(rank + 1)))


def test_d_degenerate_symbols_doubled():
    # D4 has one degenerate symbol pair per very even class
    d0 = symbols(4, 0)
    assert sum(1 for a, b in d0 if a == b) == 2


@pytest.mark.parametrize("centralizer,size", [
    ("A1+A1", 4), ("A4+A4", 49), ("T", 1), ("", 1), ("B2", 6),
    ("A5+A1", 22), ("A5+A2", 33), ("Φ3.A1(q).A1(q^3)", 4), ("2A5+T1", 11),
])
def test_series_size(centralizer, size):
    assert series_size(SeriesSizeQuery(centralizer)) == size


@given(st.lists(st.sampled_from(["A1", "A2", "B3", "C2", "D4", "G2", "2A3", "E6"]), max_size=4), st.randoms())
def test_series_size_multiplicative_and_order_free(factors, rnd):
    whole = series_size(SeriesSizeQuery("+".join(factors)))
    prod = 1
    for f in factors:
        prod *= series_size(SeriesSizeQuery(f))
    assert whole == prod
    shuffled = list(factors)
    rnd.shuffle(shuffled)
    assert series_size(SeriesSizeQuery("+".join(shuffled))) == whole


def test_disconnected_needs_convention():
    with pytest.raises(UnipotentError):
        series_size(SeriesSizeQuery("D4", component_order=3))
    assert series_size(SeriesSizeQuery("D4", component_order=3, convention="upper-bound")) == 42
    assert series_size(SeriesSizeQuery("D4", component_order=3, convention="explicit", explicit_size=8)) == 8


def test_unsupported_factor():
    with pytest.raises(UnipotentError):
        count_unipotent("B", "2", 3)
    with pytest.raises(UnipotentError):
        SeriesSizeQuery("X9").factors()


def test_table_checksum_verified(tmp_path):
    table = load_table()
    assert table.lookup("E8", "") == 166
    bad = tmp_path / "counts.txt"
    text = open(table.source, encoding="utf-8").read().replace("E8 - 166", "E8 - 167")
    bad.write_text(text, encoding="utf-8")
    with pytest.raises(UnipotentError, match="checksum"):
        load_table(bad)


def test_table_checksum_header_matches_records():
    lines = [ln for ln in open(load_table().source, encoding="utf-8").read().splitlines() if ln and not ln.startswith("#")]
    assert hashlib.sha256(("\n".join(lines) + "\n").encode()).hexdigest() == load_table().checksum
