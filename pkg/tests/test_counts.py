"""Exact counting: series, tables, the brute-force oracle, cache round-trips."""

import random

import pytest
from mpmath import mp, mpf

from overrank import (a_exact, brute_force_rank_counts, load_table, pbar_series,
                      rank_class_table, save_table, verify_orthogonality)
from overrank.counts import orthogonality_residue


def test_pbar_series_small_values():
    # frozen from the brute-force enumeration: each partition contributes
    # 2^{#distinct parts}
    assert pbar_series(0) == [1]
    assert pbar_series(4) == [1, 2, 4, 8, 14]


def test_pbar_series_rejects_negative():
    with pytest.raises(ValueError):
        pbar_series(-1)


def test_brute_force_base_cases():
    assert brute_force_rank_counts(0).entries == {0: 1}
    # {2} and {2-overlined} have rank 1; {1,1} and {1-overlined,1} rank -1
    assert brute_force_rank_counts(2).entries == {1: 2, -1: 2}
    assert brute_force_rank_counts(4).total() == 14


def test_brute_force_totals_match_series():
    series = pbar_series(16)
    for n in range(17):
        assert brute_force_rank_counts(n).total() == series[n]


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force_rank_counts(31)
    brute_force_rank_counts(31, limit=31)  # guard is configurable


def test_brute_force_rank_support_and_symmetry():
    for n in range(1, 21):
        dist = brute_force_rank_counts(n)
        assert all(-(n - 1) <= m <= n - 1 for m in dist.entries)
        # empirical rank negation symmetry at oracle scale
        assert all(dist.entries[m] == dist.entries[-m] for m in dist.entries)


def test_rank_class_table_examples():
    t = rank_class_table(3, 3)
    assert t.counts[3] == [4, 2, 2]
    assert t.counts[0] == [1, 0, 0]
    for c in range(3, 7):
        t = rank_class_table(1, c)
        assert t.counts[1] == [2] + [0] * (c - 1)


def test_rank_class_table_rejects_bad_modulus():
    with pytest.raises(ValueError):
        rank_class_table(10, 1)


def test_table_matches_oracle(small_tables):
    for c, table in small_tables.items():
        for n in range(19):
            assert brute_force_rank_counts(n).fold(c) == table.counts[n], (c, n)


def test_table_class_symmetry(small_tables):
    # counts[n][r] == counts[n][(c-r) mod c], inherited from rank negation
    for c, table in small_tables.items():
        for n in range(61):
            row = table.counts[n]
            assert all(row[r] == row[(c - r) % c] for r in range(c))


def test_row_sums_against_series():
    series = pbar_series(200)
    table = rank_class_table(200, 3)
    assert table.row_sum(200) == series[200]
    assert all(table.row_sum(n) == series[n] for n in range(201))


def test_a_exact_values(small_tables):
    t3 = small_tables[3]
    v = a_exact(1, 3, 2, t3)
    assert abs(v - (-2)) < mpf(2) ** -140  # classes [0,2,2]: 2(zeta+zeta^2) = -2
    assert abs(a_exact(1, 3, 0, t3) - 1) < mpf(2) ** -140
    series = pbar_series(40)
    for c in (3, 5):
        t = small_tables[c]
        for n in (0, 7, 23):
            assert abs(a_exact(0, c, n, t) - series[n]) < mpf(2) ** -130


def test_a_exact_conjugacy(small_tables):
    for c in (3, 5, 7):
        t = small_tables[c]
        for n in (11, 30):
            for j in range(1, c):
                lhs = a_exact(c - j, c, n, t)
                rhs = a_exact(j, c, n, t).conjugate()
                assert abs(lhs - rhs) < mpf(2) ** -130


def test_a_exact_precision_scales_with_data(table3):
    # entries near n=2500 need ~200 mantissa bits; a 160-bit request must not
    # corrupt the evaluation
    v160 = a_exact(1, 3, 2500, table3, prec=160)
    v400 = a_exact(1, 3, 2500, table3, prec=400)
    assert abs(v160 - v400) / abs(v400) < mpf(2) ** -150


def test_a_exact_range_checks(small_tables):
    t = small_tables[3]
    with pytest.raises(ValueError):
        a_exact(3, 3, 2, t)
    with pytest.raises(ValueError):
        a_exact(0, 3, 61, t)


def test_orthogonality_hand_case(small_tables):
    # reconstruction at (0,3,2): 4/3 + (1/3)(-2 - 2) = 0 = counts[2][0]
    t3 = small_tables[3]
    assert t3.counts[2] == [0, 2, 2]
    assert verify_orthogonality(0, 3, 2, t3)


def test_orthogonality_sweep(small_tables):
    series = pbar_series(60)
    for c, table in small_tables.items():
        for n in range(0, 61, 7):
            for a in range(c):
                assert verify_orthogonality(a, c, n, table, pbar=series[n]), (a, c, n)


def test_orthogonality_at_zero(small_tables):
    for c, table in small_tables.items():
        for a in range(c):
            assert verify_orthogonality(a, c, 0, table)


def test_orthogonality_catches_conservation_break(small_tables):
    # the collapse is an identity in the class counts, so corruption is
    # visible exactly when the reference total is computed independently
    series = pbar_series(20)
    corrupt = rank_class_table(20, 4)
    corrupt.counts[20][1] += 1
    assert verify_orthogonality(1, 4, 20, small_tables[4], pbar=series[20])
    assert not verify_orthogonality(1, 4, 20, corrupt, pbar=series[20])
    assert any(orthogonality_residue(1, 4, 20, corrupt, pbar=series[20]))


def test_cache_round_trip(tmp_path):
    table = rank_class_table(80, 5)
    path = tmp_path / "t5.tbl"
    save_table(table, path)
    loaded = load_table(path)
    assert loaded.c == table.c and loaded.n_max == table.n_max
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randrange(81)
        r = rng.randrange(5)
        assert loaded.counts[n][r] == table.counts[n][r]
    assert loaded.checksum() == table.checksum()


def test_cache_detects_corruption(tmp_path):
    table = rank_class_table(30, 3)
    path = tmp_path / "t3.tbl"
    save_table(table, path)
    text = path.read_text().splitlines()
    # tamper with one count line
    n, r, v = text[40].split()
    text[40] = f"{n} {r} {int(v) + 1}"
    path.write_text("\n".join(text) + "\n")
    with pytest.raises(ValueError, match="checksum"):
        load_table(path)


def test_cache_rejects_truncation(tmp_path):
    table = rank_class_table(30, 3)
    path = tmp_path / "t3.tbl"
    save_table(table, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:50]) + "\n")
    with pytest.raises(ValueError):
        load_table(path)


def test_orthogonality_at_depth(table3, pbar3000):
    for n in (1000, 2089, 2500):
        for a in range(3):
            assert verify_orthogonality(a, 3, n, table3, pbar=pbar3000[n])
