"""Sawtooth, Dedekind sums, branch parameters, and the exponential sums."""

from fractions import Fraction
from math import gcd

import pytest
from mpmath import mp, mpc, mpf

from overrank import (context, dedekind_sum, dedekind_sum_direct, delta,
                      kloosterman_A, kloosterman_B, kloosterman_D, m_param,
                      mod_inverse, omega, sawtooth)
from overrank.modsums import coprime_residues, rational_phase


def close(x, y, bits=140):
    """Compare package values against references at honest precision."""
    with mp.workprec(400):
        return abs(x - y) < mpf(2) ** -bits



def test_sawtooth_values():
    assert sawtooth(Fraction(5)) == 0
    assert sawtooth(Fraction(1, 2)) == 0
    assert sawtooth(Fraction(7, 3)) == Fraction(-1, 6)


def test_sawtooth_antisymmetry():
    for num in range(-40, 41):
        for den in (1, 2, 3, 5, 12):
            x = Fraction(num, den)
            assert sawtooth(-x) == -sawtooth(x)


def test_dedekind_values():
    assert dedekind_sum(0, 1) == 0
    assert dedekind_sum(1, 3) == Fraction(1, 18)
    assert dedekind_sum(2, 5) == 0
    assert dedekind_sum_direct(1, 3) == Fraction(1, 18)


def test_dedekind_rejects_non_coprime():
    with pytest.raises(ValueError):
        dedekind_sum(2, 4)
    with pytest.raises(ValueError):
        dedekind_sum_direct(3, 9)


def test_dedekind_fast_equals_direct():
    for k in range(1, 121):
        for h in range(k):
            if gcd(h, k) == 1:
                assert dedekind_sum(h, k) == dedekind_sum_direct(h, k), (h, k)


def test_dedekind_reciprocity():
    # s(h,k) + s(k,h) = -1/4 + (h/k + k/h + 1/(hk))/12, exactly
    for k in range(2, 81):
        for h in range(1, k):
            if gcd(h, k) == 1:
                lhs = dedekind_sum(h, k) + dedekind_sum(k % h, h) if h > 1 else \
                    dedekind_sum(h, k) + dedekind_sum(0, 1)
                rhs = Fraction(-1, 4) + (Fraction(h, k) + Fraction(k, h)
                                         + Fraction(1, h * k)) / 12
                assert lhs == rhs, (h, k)


def test_omega_values():
    assert close(omega(0, 1), 1, 150)
    with mp.workprec(400):
        ref1, ref2 = mp.expjpi(mpf(1) / 18), mp.expjpi(mpf(-1) / 18)
    assert close(omega(1, 3), ref1, 150)
    assert close(omega(2, 3), ref2, 150)


def test_omega_unit_modulus():
    for k in (1, 3, 7, 24, 101):
        for h in coprime_residues(k):
            with mp.workprec(400):
                assert abs(abs(omega(h, k)) - 1) < mpf(2) ** -140


def test_mod_inverse():
    assert mod_inverse(1, 5) == 1
    assert mod_inverse(2, 5) == 3
    assert mod_inverse(3, 7) == 5
    assert mod_inverse(0, 1) == 0
    with pytest.raises(ValueError):
        mod_inverse(2, 4)


def test_context_examples():
    ctx = context(1, 5, 1)
    assert (ctx.c1, ctx.k1, ctx.l) == (5, 1, 1)
    ctx = context(1, 3, 3)
    assert (ctx.c1, ctx.k1, ctx.l) == (1, 1, 0)
    ctx = context(3, 5, 2)
    assert (ctx.c1, ctx.k1, ctx.l) == (5, 2, 1)


def test_context_rejects_bad_input():
    with pytest.raises(ValueError):
        context(2, 4, 1)  # gcd != 1
    with pytest.raises(ValueError):
        context(1, 2, 1)  # c too small


def test_delta_values():
    ctx = context(1, 5, 1)
    assert delta(ctx, 0) == Fraction(1, 400)
    assert delta(ctx, 1) == Fraction(1, 400) - Fraction(1, 5)
    # mid region: l/c1 in (1/4, 3/4]
    ctx_mid = context(2, 5, 1)
    assert ctx_mid.region == "mid"
    assert delta(ctx_mid, 0) == 0
    assert delta(ctx_mid, 5) == 0
    with pytest.raises(ValueError):
        delta(context(1, 3, 3), 0)  # c | k


def test_m_param_values():
    assert m_param(context(1, 5, 1), 0) == 0
    assert m_param(context(2, 5, 1), 0) == 0  # mid region
    assert m_param(context(3, 5, 2), 0) == Fraction(-3, 2)


def test_delta_decreasing_and_enumeration_bound():
    # outer regions: delta strictly decreases in r, and the positive prefix
    # stays within ceil((c+8)/16) + 1 entries
    for c in (3, 5, 7, 9, 11, 13, 25, 33):
        for k in range(1, 40):
            if k % c == 0:
                continue
            for a in range(1, c):
                if gcd(a, c) != 1:
                    continue
                ctx = context(a, c, k)
                if ctx.c1 == 1 or ctx.region == "mid":
                    continue
                count = 0
                prev = None
                r = 0
                while True:
                    d = delta(ctx, r)
                    if prev is not None:
                        assert d < prev
                    prev = d
                    if d <= 0:
                        break
                    count += 1
                    r += 1
                assert count <= (c + 8 + 15) // 16 + 1, (a, c, k, count)


# ---------------------------------------------------------------------------
# Exponential sums
# ---------------------------------------------------------------------------

def test_b_summand_count():
    assert len(coprime_residues(3)) == 2
    assert len(coprime_residues(5)) == 4


def test_b_variant_hand_cancellation():
    # with the 'variant' kernel the two k=3 terms are (2/sqrt3)e^{i pi/6-2 pi i/3}
    # and its mirror, which cancel at n = 0
    v = kloosterman_B(1, 3, 3, 0, kernel="variant")
    assert abs(v) < mpf(2) ** -140


def test_b_consistent_pinned_value():
    # frozen from the calibration against exact rank-class counts
    v = kloosterman_B(1, 3, 3, 0)
    with mp.workprec(400):
        assert abs(v - mpc(0, -1) * mp.sqrt(2)) < mpf(2) ** -140


def test_b_variant_negative_conjugate_pattern():
    # term-wise conjugation under h -> k-h pairs n with -n
    b = kloosterman_B(1, 3, 3, 1, kernel="variant")
    bm = kloosterman_B(1, 3, 3, -1, kernel="variant")
    assert close(bm, -b.conjugate())


def test_b_precondition_checks():
    with pytest.raises(ValueError):
        kloosterman_B(1, 3, 5, 0)  # c does not divide k
    with pytest.raises(ValueError):
        kloosterman_B(1, 3, 6, 0)  # k even


def test_d_single_term_value():
    # k = 1 collapses to the h = 0 term with unit multiplier
    v = kloosterman_D(1, 5, 1, 0, Fraction(0), 1)
    with mp.workprec(400):
        expect = mp.tan(mp.pi / 5) / mp.sqrt(2)
    assert close(v, expect)
    flipped = kloosterman_D(1, 5, 1, 0, Fraction(0), -1)
    assert close(flipped, -v)


def test_d_precondition_checks():
    with pytest.raises(ValueError):
        kloosterman_D(1, 5, 5, 0, Fraction(0), 1)  # c | k
    with pytest.raises(ValueError):
        kloosterman_D(1, 5, 3, 0, Fraction(0), 2)  # bad region sign


def test_d_half_integer_parameter_is_exact():
    # the doubled linear parameter keeps the phase rational for half-integer m
    v = kloosterman_D(2, 5, 3, -7, Fraction(-3, 2), 1)
    w = kloosterman_D(2, 5, 3, -7, Fraction(-3, 2), 1, prec=320)
    assert close(v, w, 150)


def test_a_summand_count_and_pinned_value():
    assert len(coprime_residues(6)) == 2
    # independent term-by-term evaluation pins A(1,3,6,(0,0)) = i
    with mp.workprec(300):
        total = mpc(0)
        for h, hp in ((1, 1), (5, 5)):
            w = (mp.expjpi(_ded(h, 6)) ** 2) / mp.expjpi(_ded(h % 3, 3))
            cot = mp.cospi(mpf(hp) / 3) / mp.sinpi(mpf(hp) / 3)
            phase = mp.expjpi(mpf(-2 * ((hp * 2) % 3)) / 3)
            total += w * cot * phase
        expected = -mp.tan(mp.pi / 3) * total
    got = kloosterman_A(1, 3, 6, 0)
    assert close(got, expected)
    assert close(got, mpc(0, 1))


def _ded(h, k):
    s = dedekind_sum(h, k)
    return mpf(s.numerator) / s.denominator


def test_a_purely_imaginary_at_integer_arguments():
    # pairing h with k-h flips the cotangent and conjugates the multipliers,
    # so the h-sum satisfies S = -conj(S) whenever n + m is an integer
    for (n, m) in ((0, Fraction(0)), (5, Fraction(2)), (-4, Fraction(1))):
        v = kloosterman_A(1, 3, 6, n, m)
        with mp.workprec(400):
            assert abs(v.real) < mpf(2) ** -140, (n, m)


def test_a_precondition_checks():
    with pytest.raises(ValueError):
        kloosterman_A(1, 3, 3, 0)  # k odd


def test_rational_phase_reduction():
    # reduction mod 1 keeps huge numerators exact
    big = Fraction(10 ** 30, 3)  # 10^30 = 1 (mod 3)
    assert close(rational_phase(big), rational_phase(Fraction(1, 3)), 150)


def test_exact_rationals_insensitive_to_precision():
    # Fractions never route through floats; identical at any working precision
    ctx = context(3, 5, 2)
    with mp.workprec(53):
        d1, m1 = delta(ctx, 1), m_param(ctx, 1)
        s1 = dedekind_sum(97, 250)
    with mp.workprec(500):
        assert delta(ctx, 1) == d1
        assert m_param(ctx, 1) == m1
        assert dedekind_sum(97, 250) == s1
