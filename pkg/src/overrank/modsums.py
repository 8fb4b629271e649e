"""Dedekind sums, sawtooth, multiplier ratios, and Kloosterman-type sums.

Rational quantities (sawtooth values, Dedekind sums, the branch parameters
delta and m) are exact `fractions.Fraction`s; recomputing them at any
floating precision changes nothing.  Complex values are mpmath `mpc` at a
configurable working precision (default 160 bits).

The finite exponential sums come in two kernel conventions:

* ``"consistent"`` (default): phase exp(-pi*i*a^2*k1*(c-2)*h'/c) on the
  sine-weighted sum, and a doubled (always integral) linear parameter 2*m
  in the secondary sum.  This is the convention validated against exact
  rank-class counts; see tests/test_asymptotic.py.
* ``"variant"``: phase exp(-2*pi*i*a^2*k1*h'/c) with a leading minus sign,
  and the half-weight linear parameter.  Retained for auditing; it does not
  reproduce the exact counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from mpmath import mp, mpc, mpf

__all__ = [
    "DEFAULT_PRECISION",
    "KloostermanContext",
    "context",
    "coprime_residues",
    "dedekind_sum",
    "dedekind_sum_direct",
    "delta",
    "kloosterman_A",
    "kloosterman_B",
    "kloosterman_D",
    "m_param",
    "mod_inverse",
    "omega",
    "rational_phase",
    "sawtooth",
]

DEFAULT_PRECISION = 160

QUARTER = Fraction(1, 4)
THREE_QUARTERS = Fraction(3, 4)


def sawtooth(x: Fraction) -> Fraction:
    """((x)): x - floor(x) - 1/2 off the integers, 0 on them."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - (x.numerator // x.denominator) - Fraction(1, 2)


def dedekind_sum_direct(h: int, k: int) -> Fraction:
    """Reference path: s(h,k) = sum_{u mod k} ((u/k)) ((hu/k)), exactly.

    Inner loop in plain integers: ((u/k)) = (2u - k)/(2k) for 0 < u < k,
    and hu mod k never vanishes when gcd(h,k) = 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    h %= k
    if gcd(h, k) != 1:
        raise ValueError("h and k must be coprime")
    acc = 0
    for u in range(1, k):
        v = (h * u) % k
        acc += (2 * u - k) * (2 * v - k)
    return Fraction(acc, 4 * k * k)


def dedekind_sum(h: int, k: int) -> Fraction:
    """Fast path: Euclidean recursion via the reciprocity law.

    s(h,k) + s(k,h) = -1/4 + (h/k + k/h + 1/(hk))/12 for coprime h,k >= 1,
    applied with h reduced mod k until the pair collapses.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    h %= k
    if gcd(h, k) != 1:
        raise ValueError("h and k must be coprime")
    s = Fraction(0)
    sign = 1
    while h > 0:
        s += sign * (Fraction(h * h + k * k + 1, 12 * h * k) - Fraction(1, 4))
        sign = -sign
        h, k = k % h, h
    return s


def rational_phase(x: Fraction, prec: int = DEFAULT_PRECISION) -> mpc:
    """exp(2*pi*i*x) for rational x, with x reduced mod 1 before evaluation."""
    x = Fraction(x)
    x -= x.numerator // x.denominator
    with mp.workprec(prec):
        return mp.expjpi(2 * mpf(x.numerator) / x.denominator)


def omega(h: int, k: int, prec: int = DEFAULT_PRECISION) -> mpc:
    """Multiplier omega_{h,k} = exp(pi*i*s(h,k)); unit modulus."""
    s = dedekind_sum(h, k)
    with mp.workprec(prec):
        return mp.expjpi(mpf(s.numerator) / s.denominator)


def mod_inverse(h: int, k: int) -> int:
    """Representative h' in [0,k) with h*h' == 1 (mod k); h' = 0 when k = 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return 0
    if gcd(h, k) != 1:
        raise ValueError("h and k must be coprime")
    return pow(h, -1, k)


def coprime_residues(k: int) -> list[int]:
    """The primed-sum index set: 0 <= h < k with gcd(h,k) = 1."""
    return [h for h in range(k) if gcd(h, k) == 1]


@dataclass(frozen=True)
class KloostermanContext:
    """Derived parameters for the pair (a,c) against an arc denominator k."""

    a: int
    c: int
    k: int
    c1: int
    k1: int
    l: int

    @property
    def region(self) -> str:
        """Branch key on l/c1: 'low' (0,1/4], 'mid' (1/4,3/4], 'high' (3/4,1)."""
        x = Fraction(self.l, self.c1)
        if x <= QUARTER:
            return "low"
        if x <= THREE_QUARTERS:
            return "mid"
        return "high"


def context(a: int, c: int, k: int) -> KloostermanContext:
    if not (0 < a < c and gcd(a, c) == 1):
        raise ValueError("need 0 < a < c with gcd(a,c) = 1")
    if c <= 2:
        raise ValueError("need c > 2")
    if k < 1:
        raise ValueError("k must be >= 1")
    g = gcd(c, k)
    c1, k1 = c // g, k // g
    l = (a * k1) % c1
    return KloostermanContext(a=a, c=c, k=k, c1=c1, k1=k1, l=l)


def delta(ctx: KloostermanContext, r: int) -> Fraction:
    """Exponent-growth parameter delta_{c,k,r}; defined only when c does not divide k.

    Strictly decreasing in r in the outer regions, so {r >= 0 : delta > 0}
    is a finite prefix.
    """
    if ctx.c1 == 1:
        raise ValueError("delta requires c not dividing k")
    if r < 0:
        raise ValueError("r must be >= 0")
    l, c1 = ctx.l, ctx.c1
    x = Fraction(l, c1)
    if x <= QUARTER:
        return Fraction(1, 16) - Fraction(l, 2 * c1) + Fraction(l * l, c1 * c1) - r * x
    if x <= THREE_QUARTERS:
        return Fraction(0)
    return (Fraction(1, 16) - Fraction(3 * l, 2 * c1) + Fraction(l * l, c1 * c1)
            + Fraction(1, 2) - r * (1 - x))


def m_param(ctx: KloostermanContext, r: int) -> Fraction:
    """Linear phase parameter m_{a,c,k,r} (half-weight normalization).

    May be a half-integer; the secondary-sum evaluator doubles it, which is
    always integral.
    """
    if ctx.c1 == 1:
        raise ValueError("m_param requires c not dividing k")
    if r < 0:
        raise ValueError("r must be >= 0")
    l, c1 = ctx.l, ctx.c1
    d = ctx.a * ctx.k1 - l
    x = Fraction(l, c1)
    if x <= QUARTER:
        return Fraction(-(2 * d * d + c1 * d + 2 * r * c1 * d), 2 * c1 * c1)
    if x <= THREE_QUARTERS:
        return Fraction(0)
    return Fraction(-(2 * d * d + 3 * c1 * d - 2 * r * c1 * d - c1 * c1 * (2 * r - 1)),
                    2 * c1 * c1)


def _check_kernel(kernel: str) -> None:
    if kernel not in ("consistent", "variant"):
        raise ValueError("kernel must be 'consistent' or 'variant'")


def kloosterman_B(a: int, c: int, k: int, n: int, m: Fraction = Fraction(0),
                  prec: int = DEFAULT_PRECISION, kernel: str = "consistent") -> mpc:
    """Sine-weighted Kloosterman-type sum over c | k with k odd.

    Each term carries omega_{h,k}^2 / omega_{2h,k}, 1/sin(pi*a*h'/c), the
    quadratic Gauss-type phase in a^2*k1*h'/c, and exp(2*pi*i*(n*h+m*h')/k).
    k odd guarantees gcd(2h,k) = 1; c | k guarantees gcd(h',c) = 1 so the
    sine never vanishes.
    """
    _check_kernel(kernel)
    if k % c != 0 or k % 2 == 0:
        raise ValueError("kloosterman_B requires c | k with k odd")
    if gcd(a, c) != 1 or not 0 < a < c:
        raise ValueError("need 0 < a < c coprime")
    m = Fraction(m)
    k1 = k // c
    with mp.workprec(prec + 10):
        total = mpc(0)
        for h in coprime_residues(k):
            hp = mod_inverse(h, k)
            w = omega(h, k, prec + 10) ** 2 / omega((2 * h) % k, k, prec + 10)
            term = w / mp.sinpi(mpf(a * hp) / c)
            if kernel == "consistent":
                term *= mp.expjpi(-mpf((a * a * k1 * (c - 2) * hp) % (2 * c)) / c)
            else:
                term *= rational_phase(Fraction(-hp * a * a * k1, c), prec + 10)
            term *= rational_phase(Fraction(n * h, k) + m * Fraction(hp, k), prec + 10)
            total += term
        sign = 1 if kernel == "consistent" else -1
        total *= sign / mp.sqrt(2) * mp.tan(mp.pi * a / c)
    with mp.workprec(prec):
        return +total


def kloosterman_D(a: int, c: int, k: int, n: int, m: Fraction, region_sign: int,
                  prec: int = DEFAULT_PRECISION, kernel: str = "consistent") -> mpc:
    """Secondary Kloosterman-type sum over c not dividing k, k odd.

    region_sign is +1 on the low branch of l/c1 and -1 on the high branch;
    invoking it for the mid branch (where delta vanishes identically) is an
    error in the caller.  The 'consistent' kernel doubles m in the phase.
    """
    _check_kernel(kernel)
    if k % c == 0 or k % 2 == 0:
        raise ValueError("kloosterman_D requires c not dividing k, k odd")
    if region_sign not in (1, -1):
        raise ValueError("region_sign must be +1 or -1")
    if gcd(a, c) != 1 or not 0 < a < c:
        raise ValueError("need 0 < a < c coprime")
    m = Fraction(m)
    m_eff = 2 * m if kernel == "consistent" else m
    with mp.workprec(prec + 10):
        total = mpc(0)
        for h in coprime_residues(k):
            hp = mod_inverse(h, k)
            w = omega(h, k, prec + 10) ** 2 / omega((2 * h) % k, k, prec + 10)
            total += w * rational_phase(Fraction(n * h, k) + m_eff * Fraction(hp, k),
                                        prec + 10)
        total *= region_sign / mp.sqrt(2) * mp.tan(mp.pi * a / c)
    with mp.workprec(prec):
        return +total


def kloosterman_A(a: int, c: int, k: int, n: int, m: Fraction = Fraction(0),
                  prec: int = DEFAULT_PRECISION) -> mpc:
    """Even-k companion sum over c | k (cotangent weight, omega_{h,k/2} divisor).

    Defined for completeness; the asymptotic evaluator never consumes it
    because the main-term decomposition runs over odd k only.
    """
    if k % c != 0 or k % 2 != 0:
        raise ValueError("kloosterman_A requires c | k with k even")
    if gcd(a, c) != 1 or not 0 < a < c:
        raise ValueError("need 0 < a < c coprime")
    m = Fraction(m)
    k1 = k // c
    half = k // 2
    with mp.workprec(prec + 10):
        total = mpc(0)
        for h in coprime_residues(k):
            hp = mod_inverse(h, k)
            # h odd and coprime to k, so gcd(h, k/2) = 1; reduce the index mod k/2
            w = omega(h, k, prec + 10) ** 2 / omega(h % half, half, prec + 10)
            term = w * mp.cospi(mpf(a * hp) / c) / mp.sinpi(mpf(a * hp) / c)
            term *= rational_phase(Fraction(-hp * a * a * k1, c), prec + 10)
            term *= rational_phase(Fraction(n * h, k) + m * Fraction(hp, k), prec + 10)
            total += term
        total *= (-1) ** (k1 + 1) * mp.tan(mp.pi * a / c)
    with mp.workprec(prec):
        return +total
