"""Explicit constants and envelope functions for the rank-class deviation.

Carries the certified series constants C1..C5 (exact partial sums plus a
closed-form tail bound), their coarse closed-form majorants, the fourteen
error-piece bounds with their aggregation, the per-modulus deviation ratio
R_c, the giant thresholds M_c, the two-sided envelope for the overpartition
count, and a self-test of the auxiliary scalar inequalities the envelopes
rest on.

Strict float comparisons here never masquerade as proofs: `strict_verdict`
returns 'inconclusive' when a margin is thinner than the relative policy
(default 1e-12), and callers surface that outcome.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from mpmath import mp, mpf

from .modsums import DEFAULT_PRECISION

__all__ = [
    "BoundBreakdown",
    "CertifiedConstant",
    "MARGIN_POLICY",
    "Threshold",
    "aux_inequalities_selftest",
    "cbar2",
    "cbar4",
    "const_C",
    "error_pieces",
    "error_term_bound",
    "m_c",
    "m_c_prime",
    "main_term_bound",
    "pbar_sandwich",
    "r_ratio",
    "r_ratio_components",
    "raw_error_aggregate",
    "sandwich_threshold",
    "strict_verdict",
]

MARGIN_POLICY = 1e-12


def strict_verdict(lhs, rhs, rel: float = MARGIN_POLICY) -> str:
    """'pass' if lhs < rhs with relative margin > rel, 'fail' if the reverse,
    'inconclusive' when the gap is below the policy."""
    lhs, rhs = mpf(lhs), mpf(rhs)
    scale = max(abs(lhs), abs(rhs), mpf("1e-300"))
    margin = (rhs - lhs) / scale
    if margin > rel:
        return "pass"
    if margin < -rel:
        return "fail"
    return "inconclusive"


# ---------------------------------------------------------------------------
# Certified series constants
# ---------------------------------------------------------------------------

@dataclass
class CertifiedConstant:
    """Partial sum with exact counts plus a certified tail: upper = partial + tail."""

    index: int
    c: int | None
    upper: mpf
    partial: mpf
    tail_bound: mpf
    truncation: int


def _series_params(index: int, c: int | None):
    """(decay rate alpha, scalar prefactor) of C_index = scale*sum p(r)e^{-alpha r}."""
    pi = mp.pi
    if index == 1:
        return pi, mp.exp(pi / 16) + mp.exp(-7 * pi / 16)
    if index == 2:
        if c is None or c <= 2:
            raise ValueError("C2 needs c > 2")
        return (c * c - 8) * pi / (16 * c * c), mpf(2)
    if index == 3:
        return pi, mpf(1)
    if index == 4:
        if c is None or c <= 2:
            raise ValueError("C4 needs c > 2")
        return pi / (2 * c * c), mpf(1)
    if index == 5:
        return pi / 4, mp.exp(-pi / 8)
    raise ValueError("index must be 1..5")


def _tail_integral(R, alpha):
    """Closed form of int_R^inf e^{pi sqrt(t) - alpha t} dt via erfc."""
    beta = mp.pi / (2 * alpha)
    x = mp.sqrt(R) - beta
    return 2 * mp.exp(mp.pi ** 2 / (4 * alpha)) * (
        mp.exp(-alpha * x * x) / (2 * alpha)
        + beta * mp.sqrt(mp.pi / alpha) / 2 * mp.erfc(mp.sqrt(alpha) * x))


def const_C(index: int, c: int | None, pbar: Sequence[int],
            rel_tol: float = 1e-15, prec: int = DEFAULT_PRECISION) -> CertifiedConstant:
    """Certified upper value of the series constant C_index (at modulus c).

    Sums scale * pbar(r) * e^{-alpha r} with exact counts up to an adaptive
    truncation R, then adds scale * int_R^inf e^{pi sqrt(t) - alpha t} dt,
    valid because the counts stay below e^{pi sqrt(r)} and the integrand
    decreases once R > (pi/(2 alpha))^2.  R grows until the tail drops below
    rel_tol of the partial sum.
    """
    with mp.workprec(prec + 20):
        alpha, scale = _series_params(index, c)
        r_min = int(mp.ceil((mp.pi / (2 * alpha)) ** 2)) + 1
        partial = mpf(0)
        r = 0
        chunk = max(64, r_min // 8)
        while True:
            hi = min(r + chunk, len(pbar) - 1)
            for i in range(r + 1, hi + 1):
                partial += pbar[i] * mp.exp(-alpha * i)
            r = hi
            if r >= r_min:
                tail = _tail_integral(r, alpha)
                if tail <= mpf(rel_tol) * partial:
                    break
            if r >= len(pbar) - 1:
                raise ValueError(
                    f"series for C{index} needs exact counts beyond r={r}; "
                    "supply a longer pbar sequence")
        partial *= scale
        tail *= scale
    with mp.workprec(prec):
        # pad the reported value by a few ulp so the certificate survives the
        # final rounding; the loosening is ~2^-156 relative
        upper = +(partial + tail)
        upper += abs(upper) * mpf(2) ** (4 - prec)
        return CertifiedConstant(index=index, c=c, upper=+upper,
                                 partial=+partial, tail_bound=+tail, truncation=r)


def cbar2(c: int, prec: int = DEFAULT_PRECISION) -> mpf:
    """Closed-form majorant of C2(c); enormous but certified for every c >= 3."""
    if c <= 2:
        raise ValueError("need c >= 3")
    with mp.workprec(prec):
        cc = mpf(c) * c
        return 2 * mp.exp(32 * cc * (16 * cc + (cc - 8) * mp.pi)
                          / (mp.pi ** 2 * (cc - 8) ** 2))


def cbar4(c: int, prec: int = DEFAULT_PRECISION) -> mpf:
    """Closed-form majorant of C4(c)."""
    if c <= 2:
        raise ValueError("need c >= 3")
    with mp.workprec(prec):
        cc = mpf(c) * c
        return mp.exp(4 * cc * (2 * cc + mp.pi) / mp.pi ** 2)


# ---------------------------------------------------------------------------
# Error pieces and their aggregation
# ---------------------------------------------------------------------------

@dataclass
class BoundBreakdown:
    c: int
    n: int
    pieces: dict[str, mpf] = field(default_factory=dict)
    total: mpf = mpf(0)


_PIECE_COEFS = {
    "S1": ("1496.9", 0.25, 1),
    "S2": ("3111.36", 0.25, 1),
    "S4": ("82469.8", 0.25, 1),
    "S7": ("0.9093", 0.875, 1),
    "S8": ("0.9093", 0.875, 1),
    "S2err": ("386.18", -0.25, 2),
    "S5err": ("772.36", -0.25, 2),
    "S6err": ("386.18", -0.25, 2),
    "I2err": ("1433.39", 0.25, 2),
    "I5err": ("2866.78", 0.25, 2),
    "I6err": ("1433.39", 0.25, 2),
}


def error_pieces(c: int, n: int, prec: int = DEFAULT_PRECISION) -> BoundBreakdown:
    """All fourteen error-piece bounds with the closed-form majorants plugged in."""
    if c <= 2:
        raise ValueError("need c >= 3")
    if n < 2:
        raise ValueError("need n >= 2")
    with mp.workprec(prec + 10):
        nn = mpf(n)
        pieces: dict[str, mpf] = {}
        for name, (coef, expo, cpow) in _PIECE_COEFS.items():
            pieces[name] = mpf(coef) * nn ** mpf(expo) * c ** cpow
        q4 = cbar4(c, prec + 10)
        q2 = cbar2(c, prec + 10)
        pieces["S3"] = mpf("1363.79") * q4 * nn ** mpf("0.25") * c
        pieces["S5"] = mpf("964.35") * q2 * nn ** mpf("0.25") * c
        pieces["S6"] = mpf("482.18") * q2 * nn ** mpf("0.25") * c
        total = sum(pieces.values())
    with mp.workprec(prec):
        return BoundBreakdown(c=c, n=n,
                              pieces={k: +v for k, v in pieces.items()},
                              total=+total)


def raw_error_aggregate(c: int, n: int, certified: dict[int, mpf],
                        prec: int = DEFAULT_PRECISION) -> mpf:
    """Sum of the un-simplified piece bounds with certified C-values plugged in.

    Uses the exact cotangent and logarithm factors, and the closed k-sum
    bound sum_k k^{-1/2} <= 2 n^{1/4}.  `certified` maps index -> upper value
    (from const_C or the closed-form majorants).
    """
    with mp.workprec(prec + 10):
        nn = mpf(n)
        pi = mp.pi
        cot = mp.cospi(mpf(1) / (2 * c)) / mp.sinpi(mpf(1) / (2 * c))
        ksum = 2 * nn ** mpf("0.25")
        e2pi = mp.exp(2 * pi)
        e2pi8 = mp.exp(2 * pi + pi / 8)
        logf = (1 + mp.log(mpf(c - 1) / 2)) / (pi * (1 - pi ** 2 / 24))
        s78 = (nn ** mpf("0.75") * mp.log(nn / 4)
               / (2 * pi * (1 - pi ** 2 / 24) * mp.sinpi(mpf(1) / c)))
        i_coef = (mpf(4) / 3 + 2 ** mpf("1.25")) * e2pi8 * cot * logf
        total = (
            4 * certified[3] * e2pi * cot * ksum                      # S1
            + 4 * certified[1] * e2pi * mp.sqrt(2) * cot * ksum       # S2
            + 2 * certified[4] * e2pi * cot * ksum                    # S3
            + certified[5] * e2pi * cot * ksum                        # S4
            + certified[2] * e2pi * mp.sqrt(2) * cot * ksum           # S5
            + certified[2] * e2pi / mp.sqrt(2) * cot * ksum           # S6
            + 2 * s78                                                 # S7 + S8
            + 4 * mp.sqrt(2) * e2pi8 * cot * logf / mp.sqrt(nn) * ksum  # S2,5,6 err
            + 8 * mp.sqrt(2) * i_coef * nn ** mpf("0.25")             # I2,5,6 err
        )
    with mp.workprec(prec):
        return +total


def main_term_bound(c: int, n: int, prec: int = DEFAULT_PRECISION) -> mpf:
    """Envelope for the two main sums of the deviation coefficient."""
    with mp.workprec(prec + 10):
        nn = mpf(n)
        s = mp.sqrt(nn)
        out = (mpf("0.1624") * mp.exp(mp.pi * s / c) * nn ** mpf("0.25") * c
               + (mpf("0.0266") * c + mpf("0.2123"))
               * mp.exp(mp.pi * s * (1 - mpf(4) / c)) * nn ** mpf("0.25") * c)
    with mp.workprec(prec):
        return +out


def error_term_bound(c: int, n: int, prec: int = DEFAULT_PRECISION) -> mpf:
    """Aggregated error envelope; equals the sum of the fourteen pieces."""
    with mp.workprec(prec + 10):
        nn = mpf(n)
        out = (mpf("1544.72") * nn ** mpf("-0.25") * c * c
               + mpf("87078.1") * nn ** mpf("0.25") * c
               + mpf("5733.56") * nn ** mpf("0.25") * c * c
               + mpf("1.8186") * nn ** mpf("0.875") * c
               + mpf("1363.79") * cbar4(c, prec + 10) * nn ** mpf("0.25") * c
               + mpf("1446.53") * cbar2(c, prec + 10) * nn ** mpf("0.25") * c)
    with mp.workprec(prec):
        return +out


# ---------------------------------------------------------------------------
# Deviation ratio R_c and thresholds
# ---------------------------------------------------------------------------

def r_ratio(c: int, n: int, prec: int = DEFAULT_PRECISION) -> mpf:
    """Deviation envelope |N(a,c,n)/pbar(n) - 1/c| <= R_c(n), as tabulated."""
    return r_ratio_components(c, n, prec)["value"]


def r_ratio_components(c: int, n: int, prec: int = DEFAULT_PRECISION) -> dict[str, mpf]:
    if c < 3:
        raise ValueError("need c >= 3")
    if n < 2:
        raise ValueError("need n >= 2")
    with mp.workprec(prec + 10):
        nn = mpf(n)
        s = mp.sqrt(nn)
        epi = mp.exp(-mp.pi * s)
        out: dict[str, mpf] = {}
        if c == 3:
            val = (mpf("13.32") * mp.exp(-2 * mp.pi * s / 3) * nn ** mpf("1.25")
                   + 24 * mp.exp(-mpf(4) / 3 * mp.pi * s) * nn ** mpf("1.25")
                   + epi * (mpf("379816.2") * nn ** mpf("0.75")
                            + mpf("5.3711e57") * nn ** mpf("1.25")
                            + mpf("149.07") * nn ** mpf("1.875")))
        elif c == 4:
            val = (mpf("17.76") * mp.exp(-3 * mp.pi * s / 4) * nn ** mpf("1.25")
                   + epi * (mpf("675228.9") * nn ** mpf("0.75")
                            + mpf("6.9244e18") * nn ** mpf("1.25")
                            + mpf("198.76") * nn ** mpf("1.875")))
        elif c == 5:
            val = (mpf("69.5") * mp.exp(-4 * mp.pi * s / 5) * nn ** mpf("1.25")
                   + epi * (mpf("1.0551e6") * nn ** mpf("0.75")
                            + mpf("7.4708e24") * nn ** mpf("1.25")
                            + mpf("248.45") * nn ** mpf("1.875")))
        else:
            val = (mpf(37259) * c * cbar4(c, prec + 10)
                   * mp.exp(-4 * mp.pi * s / c) * nn ** mpf("1.25")
                   + mpf("49.69") * c * epi * nn ** mpf("1.875"))
            # tighter piecewise aggregate kept as a side channel
            out["tighter"] = (
                mpf("4.44") * c * mp.exp((mpf(1) / c - 1) * mp.pi * s) * nn ** mpf("1.25")
                + (mpf("0.73") * c + mpf("5.81")) * c
                * mp.exp(-4 * mp.pi * s / c) * nn ** mpf("1.25")
                + epi * (mpf("42201.8") * c * c * nn ** mpf("0.75")
                         + mpf(156641) * c * c * nn ** mpf("1.25")
                         + mpf("2.379e6") * c * nn ** mpf("1.25")
                         + mpf("49.69") * c * nn ** mpf("1.875")
                         + mpf("37258.7") * c * cbar4(c, prec + 10) * nn ** mpf("1.25")
                         + mpf("39519.2") * c * cbar2(c, prec + 10) * nn ** mpf("1.25")))
        out["value"] = val
    with mp.workprec(prec):
        return {k: +v for k, v in out.items()}


def m_c(c: int, prec: int = DEFAULT_PRECISION) -> mpf:
    """Threshold beyond which the generic sandwich (1/2c, 3/2c) is certified."""
    if c < 6:
        raise ValueError("need c >= 6")
    with mp.workprec(prec):
        cc = mpf(c) * c
        return (mpf("1.691e13") * mpf(c) ** 20
                * mp.exp(16 * cc * (2 * cc + mp.pi) / mp.pi ** 2))


def m_c_prime(c: int, prec: int = DEFAULT_PRECISION) -> mpf:
    """Companion polynomial threshold; m_c dominates it for every c >= 6."""
    if c < 6:
        raise ValueError("need c >= 6")
    with mp.workprec(prec):
        return mpf("5.544e21") * mpf(c) ** 16


def pbar_sandwich(n: int, prec: int = DEFAULT_PRECISION) -> tuple[mpf, mpf]:
    """Two-sided envelope (1/8n)(1 -+ 1/sqrt n)e^{pi sqrt n} for the count.

    Degenerate-but-valid lower bound 0 at n = 1.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    with mp.workprec(prec + 10):
        s = mp.sqrt(mpf(n))
        base = mp.exp(mp.pi * s) / (8 * n)
        lo, hi = base * (1 - 1 / s), base * (1 + 1 / s)
    with mp.workprec(prec):
        return +lo, +hi


@dataclass(frozen=True)
class Threshold:
    c: int
    lower_coef: mpf
    upper_coef: mpf
    n_min: int


_EXPLICIT_THRESHOLDS = {
    3: ("0.0019", "0.6648", 2089),
    4: ("0.0091", "0.4909", 272),
    5: ("0.0103", "0.3897", 449),
}


def sandwich_threshold(c: int, prec: int = DEFAULT_PRECISION) -> Threshold:
    """Per-modulus sandwich row: lower * pbar < N(a,c,n) < upper * pbar for n >= n_min."""
    if c < 3:
        raise ValueError("need c >= 3")
    with mp.workprec(prec):
        if c in _EXPLICIT_THRESHOLDS:
            lo, hi, nmin = _EXPLICIT_THRESHOLDS[c]
            return Threshold(c=c, lower_coef=mpf(lo), upper_coef=mpf(hi), n_min=nmin)
        nmin = int(mp.ceil(m_c(c, prec)))
        return Threshold(c=c, lower_coef=1 / mpf(2 * c), upper_coef=3 / mpf(2 * c),
                         n_min=nmin)


# ---------------------------------------------------------------------------
# Auxiliary inequality self-test
# ---------------------------------------------------------------------------

def aux_inequalities_selftest(pbar: Sequence[int] | None = None,
                              prec: int = DEFAULT_PRECISION) -> dict[str, dict]:
    """Grid-verify the scalar inequalities the envelopes rest on.

    Returns name -> {passed, worst_margin, grid} entries; failures are report
    entries, never exceptions.  `pbar` (exact counts, length >= 201) enables
    the series-versus-closed-form check.
    """
    report: dict[str, dict] = {}

    def record(name: str, margins: list, grid: str, strict: bool = True) -> None:
        # non-strict inequalities may touch equality on the grid (e.g. x = 1)
        worst = min(margins)
        passed = worst > 0 if strict else worst >= 0
        report[name] = {"passed": bool(passed), "worst_margin": float(worst),
                        "grid": grid}

    with mp.workprec(prec):
        pi = mp.pi

        # log x <= a (x^{1/a} - 1) for a, x > 0
        margins = []
        for a in (1, 2, 4, 8, 16):
            for i in range(1, 1001):
                x = mpf(i) / 20  # x in (0, 50]
                margins.append(a * (x ** (mpf(1) / a) - 1) - mp.log(x))
        record("log_power_bound", margins, "a in {1,2,4,8,16}, x in (0,50]", strict=False)

        # cot(pi/2c) <= 2c/pi
        margins = [2 * mpf(c) / pi - mp.cospi(mpf(1) / (2 * c)) / mp.sinpi(mpf(1) / (2 * c))
                   for c in range(3, 33)]
        record("cot_linear_bound", margins, "c in 3..32", strict=False)

        # (1 + log((c-1)/2)) / (pi (1 - pi^2/24)) < 0.2704 c
        margins = [mpf("0.2704") * c - (1 + mp.log(mpf(c - 1) / 2)) / (pi * (1 - pi ** 2 / 24))
                   for c in range(3, 33)]
        record("log_factor_linear", margins, "c in 3..32")

        # e^{-x} / (1 - e^{-x})^2 < (1 + x)/x^2
        margins = []
        for i in range(1, 1001):
            x = mpf(i) / 20
            ex = mp.exp(-x)
            margins.append((1 + x) / (x * x) - ex / (1 - ex) ** 2)
        record("exp_square_ratio", margins, "x in (0,50]")

        # sum p(n) e^{-2 pi n y} <= exp(2 e^{-2 pi y} / (1 - e^{-2 pi y})^2)
        if pbar is not None and len(pbar) >= 201:
            margins = []
            ys = [Fraction(c * c - 8, 32 * c * c) for c in range(3, 9)]
            ys += [Fraction(1, 4 * c * c) for c in range(3, 9)]
            for y in ys:
                yv = mpf(y.numerator) / y.denominator
                partial = sum(pbar[nn] * mp.exp(-2 * pi * nn * yv) for nn in range(201))
                q = mp.exp(-2 * pi * yv)
                margins.append(mp.exp(2 * q / (1 - q) ** 2) - partial)
            record("series_closed_form", margins,
                   "200-term partial sums, y from both substitution families",
                   strict=False)

        # e^x > (1 + x/y)^y
        margins = []
        for y in (mpf("0.5"), 1, 2, 3, 4, 8):
            for i in range(1, 501):
                x = mpf(i) / 10
                margins.append(mp.exp(x) - (1 + x / y) ** y)
        record("exp_vs_power", margins, "y in {0.5,1,2,3,4,8}, x in (0,50]")

        # sum_{k <= sqrt n} k^{-1/2} <= 2 n^{1/4}
        margins = []
        for n in (2, 4, 9, 16, 50, 100, 500, 1000, 5000, 10000):
            ssum = sum(1 / mp.sqrt(k) for k in range(1, isqrt(n) + 1))
            margins.append(2 * mpf(n) ** mpf("0.25") - ssum)
        record("sqrt_partial_sum", margins, "n in {2,...,10000}", strict=False)

        # sin(pi/c) >= 2/c
        margins = [mp.sinpi(mpf(1) / c) - mpf(2) / c for c in range(3, 33)]
        record("sin_lower_bound", margins, "c in 3..32", strict=False)

    return report
