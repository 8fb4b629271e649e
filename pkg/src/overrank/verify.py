"""Exhaustive and analytic verification of strict log-subadditivity.

The target inequality is count(a,c,n1+n2) < count(a,c,n1) * count(a,c,n2).
`verify_subadditivity` checks it with exact integer arithmetic over every
unordered pair in a range and emits a deterministic, reproducible
Certificate.  The analytic side (`t_inequality`, `monotonicity_probe`,
`threshold_scan`) covers the crossing bounds that extend the finite checks.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from mpmath import mp, mpf

from .bounds import r_ratio, sandwich_threshold
from .counts import RankClassTable
from .modsums import DEFAULT_PRECISION

__all__ = [
    "Certificate",
    "TInequalityResult",
    "monotonicity_probe",
    "parse_certificate",
    "t_generic_chain",
    "t_inequality",
    "threshold_scan",
    "verify_subadditivity",
]

CERTIFICATE_SCHEMA = 1


@dataclass
class Certificate:
    """Reproducible record of one exhaustive subadditivity sweep."""

    c: int
    a: int
    n_lo: int
    n_hi: int
    pairs_checked: int
    violations: list[tuple[int, int, int, int]]  # (n1, n2, lhs, rhs), sorted
    min_margin: Fraction | None  # smallest rhs/lhs over pairs with lhs > 0
    table_checksum: str
    schema_version: int = CERTIFICATE_SCHEMA

    def serialize(self) -> str:
        lines = [
            f"certificate schema={self.schema_version} c={self.c} a={self.a} "
            f"n_lo={self.n_lo} n_hi={self.n_hi} pairs={self.pairs_checked} "
            f"violations={len(self.violations)} table_sha256={self.table_checksum}"
        ]
        if self.min_margin is None:
            lines.append("min_margin none")
        else:
            lines.append(f"min_margin {self.min_margin.numerator}/"
                         f"{self.min_margin.denominator}")
        for n1, n2, lhs, rhs in self.violations:
            lines.append(f"violation {n1} {n2} {lhs} {rhs}")
        lines.append("end")
        return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    lines = text.strip().splitlines()
    head = dict(part.split("=") for part in lines[0].split()[1:])
    mm_line = lines[1].split()
    if mm_line[1] == "none":
        mm = None
    else:
        num, den = mm_line[1].split("/")
        mm = Fraction(int(num), int(den))
    violations = []
    for line in lines[2:]:
        if line == "end":
            break
        _, n1, n2, lhs, rhs = line.split()
        violations.append((int(n1), int(n2), int(lhs), int(rhs)))
    return Certificate(c=int(head["c"]), a=int(head["a"]), n_lo=int(head["n_lo"]),
                       n_hi=int(head["n_hi"]), pairs_checked=int(head["pairs"]),
                       violations=violations, min_margin=mm,
                       table_checksum=head["table_sha256"],
                       schema_version=int(head["schema"]))


def _log2_int(v: int) -> float:
    """log2 of a positive integer without float overflow."""
    nbits = v.bit_length()
    if nbits <= 53:
        return math.log2(v)
    return math.log2(v >> (nbits - 53)) + (nbits - 53)


# worker globals for fork-based parallel sweeps
_W_VALS: list[int] = []
_W_LOGS: list[float] = []


def _init_worker(vals: list[int], logs: list[float]) -> None:
    global _W_VALS, _W_LOGS
    _W_VALS, _W_LOGS = vals, logs


def _sweep_rows(args):
    """One row block of the (n1 <= n2) triangle; order-independent result."""
    rows, n_lo, n_hi = args
    vals, logs = _W_VALS, _W_LOGS
    violations = []
    best_log = math.inf
    candidates: list[tuple[int, int]] = []
    for n1 in rows:
        v1 = vals[n1]
        l1 = logs[n1]
        for n2 in range(n1, n_hi + 1):
            lhs = vals[n1 + n2]
            rhs = v1 * vals[n2]
            if lhs >= rhs:
                violations.append((n1, n2, lhs, rhs))
            if lhs:
                lg = l1 + logs[n2] - logs[n1 + n2]
                if lg < best_log + 1e-9:
                    if lg < best_log - 1e-9:
                        candidates = [(n1, n2)]
                        best_log = min(best_log, lg)
                    else:
                        candidates.append((n1, n2))
                        best_log = min(best_log, lg)
    # exact minimum over the float-near-minimal candidates
    best: Fraction | None = None
    for n1, n2 in candidates:
        m = Fraction(vals[n1] * vals[n2], vals[n1 + n2])
        if best is None or m < best:
            best = m
    return violations, best


def verify_subadditivity(table: RankClassTable, a: int, n_lo: int, n_hi: int,
                         jobs: int = 1) -> Certificate:
    """Exact sweep of count(a,c,n1+n2) < count(a,c,n1)*count(a,c,n2).

    Covers every unordered pair n_lo <= n1 <= n2 <= n_hi; the table must
    reach 2*n_hi.  Margins are tracked with a float prefilter and settled
    exactly, so certificates are identical regardless of `jobs`.
    """
    c = table.c
    if not 0 <= a < c:
        raise ValueError("residue a out of range")
    if not 1 <= n_lo <= n_hi:
        raise ValueError("need 1 <= n_lo <= n_hi")
    if table.n_max < 2 * n_hi:
        raise ValueError(f"table reaches n={table.n_max}, need {2 * n_hi}")
    vals = [table.counts[n][a] for n in range(2 * n_hi + 1)]
    logs = [(_log2_int(v) if v else -math.inf) for v in vals]
    all_rows = list(range(n_lo, n_hi + 1))
    if jobs <= 1:
        _init_worker(vals, logs)
        results = [_sweep_rows((all_rows, n_lo, n_hi))]
    else:
        # interleaved row blocks balance the triangle's shrinking rows
        blocks = [all_rows[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(vals, logs)) as pool:
            results = list(pool.map(_sweep_rows,
                                    [(b, n_lo, n_hi) for b in blocks]))
    violations: list[tuple[int, int, int, int]] = []
    min_margin: Fraction | None = None
    for viols, best in results:
        violations.extend(viols)
        if best is not None and (min_margin is None or best < min_margin):
            min_margin = best
    violations.sort()
    width = n_hi - n_lo + 1
    return Certificate(c=c, a=a, n_lo=n_lo, n_hi=n_hi,
                       pairs_checked=width * (width + 1) // 2,
                       violations=violations, min_margin=min_margin,
                       table_checksum=table.checksum())


# ---------------------------------------------------------------------------
# Analytic crossing inequalities
# ---------------------------------------------------------------------------

class TInequalityResult(NamedTuple):
    holds: bool
    margin: mpf


_T_VARIANTS = ("explicit_c3", "explicit_c4", "explicit_c5", "generic")


def _s_factor(n1):
    return mp.log((1 + 1 / mp.sqrt(2 * n1)) / (1 - 1 / mp.sqrt(n1)) ** 2)


def t_inequality(n1: int, c: int, variant: str,
                 prec: int = DEFAULT_PRECISION) -> TInequalityResult:
    """Exponent-gap inequality at equal arguments: T(1) > log V + log S.

    T(1) = 2 pi sqrt(n1) - pi sqrt(2 n1).  The explicit variants plug the
    per-modulus sandwich coefficients into V = upper*8*n1/lower^2; the
    generic variant uses V = 48*c*n1.
    """
    if variant not in _T_VARIANTS:
        raise ValueError(f"variant must be one of {_T_VARIANTS}")
    if n1 < 2:
        raise ValueError("need n1 >= 2")
    with mp.workprec(prec):
        x = mpf(n1)
        lhs = 2 * mp.pi * mp.sqrt(x) - mp.pi * mp.sqrt(2 * x)
        if variant == "generic":
            rhs = mp.log(48 * c * x) + _s_factor(x)
        else:
            th = sandwich_threshold(int(variant[-1]), prec)
            rhs = mp.log(th.upper_coef * 8 * x / th.lower_coef ** 2) + _s_factor(x)
        margin = lhs - rhs
        return TInequalityResult(holds=bool(margin > 0), margin=+margin)


def t_generic_chain(n1: int, c: int, prec: int = DEFAULT_PRECISION) -> dict:
    """Relaxation chain behind the generic variant for large-threshold moduli.

    For n1 >= 2 the right side relaxes to log(840 c n1); once
    n1 >= (840 c)^2 the gap inequality follows from T(1) > 2 log(n1).
    """
    with mp.workprec(prec):
        x = mpf(n1)
        lhs = 2 * mp.pi * mp.sqrt(x) - mp.pi * mp.sqrt(2 * x)
        rhs_full = mp.log(48 * c * x) + _s_factor(x)
        rhs_relaxed = mp.log(840 * c * x)
        threshold = (840 * c) ** 2
        return {
            "lhs": +lhs,
            "rhs_full": +rhs_full,
            "rhs_relaxed": +rhs_relaxed,
            "relaxation_valid": bool(rhs_full < rhs_relaxed),
            "threshold": threshold,
            "beyond_threshold": n1 >= threshold,
            "lhs_exceeds_2log": bool(lhs > 2 * mp.log(x)),
            "two_log_covers": bool(2 * mp.log(x) >= rhs_relaxed) if n1 >= threshold else None,
        }


def monotonicity_probe(c: int, which: str, prec: int = DEFAULT_PRECISION) -> dict:
    """Numeric scan of the C-dependence of the crossing functions on [1, 100].

    T must increase and S decrease in the ratio C = n2/n1; V and W stay below
    their frozen caps.  Returns a report dict, raises nothing.
    """
    if which not in ("T_in_C", "S_in_C"):
        raise ValueError("which must be 'T_in_C' or 'S_in_C'")
    if c < 3:
        raise ValueError("need c >= 3")
    report = {"c": c, "which": which, "monotone": True, "v_capped": True,
              "w_capped": True, "samples": 0}
    with mp.workprec(prec):
        grid = [mpf(10) ** (mpf(i) / 16) for i in range(33)]  # C in [1, 100]
        for n1 in (50, 100, 1000):
            x = mpf(n1)
            prev = None
            for C in grid:
                T = mp.pi * (mp.sqrt(x) + mp.sqrt(C * x)) - mp.pi * mp.sqrt(x + C * x)
                S = ((1 + 1 / mp.sqrt(x + C * x))
                     / ((1 - 1 / mp.sqrt(x)) * (1 - 1 / mp.sqrt(C * x))))
                V = mpf("0.6648") * 8 * C * x / (mpf("0.0019") ** 2 * (C + 1))
                W = 48 * c * C * x / (C + 1)
                val = T if which == "T_in_C" else S
                if prev is not None:
                    step_ok = val > prev if which == "T_in_C" else val < prev
                    if not step_ok:
                        report["monotone"] = False
                prev = val
                if V >= mpf("0.6648") * 8 * x / mpf("0.0019") ** 2:
                    report["v_capped"] = False
                if W >= 48 * c * x:
                    report["w_capped"] = False
                report["samples"] += 1
    return report


def threshold_scan(c: int, target, n_cap: int = 10 ** 12,
                   prec: int = DEFAULT_PRECISION) -> int:
    """Minimal n with r_ratio(c, n) < target, by doubling plus bisection.

    Relies on the (separately verified) eventual monotone decrease of the
    ratio; raises if the target is not reached below n_cap.
    """
    target = mpf(target)
    if target <= 0:
        raise ValueError("target must be positive")
    lo = 2
    if r_ratio(c, lo, prec) < target:
        return lo
    hi = 4
    while r_ratio(c, hi, prec) >= target:
        hi *= 2
        if hi > n_cap:
            raise ValueError(f"target {target} not reached below n={n_cap}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if r_ratio(c, mid, prec) < target:
            hi = mid
        else:
            lo = mid
    return hi
