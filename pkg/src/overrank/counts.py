"""Exact overpartition counting: p-bar series, rank-class tables, oracles.

An overpartition of n is an ordinary partition in which the first occurrence
of each distinct part value may be overlined.  Overlining never changes the
largest part or the number of parts, so the rank (largest part minus number
of parts) of an overpartition is the rank of its underlying partition, and
every underlying partition with d distinct part values accounts for 2^d
overpartitions.  All counts in this module are exact Python integers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from math import gcd

from mpmath import mp, mpc, mpf

__all__ = [
    "BRUTE_FORCE_LIMIT",
    "RankClassTable",
    "RankDistribution",
    "a_exact",
    "brute_force_rank_counts",
    "load_table",
    "orthogonality_residue",
    "pbar_series",
    "rank_class_table",
    "save_table",
    "verify_orthogonality",
]

# Enumeration guard for the brute-force oracle; p(40) is already ~4e4 partitions.
BRUTE_FORCE_LIMIT = 30

TABLE_FORMAT_VERSION = 1


def pbar_series(n_max: int) -> list[int]:
    """Coefficients of prod_{v>=1} (1+q^v)/(1-q^v) through degree n_max.

    Entry n is the number of overpartitions of n.  Plain truncated product:
    one ascending and one descending in-place pass per factor, all integer.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    f = [0] * (n_max + 1)
    f[0] = 1
    for v in range(1, n_max + 1):
        # multiply by (1 + q^v)
        for k in range(n_max, v - 1, -1):
            f[k] += f[k - v]
        # multiply by 1/(1 - q^v)
        for k in range(v, n_max + 1):
            f[k] += f[k - v]
    return f


@dataclass
class RankDistribution:
    """Exact rank counts for a single n: entries[m] overpartitions of rank m."""

    n: int
    entries: dict[int, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.entries.values())

    def fold(self, c: int) -> list[int]:
        """Collapse ranks into residue classes mod c."""
        out = [0] * c
        for m, w in self.entries.items():
            out[m % c] += w
        return out


def brute_force_rank_counts(n: int, limit: int = BRUTE_FORCE_LIMIT) -> RankDistribution:
    """Oracle: enumerate every partition of n, weight 2^{#distinct parts}.

    Independent of the table DP; kept deliberately naive.  Rejects n above
    `limit` because the enumeration grows superpolynomially.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > limit:
        raise ValueError(f"n={n} exceeds the enumeration guard ({limit})")
    dist = RankDistribution(n)
    if n == 0:
        dist.entries[0] = 1
        return dist

    entries = dist.entries

    def rec(remaining: int, max_part: int, largest: int, parts: int, distinct: int) -> None:
        if remaining == 0:
            m = largest - parts
            entries[m] = entries.get(m, 0) + (1 << distinct)
            return
        for part in range(min(remaining, max_part), 0, -1):
            total = part
            mult = 1
            while total <= remaining:
                rec(remaining - total, part - 1,
                    largest if largest else part, parts + mult, distinct + 1)
                mult += 1
                total += part

    rec(n, n, 0, 0, 0)
    return dist


@dataclass
class RankClassTable:
    """Exact table of rank-class counts: counts[n][r] for 0 <= n <= n_max, r mod c.

    Built once by `rank_class_table`; treated as immutable afterwards, so it
    may be shared freely across worker processes or threads.
    """

    c: int
    n_max: int
    counts: list[list[int]]

    def row(self, n: int) -> list[int]:
        return self.counts[n]

    def count(self, a: int, n: int) -> int:
        return self.counts[n][a % self.c]

    def row_sum(self, n: int) -> int:
        return sum(self.counts[n])

    def checksum(self) -> str:
        """SHA-256 over the decimal count stream; also stored in cache files."""
        h = hashlib.sha256()
        h.update(f"{TABLE_FORMAT_VERSION}:{self.c}:{self.n_max}".encode())
        for row in self.counts:
            for v in row:
                h.update(str(v).encode())
                h.update(b",")
        return h.hexdigest()


def rank_class_table(n_max: int, c: int) -> RankClassTable:
    """Count overpartitions of each n <= n_max by rank residue mod c.

    DP over the largest part v.  State: partitions using parts < v, keyed by
    (sum, number-of-parts mod c); each part value present picks up the
    overline factor 2.  For largest part exactly v with multiplicity m >= 1
    and w = (#parts) mod c, the rank class is (v - w) mod c.  The geometric
    recurrence over m keeps the whole build at O(c * n_max^2) integer adds.
    """
    if c < 2:
        raise ValueError("modulus c must be >= 2")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    N = n_max + 1
    # column layout during the build: cls[t][s], prefix[t][s]
    cls = [[0] * N for _ in range(c)]
    cls[0][0] = 1  # empty overpartition has rank 0
    prefix = [[0] * N for _ in range(c)]
    prefix[0][0] = 1
    for v in range(1, N):
        # G[w][s] = sum_{m>=1} prefix[(w-m) mod c][s - m*v]
        G = [[0] * N for _ in range(c)]
        for s in range(v, N):
            sv = s - v
            for w in range(c):
                wp = (w - 1) % c
                G[w][s] = prefix[wp][sv] + G[wp][sv]
        for w in range(c):
            dst = cls[(v - w) % c]
            src = G[w]
            for s in range(v, N):
                g = src[s]
                if g:
                    dst[s] += g + g
        for w in range(c):
            dst = prefix[w]
            src = G[w]
            for s in range(v, N):
                g = src[s]
                if g:
                    dst[s] += g + g
    counts = [[cls[r][n] for r in range(c)] for n in range(N)]
    return RankClassTable(c=c, n_max=n_max, counts=counts)


# ---------------------------------------------------------------------------
# Root-of-unity evaluations and the exact orthogonality check
# ---------------------------------------------------------------------------

def a_exact(j: int, c: int, n: int, table: RankClassTable, prec: int = 160) -> mpc:
    """Evaluate sum_r counts[n][r] * zeta_c^{j r} in high precision.

    The integers in the table may need more mantissa bits than `prec`; the
    evaluation runs at enough bits to represent them exactly and rounds only
    at the end, so precision is never silently lost to the data.
    """
    if table.c != c:
        raise ValueError("table modulus mismatch")
    if not 0 <= j < c:
        raise ValueError("j out of range")
    if not 0 <= n <= table.n_max:
        raise ValueError("n out of table range")
    row = table.counts[n]
    data_bits = max(v.bit_length() for v in row)
    work = max(prec, data_bits + prec // 2 + 16)
    with mp.workprec(work):
        total = mpc(0)
        for r, v in enumerate(row):
            if v:
                total += v * mp.expjpi(mpf(2 * ((j * r) % c)) / c)
    with mp.workprec(prec):
        return +total


def _poly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_mod(p: list[int], d: list[int]) -> list[int]:
    """Remainder of integer polynomial p modulo monic d (exact division)."""
    p = list(p)
    dn = len(d) - 1
    assert d[-1] == 1
    for i in range(len(p) - 1, dn - 1, -1):
        coef = p[i]
        if coef:
            p[i] = 0
            for j in range(dn):
                p[i - dn + j] -= coef * d[j]
    return p[:dn] if dn > 0 else []


def _cyclotomic(c: int) -> list[int]:
    """Integer coefficients of the c-th cyclotomic polynomial."""
    # Phi_c = (x^c - 1) / prod_{d | c, d < c} Phi_d, computed by exact division.
    num = [-1] + [0] * (c - 1) + [1]
    den = [1]
    for d in range(1, c):
        if c % d == 0:
            den = _poly_mul(den, _cyclotomic(d))
    # divide num by den (both monic up to sign handling; den is monic)
    out = [0] * (len(num) - len(den) + 1)
    rem = list(num)
    for i in range(len(out) - 1, -1, -1):
        coef = rem[i + len(den) - 1]
        out[i] = coef
        if coef:
            for j, b in enumerate(den):
                rem[i + j] -= coef * b
    assert not any(rem), "cyclotomic division must be exact"
    return out


def orthogonality_residue(a: int, c: int, n: int, table: RankClassTable,
                          pbar: int | None = None) -> list[int]:
    """Exact cyclotomic residue of the root-of-unity reconstruction identity.

    Collect pbar + sum_{j=1}^{c-1} zeta^{-aj} * (sum_r counts[n][r] zeta^{jr})
    as an integer vector over powers of zeta, subtract c * counts[n][a], and
    reduce modulo the c-th cyclotomic polynomial.  All-zero residue means the
    reconstruction returns the table entry exactly.  No floating point.

    The collapse sum_j zeta^{j(r-a)} = c*[r == a] is an identity in the class
    counts, so with the default pbar (the row sum itself) the residue checks
    the cyclotomic machinery; supplying an independently computed total count
    turns it into an effective conservation check as well.
    """
    if not 0 <= a < c:
        raise ValueError("a out of range")
    row = table.counts[n]
    vec = [0] * c
    for j in range(1, c):
        for r, v in enumerate(row):
            if v:
                vec[(j * (r - a)) % c] += v
    vec[0] += sum(row) if pbar is None else pbar
    vec[0] -= c * row[a % c]
    return _poly_mod(vec, _cyclotomic(c))


def verify_orthogonality(a: int, c: int, n: int, table: RankClassTable,
                         pbar: int | None = None) -> bool:
    """True iff the exact orthogonality reconstruction matches the table."""
    return not any(orthogonality_residue(a, c, n, table, pbar))


# ---------------------------------------------------------------------------
# Cache file: versioned text format, one line per (n, r, count), checksummed
# ---------------------------------------------------------------------------

def save_table(table: RankClassTable, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"rank-class-table format_version={TABLE_FORMAT_VERSION} "
                 f"c={table.c} n_max={table.n_max}\n")
        for n in range(table.n_max + 1):
            for r in range(table.c):
                fh.write(f"{n} {r} {table.counts[n][r]}\n")
        fh.write(f"checksum sha256:{table.checksum()}\n")


def load_table(path) -> RankClassTable:
    """Reload a cached table; raises ValueError on any corruption."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != "rank-class-table":
            raise ValueError("not a rank-class table cache file")
        fields = dict(part.split("=") for part in header[1:])
        if int(fields["format_version"]) != TABLE_FORMAT_VERSION:
            raise ValueError("unsupported cache format version")
        c = int(fields["c"])
        n_max = int(fields["n_max"])
        counts = [[0] * c for _ in range(n_max + 1)]
        seen = 0
        checksum_line = None
        for line in fh:
            if line.startswith("checksum"):
                checksum_line = line.strip()
                break
            n_s, r_s, v_s = line.split()
            counts[int(n_s)][int(r_s)] = int(v_s)
            seen += 1
        if seen != (n_max + 1) * c:
            raise ValueError("cache file truncated")
        table = RankClassTable(c=c, n_max=n_max, counts=counts)
        if checksum_line != f"checksum sha256:{table.checksum()}":
            raise ValueError("cache checksum mismatch")
        return table
