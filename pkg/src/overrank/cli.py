"""Command-line front end: exact counts, asymptotics, bounds, certificates.

Every flag can also be supplied through an OVERRANK_-prefixed environment
variable (flag --n-max -> OVERRANK_N_MAX, and so on); explicit flags win.
Exit codes: 0 all verdicts pass, 1 violations or inconclusive verdicts
present, 2 usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from mpmath import mp, mpf

from . import __version__
from .asymptotic import a_asymptotic, engel_pbar
from .bounds import (aux_inequalities_selftest, error_pieces, error_term_bound,
                     m_c, m_c_prime, main_term_bound, r_ratio, sandwich_threshold,
                     strict_verdict)
from .counts import a_exact, load_table, pbar_series, rank_class_table, save_table
from .report import Report, RunConfig, fmt_value
from .verify import verify_subadditivity

ENV_PREFIX = "OVERRANK_"


def _env_default(flag: str):
    return os.environ.get(ENV_PREFIX + flag.replace("-", "_").upper())


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-max", type=int, default=_env_default("n-max") or 3000,
                   help="table depth for exact computations (default 3000)")
    p.add_argument("--precision", type=int,
                   default=_env_default("precision") or 160,
                   help="working precision in mantissa bits (default 160)")
    p.add_argument("--cache", default=_env_default("cache"),
                   help="path of the rank-class table cache file")
    p.add_argument("--jobs", type=int, default=_env_default("jobs") or 1,
                   help="worker processes for sweeps (default 1)")
    p.add_argument("--report", default=_env_default("report"),
                   help="write the full report to this path")
    p.add_argument("--format", choices=("text", "json-lines"),
                   default=_env_default("format") or "text",
                   help="report format (default text)")


def _config(args) -> RunConfig:
    return RunConfig(precision_bits=int(args.precision), n_max=int(args.n_max),
                     cache_path=args.cache, parallelism=int(args.jobs))


def _get_table(cfg: RunConfig, c: int, need_n: int):
    """Load the cached table when usable, else build (and cache when asked)."""
    if cfg.cache_path and Path(cfg.cache_path).exists():
        table = load_table(cfg.cache_path)
        if table.c != c:
            raise ValueError(f"cache holds modulus {table.c}, need {c}")
        if table.n_max < need_n:
            raise ValueError(f"cache reaches n={table.n_max}, need {need_n}")
        return table
    # a cached build covers the configured depth so later commands can reuse it
    depth = max(need_n, cfg.n_max) if cfg.cache_path else need_n
    table = rank_class_table(depth, c)
    if cfg.cache_path:
        save_table(table, cfg.cache_path)
    return table


def _emit(report: Report, args) -> None:
    text = report.to_json_lines() if args.format == "json-lines" else report.to_text()
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def cmd_count(args) -> int:
    cfg = _config(args)
    report = Report(command="count", config=cfg)
    n = args.n
    report.inputs = {"n": n, "c": args.c, "a": args.a}
    if n > cfg.n_max:
        raise ValueError(f"n={n} exceeds --n-max={cfg.n_max}")
    t0 = time.perf_counter()
    if args.c is None:
        series = pbar_series(n)
        report.add("count", kind="pbar", n=n, value=str(series[n]))
    else:
        table = _get_table(cfg, args.c, n)
        if args.a is None:
            for r in range(args.c):
                report.add("count", kind="rank_class", n=n, c=args.c, a=r,
                           value=str(table.counts[n][r]))
        else:
            report.add("count", kind="rank_class", n=n, c=args.c, a=args.a,
                       value=str(table.counts[n][args.a % args.c]))
    report.timings["total_s"] = round(time.perf_counter() - t0, 6)
    _emit(report, args)
    return 0


def cmd_asymptotic(args) -> int:
    cfg = _config(args)
    prec = cfg.precision_bits
    report = Report(command="asymptotic", config=cfg)
    a, c, n = args.a, args.c, args.n
    report.inputs = {"a": a, "c": c, "n": n}
    t0 = time.perf_counter()
    est = a_asymptotic(a, c, n, prec=prec)
    row = {"estimate": fmt_value(est.value),
           "imag_residual": fmt_value(est.imag_residual),
           "precision_bits": est.precision_bits,
           "k_terms": len(est.k_terms)}
    verdicts = []
    if n <= cfg.n_max:
        table = _get_table(cfg, c, n)
        exact = a_exact(a, c, n, table, prec=prec)
        diff = abs(exact.real - est.value)
        row["exact"] = fmt_value(exact.real)
        row["abs_deviation"] = fmt_value(diff)
        if exact.real != 0:
            row["rel_deviation"] = fmt_value(diff / abs(exact.real))
        envelope = error_term_bound(c, n, prec)
        verdict = strict_verdict(diff, envelope, cfg.margin_policy)
        row["remainder_envelope"] = fmt_value(envelope)
        row["envelope_verdict"] = verdict
        verdicts.append(verdict)
    else:
        row["exact"] = "unavailable"
    report.add("asymptotic", **row)
    eng = engel_pbar(n, prec=prec)
    report.add("engel", estimate=fmt_value(eng.estimate),
               certified_bound=fmt_value(eng.certified_bound))
    report.timings["total_s"] = round(time.perf_counter() - t0, 6)
    _emit(report, args)
    return 0 if all(v == "pass" for v in verdicts) else 1


def cmd_bounds(args) -> int:
    cfg = _config(args)
    prec = cfg.precision_bits
    report = Report(command="bounds", config=cfg)
    c, n = args.c, args.n
    report.inputs = {"c": c, "n": n}
    t0 = time.perf_counter()
    verdicts = []

    bb = error_pieces(c, n, prec)
    for name in sorted(bb.pieces):
        report.add("error_piece", name=name, value=fmt_value(bb.pieces[name]))
    report.add("error_total", value=fmt_value(bb.total))
    report.add("main_term_bound", value=fmt_value(main_term_bound(c, n, prec)))
    report.add("error_term_bound", value=fmt_value(error_term_bound(c, n, prec)))

    rr = r_ratio(c, n, prec)
    report.add("r_ratio", value=fmt_value(rr))
    th = sandwich_threshold(c, prec)
    report.add("threshold", lower_coef=fmt_value(th.lower_coef),
               upper_coef=fmt_value(th.upper_coef), n_min=str(th.n_min))
    if c in (3, 4, 5):
        # the sandwich coefficients must absorb the ratio at the threshold
        v1 = strict_verdict(rr if n >= th.n_min else r_ratio(c, th.n_min, prec),
                            1 / mpf(c) - th.lower_coef, cfg.margin_policy)
        v2 = strict_verdict(rr if n >= th.n_min else r_ratio(c, th.n_min, prec),
                            th.upper_coef - 1 / mpf(c), cfg.margin_policy)
        report.add("threshold_verdict", lower=v1, upper=v2)
        verdicts += [v1, v2]
    else:
        report.add("giant_threshold", m_c=fmt_value(m_c(c, prec)),
                   m_c_prime=fmt_value(m_c_prime(c, prec)))

    selftest = aux_inequalities_selftest(prec=prec)
    for name, entry in sorted(selftest.items()):
        report.add("aux_inequality", name=name, passed=entry["passed"],
                   worst_margin=entry["worst_margin"])
        verdicts.append("pass" if entry["passed"] else "fail")

    report.timings["total_s"] = round(time.perf_counter() - t0, 6)
    _emit(report, args)
    return 0 if all(v == "pass" for v in verdicts) else 1


def cmd_verify(args) -> int:
    cfg = _config(args)
    report = Report(command="verify", config=cfg)
    c = args.c
    n_lo, n_hi = args.n_lo, args.n_hi
    if args.a_list == "all":
        residues = list(range(c))
    else:
        residues = sorted({int(tok) % c for tok in args.a_list.split(",")})
    report.inputs = {"c": c, "n_lo": n_lo, "n_hi": n_hi,
                     "a_list": ",".join(map(str, residues))}
    t0 = time.perf_counter()
    table = _get_table(cfg, c, 2 * n_hi)
    report.timings["table_s"] = round(time.perf_counter() - t0, 6)
    total_violations = 0
    for a in residues:
        cert = verify_subadditivity(table, a, n_lo, n_hi, jobs=cfg.parallelism)
        total_violations += len(cert.violations)
        report.add("certificate", c=c, a=a, pairs=cert.pairs_checked,
                   violations=len(cert.violations),
                   min_margin=fmt_value(cert.min_margin) if cert.min_margin else "none",
                   table_sha256=cert.table_checksum,
                   text=cert.serialize())
    report.timings["total_s"] = round(time.perf_counter() - t0, 6)
    _emit(report, args)
    return 1 if total_violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overrank",
        description="Exact overpartition rank-class counts, their asymptotics, "
                    "explicit deviation bounds, and log-subadditivity certificates.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact counts: pbar(n) or rank classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int)
    p.add_argument("--a", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("asymptotic", help="exact vs asymptotic, side by side")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_asymptotic)

    p = sub.add_parser("bounds", help="bound breakdown, ratios, thresholds, selftest")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="exhaustive subadditivity certificates")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--n-lo", type=int, required=True)
    p.add_argument("--n-hi", type=int, required=True)
    p.add_argument("--a-list", default="all",
                   help="comma-separated residues, or 'all' (default)")
    _add_common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    mp.prec = max(int(args.precision), 64)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
