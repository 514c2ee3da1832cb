"""Command-line front end.

    kohnspec dims --n 2 --p 1 --q 1
    kohnspec eigen --n 3 --p 0 --q 2 --verify
    kohnspec count --n 2 --m-max 2000 --step 50 --format csv
    kohnspec mb --pvec 2,0 --qvec 0,2
    kohnspec rossi --k-range 4:256 --t 0.5
    kohnspec rossi --k 4 --t 1/4 --oracle
    kohnspec selftest
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import checks
from .crops import OperatorSpec, PreconditionError, eigen_check, mb_eigenvalue_formula
from .harmonic import BigradedSignature, dim_hpq, harmonic_basis, hstar_element
from .polyring import GaussianRational
from .rossi import (
    FormulaDiscrepancy,
    InvarianceViolation,
    SubspaceSpec,
    calibrate_h,
    lambda_max_series,
    oracle_matrix,
    summarize,
    theorem_spec,
)
from .spectrum import decimal_str, eigenvalue_formula, growth_report


class UsageError(Exception):
    pass


class Output:
    """A table plus metadata; every subcommand returns one."""

    def __init__(self, rows: list[dict], meta: dict | None = None, ok: bool = True):
        self.rows = rows
        self.meta = meta or {}
        self.ok = ok


def _pmap(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def parse_real(text: str) -> Fraction:
    """``a/b`` or a decimal literal, converted exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def parse_exact(text: str) -> GaussianRational:
    """Exact value for the symbolic path: ``a/b`` or ``a/b+c/d*i``, no decimals."""
    if "." in text:
        raise UsageError(f"the symbolic oracle needs t written as a/b, got {text!r}")
    try:
        return GaussianRational.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def parse_vec(text: str) -> tuple[int, ...]:
    try:
        vec = tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc
    if any(v < 0 for v in vec):
        raise UsageError("degrees must be non-negative")
    return vec


def parse_range(text: str) -> range:
    try:
        a, b = (int(v) for v in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"expected a range like 4:256, got {text!r}") from exc
    if a < 1 or b < a:
        raise UsageError(f"bad range {text!r}")
    return range(a, b + 1)


# -- subcommands -------------------------------------------------------------


def cmd_dims(args) -> Output:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    if args.all_upto is not None:
        if args.all_upto < 0:
            raise UsageError("--all-upto must be >= 0")
        pairs = [(p, d - p) for d in range(args.all_upto + 1) for p in range(d + 1)]
    else:
        if args.p is None or args.q is None:
            raise UsageError("give --p and --q, or --all-upto")
        if args.p < 0 or args.q < 0:
            raise UsageError("--p and --q must be >= 0")
        pairs = [(args.p, args.q)]
    return Output([{"n": args.n, "p": p, "q": q, "dim": dim_hpq(args.n, p, q)} for p, q in pairs])


def _verify_element(job):
    n, p, q, idx = job
    e = harmonic_basis(n, p, q).elements[idx]
    lam = eigen_check(OperatorSpec("box_b"), e)
    return idx, lam


def cmd_eigen(args) -> Output:
    n, p, q = args.n, args.p, args.q
    if n < 1 or p < 0 or q < 0:
        raise UsageError("need --n >= 1 and --p, --q >= 0")
    lam = eigenvalue_formula(n, p, q)
    meta = {"n": n, "p": p, "q": q, "eigenvalue": lam, "dimension": dim_hpq(n, p, q)}
    if not args.verify:
        return Output([dict(meta)])
    size = len(harmonic_basis(n, p, q))
    results = _pmap(_verify_element, [(n, p, q, i) for i in range(size)], args.threads)
    rows = []
    for idx, got in results:
        rows.append({
            "element": idx,
            "lambda": None if got is None else _scalar(got),
            "pass": got == lam,
        })
    ok = all(r["pass"] for r in rows)
    meta["verified"] = ok
    return Output(rows, meta, ok)


def _scalar(x: GaussianRational):
    if x.is_real():
        return int(x.re) if x.re.denominator == 1 else str(x.re)
    return x.to_text()


def cmd_count(args) -> Output:
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    if args.step < 1:
        raise UsageError("--step must be >= 1")
    table = growth_report(args.n, args.m_max, args.step)
    meta = {"n": args.n, "m_max": args.m_max, "step": args.step}
    if table.ratios:
        meta["ratio_min"] = decimal_str(table.ratio_min)
        meta["ratio_max"] = decimal_str(table.ratio_max)
        meta["limsup_estimate"] = decimal_str(table.limsup_estimate)
    return Output(table.rows(), meta)


def cmd_mb(args) -> Output:
    pvec, qvec = parse_vec(args.pvec), parse_vec(args.qvec)
    if len(pvec) != len(qvec):
        raise UsageError("--pvec and --qvec must have the same length")
    if len(pvec) < 2:
        raise UsageError("M_b needs n >= 2")
    sig = BigradedSignature(pvec, qvec)
    try:
        formula = mb_eigenvalue_formula(sig, strict=not args.unchecked)
    except PreconditionError as exc:
        raise UsageError(f"hypothesis violated: {exc}") from exc
    from .polyring import Polynomial

    f = hstar_element(sig) or Polynomial.monomial(pvec, qvec)
    got = eigen_check(OperatorSpec("m_b"), f)
    row = {
        "pvec": ",".join(map(str, pvec)),
        "qvec": ",".join(map(str, qvec)),
        "harmonic": sig.is_admissible(),
        "formula": formula,
        "eigen_check": None if got is None else _scalar(got),
        "verified": got == formula,
    }
    return Output([row], ok=row["verified"] or args.unchecked)


def _rossi_numeric(job):
    spec, t, h, tol, k_label, formulas = job
    return summarize(spec, t, h, k_label=k_label, tol=tol, formulas=formulas).row()


def _spec_for(k: int, family: str, degree: bool) -> SubspaceSpec:
    return SubspaceSpec(k, family) if degree else theorem_spec(k, family)


def cmd_rossi(args) -> Output:
    if (args.k is None) == (args.k_range is None):
        raise UsageError("give exactly one of --k and --k-range")
    ks = [args.k] if args.k is not None else list(parse_range(args.k_range))
    if args.k is not None and args.k < 1:
        raise UsageError("--k must be >= 1")
    families = ("V", "W") if args.family == "both" else (args.family,)
    if args.tol is not None and args.tol <= 0:
        raise UsageError("--tol must be positive")

    if args.oracle:
        t = parse_exact(args.t)
        if t.abs2() >= 1:
            raise UsageError("|t| must be < 1")
        rows, ok = [], True
        for k in ks:
            for fam in families:
                spec = _spec_for(k, fam, args.degree)
                row = {"k": k, "degree": spec.k, "family": fam, "t": t.to_text()}
                try:
                    mat = oracle_matrix(spec, t)
                    row["tridiagonal"] = True
                except InvarianceViolation as exc:
                    rows.append({**row, "tridiagonal": False, "detail": str(exc)})
                    ok = False
                    continue
                for which in ("derived", "printed"):
                    if which == "printed" and spec.k % 2 == 0:
                        row["printed_match"] = None
                        continue
                    try:
                        h = calibrate_h(spec, t, formulas=which, oracle=mat)
                        row[f"{which}_match"] = True
                        row["h"] = h.to_text()
                    except FormulaDiscrepancy as exc:
                        row[f"{which}_match"] = False
                        row[f"{which}_detail"] = str(exc)
                        if which == args.formulas:
                            ok = False
                rows.append(row)
        return Output(rows, {"formulas_verified": args.formulas}, ok)

    t = parse_real(args.t)
    if t * t >= 1:
        raise UsageError("|t| must be < 1")
    t = float(t)
    h = float(parse_real(args.h))
    if h <= 0:
        raise UsageError("--h must be positive")
    if args.k_range is not None and args.family == "both" and not args.degree and args.formulas == "derived":
        rows = [s.row() for s in lambda_max_series(ks, t, h, tol=args.tol)]
    else:
        jobs = [(_spec_for(k, fam, args.degree), t, h, args.tol, k, args.formulas)
                for k in ks for fam in families]
        rows = _pmap(_rossi_numeric, jobs, args.threads)
    meta = {"t": t, "h": h, "indexing": "degree" if args.degree else "size k (degree 2k-1)"}
    if len(rows) > 1:
        ratios = [r["ratio"] for r in rows]
        meta["ratio_min"], meta["ratio_max"] = min(ratios), max(ratios)
    return Output(rows, meta)


def cmd_selftest(args) -> Output:
    names = args.only or list(checks.ALL_CHECKS)
    unknown = [n for n in names if n not in checks.ALL_CHECKS]
    if unknown:
        raise UsageError(f"unknown checks {unknown}; choose from {list(checks.ALL_CHECKS)}")
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(checks.run_check, names, [args.seed] * len(names)))
    else:
        results = [checks.run_check(n, args.seed) for n in names]
    rows = [
        {"check": n, "status": "PASS" if r.passed else "FAIL", "seconds": round(r.seconds, 3),
         "name": r.name, "detail": r.detail}
        for n, r in zip(names, results)
    ]
    return Output(rows, {"seed": args.seed}, all(r.passed for r in results))


# -- output ------------------------------------------------------------------


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"meta": out.meta, "rows": out.rows, "ok": out.ok}, indent=2) + "\n"
    cols: list[str] = []
    for r in out.rows:
        cols.extend(c for c in r if c not in cols)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        if cols:
            w.writeheader()
        w.writerows(out.rows)
        return buf.getvalue()
    lines = [f"# {k}: {v}" for k, v in out.meta.items()]
    if cols:
        table = [[_cell(r.get(c)) for c in cols] for r in out.rows]
        widths = [max(len(c), *(len(row[i]) for row in table)) if table else len(c) for i, c in enumerate(cols)]
        lines.append("  ".join(c.ljust(wd) for c, wd in zip(cols, widths)).rstrip())
        for row in table:
            lines.append("  ".join(v.ljust(wd) for v, wd in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the flags without defaults so they never clobber
    # values given before the subcommand name
    def default(v):
        return argparse.SUPPRESS if suppress else v

    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--format", choices=("json", "csv", "text"), default=default("json"))
    g.add_argument("--threads", type=int, default=default(1))
    g.add_argument("--seed", type=int, default=default(0))
    g.add_argument("--out", metavar="FILE", default=default(None))
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    ap = argparse.ArgumentParser(prog="kohnspec", description=__doc__.strip().splitlines()[0],
                                 parents=[_global_flags(suppress=False)])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", parents=[common], help="dim H_{p,q}(S^{2n-1})")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--all-upto", type=int, metavar="D", help="every p+q <= D")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("eigen", parents=[common], help="box_b eigenvalue on H_{p,q}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="check every basis element symbolically")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("count", parents=[common], help="counting function N(m)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--step", type=int, default=2)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("mb", parents=[common], help="M_b eigenvalue on H*_{pvec,qvec}")
    p.add_argument("--pvec", required=True)
    p.add_argument("--qvec", required=True)
    p.add_argument("--unchecked", action="store_true",
                   help="evaluate the closed form even when p_k q_k != 0")
    p.set_defaults(func=cmd_mb)

    p = sub.add_parser("rossi", parents=[common], help="perturbed Kohn Laplacian on S^3")
    p.add_argument("--k", type=int)
    p.add_argument("--k-range", metavar="A:B")
    p.add_argument("--degree", action="store_true",
                   help="read k as the polynomial degree instead of the matrix size parameter")
    p.add_argument("--t", required=True)
    p.add_argument("--h", default="1")
    p.add_argument("--family", choices=("V", "W", "both"), default="both")
    p.add_argument("--formulas", choices=("derived", "printed"), default="derived")
    p.add_argument("--oracle", action="store_true", help="compare with the exact symbolic matrix")
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_rossi)

    p = sub.add_parser("selftest", parents=[common], help="run the verification suite")
    p.add_argument("--only", action="append", metavar="CHECK")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads < 1:
        ap.error("--threads must be >= 1")
    try:
        out = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(out, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
