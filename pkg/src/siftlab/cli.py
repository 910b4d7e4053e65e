"""Command-line front end.

Every subcommand prints one CSV (or JSON-lines) table with a fixed column
order, shortest round-trip floats, and newline endings, so identical
invocations produce identical bytes regardless of --threads.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time

from . import __version__, egps, hist, multfunc, shifted, sift, table
from .arith import PrimeTable
from .errors import ResourceBudgetError
from .primesets import AllPrimes
from .sift import QuadraticForm
from .specs import parse_primeset, parse_set_spec, parse_weight

_TWIN_LIMIT = 10**7


def _common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", help="write the table here instead of stdout")
    sub.add_argument("--manifest", help="write a JSON run manifest here")
    sub.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--budget-mb", type=int, default=None)
    sub.add_argument("--budget-sec", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="siftlab",
        description="exact sieve experiments on prime-factor statistics",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = ap.add_subparsers(dest="subcommand", required=True)

    def add(name: str, fn, **flags):
        sub = subs.add_parser(name)
        for flag, spec in flags.items():
            sub.add_argument(flag, **spec)
        _common(sub)
        sub.set_defaults(fn=fn)
        return sub

    X = {"type": int, "required": True}
    W = {"default": "one"}
    G = {"choices": ("omega", "bigomega"), "default": "omega"}
    E = {"default": "all"}
    S = {"default": "none"}

    add("primes", _cmd_primes, **{"--x": X})
    add("hist", _cmd_hist, **{"--x": X, "--f": W, "--g": G, "--e": E, "--sieve": S,
                              "--beta": {"type": float, "default": 2.0}})
    add("hr-check", _cmd_hr_check, **{"--x": X, "--f": W, "--g": G, "--e": E,
                                      "--sieve": S, "--C": {"type": float, "default": None},
                                      "--beta": {"type": float, "default": 2.0}})
    add("mgf", _cmd_mgf, **{"--x": X, "--z": {"type": float, "required": True},
                            "--f": W, "--g": G, "--e": E, "--sieve": S})
    add("tails", _cmd_tails, **{"--x": X, "--delta": {"type": float, "required": True},
                                "--f": W, "--g": G, "--e": E, "--sieve": S})
    add("dev", _cmd_dev, **{"--x": X, "--lambda": {"type": float, "required": True,
                                                   "dest": "lam"},
                            "--f": W, "--g": G, "--e": E, "--sieve": S})
    add("table", _cmd_table, **{"--n": {"type": int, "required": True},
                                "--shift": {"type": int, "default": None}})
    add("table-sifted", _cmd_table_sifted, **{"--x": X, "--f": W, "--sieve": S})
    add("spd", _cmd_spd, **{"--a": {"type": int, "required": True},
                            "--u": {"type": int, "required": True},
                            "--v": {"type": int, "required": True},
                            "--x": X, "--y": {"type": int, "required": True}})
    add("lambda-image", _cmd_lambda_image, **{"--u": {"type": int, "required": True},
                                              "--v": {"type": int, "required": True},
                                              "--x": X})
    add("sp-dev", _cmd_sp_dev, **{"--a": {"type": int, "required": True},
                                  "--b": {"type": int, "required": True},
                                  "--f": W, "--g": G, "--e": E, "--x": X,
                                  "--lambda": {"type": float, "required": True,
                                               "dest": "lam"}})
    add("qf-dev", _cmd_qf_dev, **{"--form": {"required": True},
                                  "--shift": {"type": int, "default": None},
                                  "--g": G, "--e": E, "--x": X,
                                  "--lambda": {"type": float, "required": True,
                                               "dest": "lam"}})
    add("jointpoly", _cmd_jointpoly, **{"--q": {"action": "append", "required": True},
                                        "--x": X, "--y": {"type": int, "required": True},
                                        "--k": {"required": True}})
    add("apcount", _cmd_apcount, **{"--x": X, "--d": {"type": int, "required": True},
                                    "--a": {"type": int, "required": True},
                                    "--g": G, "--k": {"type": int, "required": True}})
    add("egps", _cmd_egps, **{"--x": X, "--f": W,
                              "--lambda": {"type": float, "default": None, "dest": "lam"},
                              "--c0": {"type": float, "default": None}})
    add("sigma-div", _cmd_sigma_div, **{"--x": X, "--p": {"type": int, "required": True},
                                        "--f": W, "--eps": {"type": float, "default": 0.5}})
    add("s-div", _cmd_s_div, **{"--x": X, "--y": {"type": int, "required": True},
                                "--z": {"type": int, "required": True},
                                "--d": {"type": int, "required": True}, "--f": W})
    add("omega-gcd", _cmd_omega_gcd, **{"--x": X, "--f": W})
    add("constants", _cmd_constants, **{"--x": {"type": int, "default": _TWIN_LIMIT}})
    return ap


# ----------------------------------------------------------------- handlers

def _table_for(x: int) -> PrimeTable:
    return PrimeTable(max(x, 2))


def _cmd_primes(args):
    t = _table_for(args.x)
    header = ["x", "pi", "mertens", "hr_constant"]
    row = [args.x, t.pi(args.x),
           multfunc.mertens_sum(multfunc.one(), args.x, table=t),
           multfunc.hr_constant(args.x, t)]
    return header, [row]


def _hist_setup(args):
    t = _table_for(args.x)
    f = parse_weight(args.f)
    E = parse_primeset(args.e)
    ss = parse_set_spec(args.sieve, args.x)
    sset = ss.realize(args.x, t)
    h = hist.weighted_histogram(sset, f, args.g, E, t, args.threads)
    return t, f, E, ss, sset, h


def _hist_rows(args, variant: str, C: float | None, beta: float):
    t, f, E, ss, sset, h = _hist_setup(args)
    rep = hist.hr_ratio(h, sset.cond, C=C, beta=beta, table=t)
    use_prime = variant == "prime" and rep.prime_variant is not None
    ratios = rep.prime_variant if use_prime else rep.general
    rows = []
    for k in sorted(h.bins):
        mass = h.bins[k]
        if k in ratios:
            ratio = ratios[k]
            rows.append([args.subcommand, args.x, f.spec_string(), args.g,
                         E.spec_string(), ss.spec_string(), k, mass,
                         mass / ratio, ratio])
        else:
            rows.append([args.subcommand, args.x, f.spec_string(), args.g,
                         E.spec_string(), ss.spec_string(), k, mass, "", ""])
    header = ["experiment", "x", "f", "g", "E", "sieve", "k", "mass", "bound", "ratio"]
    return header, rows


def _cmd_hist(args):
    return _hist_rows(args, "general", None, args.beta)


def _cmd_hr_check(args):
    return _hist_rows(args, "prime", args.C, args.beta)


def _cmd_mgf(args):
    t = _table_for(args.x)
    f = parse_weight(args.f)
    E = parse_primeset(args.e)
    ss = parse_set_spec(args.sieve, args.x)
    rep = hist.mgf_sum(ss.realize(args.x, t), f, args.z, args.g, E, t, args.threads)
    header = ["x", "f", "g", "E", "sieve", "z", "value", "bound", "ratio"]
    return header, [[args.x, f.spec_string(), args.g, E.spec_string(),
                     ss.spec_string(), args.z, rep.value, rep.bound, rep.ratio]]


def _cmd_tails(args):
    t, f, E, ss, sset, h = _hist_setup(args)
    rep = hist.tail_masses(h, args.delta, sset.cond, t)
    header = ["x", "f", "g", "E", "sieve", "delta", "M", "mass_low", "mass_high",
              "bound_low", "bound_high", "ratio_low", "ratio_high"]
    return header, [[args.x, f.spec_string(), args.g, E.spec_string(),
                     ss.spec_string(), args.delta, rep.M, rep.mass_low,
                     rep.mass_high, rep.bound_low, rep.bound_high,
                     rep.ratio_low, rep.ratio_high]]


_DEV_HEADER = ["x", "lambda", "M", "mass_low", "mass_high", "normalized", "gauss_ref"]


def _dev_row(rep) -> list:
    return [rep.x, rep.lam, rep.M, rep.mass_low, rep.mass_high,
            rep.normalized, rep.gauss_ref]


def _cmd_dev(args):
    t, f, E, ss, sset, h = _hist_setup(args)
    rep = hist.deviation(h, args.lam, table=t)
    return _DEV_HEADER, [_dev_row(rep)]


def _cmd_table(args):
    budget = None if args.budget_mb is None else args.budget_mb * (1 << 20) * 8
    kw = {} if budget is None else {"budget_cells": budget}
    A = table.table_count(args.n, threads=args.threads, **kw)
    fr = table.ford_ratio(args.n, A) if args.n >= 3 else ""
    if args.shift is None:
        return ["N", "A", "ford_ratio"], [[args.n, A, fr]]
    As = table.table_count_shifted(args.n, args.shift, threads=args.threads, **kw)
    return (["N", "A", "ford_ratio", "s", "A_shifted"],
            [[args.n, A, fr, args.shift, As]])


def _cmd_table_sifted(args):
    t = _table_for(args.x)
    f = parse_weight(args.f)
    ss = parse_set_spec(args.sieve, args.x)
    rep = table.sifted_table_sum(ss.realize(args.x, t), f, t, args.threads)
    header = ["x", "f", "sieve", "value", "R", "M", "regime",
              "bound_le_half", "ratio_le_half", "bound_mid", "ratio_mid"]
    blank = lambda v: "" if v is None else v
    return header, [[args.x, f.spec_string(), ss.spec_string(), rep.value, rep.R,
                     rep.M, rep.regime, blank(rep.bound_le_half),
                     blank(rep.ratio_le_half), blank(rep.bound_mid),
                     blank(rep.ratio_mid)]]


def _cmd_spd(args):
    rep = shifted.shifted_divisor_count(
        args.a, args.u, args.v, args.x, args.y, threads=args.threads
    )
    header = ["a", "u", "v", "x", "y", "count", "normalized", "bound_ratio"]
    return header, [[rep.a, rep.u, rep.v, rep.x, rep.y, rep.count,
                     rep.normalized, rep.bound_ratio]]


def _cmd_lambda_image(args):
    count, pi = shifted.lambda_image_intersection(
        args.u, args.v, args.x, threads=args.threads
    )
    header = ["u", "v", "x", "count", "pi", "normalized"]
    return header, [[args.u, args.v, args.x, count, pi,
                     count / pi if pi else ""]]


def _cmd_sp_dev(args):
    rep = shifted.weighted_sp_deviation(
        args.a, args.b, parse_weight(args.f), parse_primeset(args.e),
        args.x, args.lam, args.g, threads=args.threads,
    )
    return _DEV_HEADER, [_dev_row(rep)]


def _cmd_qf_dev(args):
    a, b, c = (int(tok) for tok in args.form.split(","))
    rep = shifted.qf_deviation(
        QuadraticForm(a, b, c), parse_primeset(args.e), args.x, args.lam,
        shift=args.shift, g_kind=args.g, threads=args.threads,
    )
    return _DEV_HEADER, [_dev_row(rep)]


def _cmd_jointpoly(args):
    polys = [tuple(int(tok) for tok in q.split(",")) for q in args.q]
    targets = tuple(int(tok) for tok in args.k.split(","))
    count = shifted.joint_poly_omega(polys, args.x, args.y, targets)
    header = ["x", "y", "polys", "targets", "count"]
    return header, [[args.x, args.y, "|".join(args.q), args.k, count]]


def _cmd_apcount(args):
    count = shifted.ap_prime_factor_count(
        args.x, args.d, args.a, args.g, args.k, threads=args.threads
    )
    header = ["x", "d", "a", "g", "k", "count"]
    return header, [[args.x, args.d, args.a, args.g, args.k, count]]


def _cmd_egps(args):
    rep = egps.egps_deviation(
        args.x, parse_weight(args.f), lam=args.lam, c0=args.c0,
        threads=args.threads,
    )
    header = ["x", "f", "lambda", "mass", "total", "normalized",
              "excluded", "unfactored"]
    rows = [[args.x, args.f, rep.lam, rep.mass, rep.total, rep.normalized,
             rep.excluded, rep.unfactored]]
    for lam, norm in rep.grid:
        rows.append([args.x, args.f, lam, norm * rep.total, rep.total, norm,
                     rep.excluded, rep.unfactored])
    return header, rows


def _cmd_sigma_div(args):
    rep = egps.count_p_divides_sigma(
        args.x, args.p, parse_weight(args.f), args.eps, threads=args.threads
    )
    header = ["x", "p", "f", "eps", "value", "bound", "ratio"]
    return header, [[args.x, args.p, args.f, args.eps, rep.value, rep.bound,
                     rep.ratio]]


def _cmd_s_div(args):
    value = egps.count_d_divides_s(
        args.x, args.y, args.z, args.d, parse_weight(args.f),
        threads=args.threads,
    )
    header = ["x", "y", "z", "d", "f", "value"]
    return header, [[args.x, args.y, args.z, args.d, args.f, value]]


def _cmd_omega_gcd(args):
    rep = egps.mean_omega_gcd_sigma(args.x, parse_weight(args.f),
                                    threads=args.threads)
    header = ["x", "f", "value", "bound", "ratio"]
    blank = lambda v: "" if v is None else v
    return header, [[args.x, args.f, rep.value, blank(rep.bound),
                     blank(rep.ratio)]]


def _cmd_constants(args):
    import numpy as np

    from . import bulk

    rows = [["eta0", table.eta0(), "table-density exponent"]]
    ps = bulk.primes_upto(args.x).astype(np.float64)
    odd = ps[ps > 2]
    c2 = 2.0 * float(np.prod(1.0 - 1.0 / (odd - 1.0) ** 2))
    rows.append(["C2_partial", c2, f"over p <= {args.x}; tail omitted"])
    for v in range(1, 6):
        rows.append([f"s_{v}", 1.0 + 2.0 / (math.exp(0.53 / v) - 1.0),
                     "sieve-level exponent"])
    for y in (0.0, 0.5, 1.0, 1.5, 2.0, 3.0):
        rows.append([f"Q({y:g})", hist.q_rate(y), "deviation rate"])
    return ["name", "value", "note"], rows


# -------------------------------------------------------------------- emit

def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "jsonl":
        out = [json.dumps(dict(zip(header, row)), separators=(", ", ": "))
               for row in rows]
        return "\n".join(out) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def dispatch(argv: list[str]) -> int:
    args = build_parser().parse_args(argv)
    start = time.monotonic()
    header, rows = args.fn(args)
    text = render(header, rows, args.format)
    elapsed = time.monotonic() - start
    if args.budget_sec is not None and elapsed > args.budget_sec:
        raise ResourceBudgetError(
            f"run took {elapsed:.2f}s, over the budget of {args.budget_sec:.2f}s"
        )
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.manifest:
        params = {
            k: v for k, v in sorted(vars(args).items())
            if k not in ("fn",) and not callable(v)
        }
        manifest = {
            "subcommand": args.subcommand,
            "params": params,
            "version": __version__,
            "threads": args.threads,
            "wall_time_sec": round(elapsed, 6),
            "rows": len(rows),
            "output_sha256": hashlib.sha256(text.encode()).hexdigest(),
        }
        with open(args.manifest, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def main() -> None:
    try:
        code = dispatch(sys.argv[1:])
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(2)
    except ResourceBudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        sys.exit(3)
    except OverflowError as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        sys.exit(4)
    sys.exit(code)


if __name__ == "__main__":
    main()
