"""Command-line front end: ``volconj <command> [flags]``.

Exit codes: 0 success, 2 unparseable link spec or arguments, 3 term budget
or precision guard exceeded, 4 domain error (bad colors, no convergence,
unsupported family).  Timing goes to stderr so stdout is reproducible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

import mpmath as mp

from . import asymptotics, jones, potential, selfcheck, tv
from .links import LinkSpecError, parse_link, simplicial_volume
from .numeric import MIN_DIGITS, Precision, make_eval_point, quantum_int
from .special import DomainError

EXIT_PARSE, EXIT_BUDGET, EXIT_DOMAIN = 2, 3, 4
DIGITS_OUT = 20


class PrecisionInsufficient(RuntimeError):
    pass


class _UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# helpers

def _num(x) -> str:
    return mp.nstr(mp.mpf(x), DIGITS_OUT)


def _precision(args) -> int:
    if args.precision is None:
        return Precision.default().decimal_digits
    if args.precision < MIN_DIGITS:
        raise _UsageError(f"--precision must be at least {MIN_DIGITS}")
    return args.precision


def _window(args) -> jones.SumWindow:
    if args.eta is not None:
        if args.full:
            raise _UsageError("--full and --eta are exclusive")
        return jones.SumWindow(args.eta)
    if args.window:
        return jones.SumWindow(0.08)
    return jones.FULL


def _n_range(text: str):
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise _UsageError("--N-range expects a:b or a:b:step")
    a, b = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 1
    if step <= 0 or a < 1 or b < a:
        raise _UsageError("bad --N-range")
    return list(range(a, b + 1, step))


def digits_needed(link, N: int) -> int:
    """log10 of the peak summand e^{(N+1/2) v/2 pi} plus 20 guard digits."""
    with mp.workdps(30):
        v = float(simplicial_volume(link))
    return math.ceil((N + 0.5) * v / (2 * math.pi) / math.log(10)) + 20


def _guard(link, N, digits):
    need = digits_needed(link, N)
    if digits < need:
        raise PrecisionInsufficient(
            f"precision-insufficient: N={N} needs about {need} digits for {link.spec()}, have {digits}"
        )


def term_estimate(link, N: int) -> float:
    from .links import (CabledChain, FigureEight, HopfUnion, IteratedDouble, WAlphaBeta,
                        WhiteheadLink)

    if isinstance(link, IteratedDouble):
        return jones.iterated_double_estimate(link.p, N)
    if isinstance(link, WAlphaBeta):
        return jones.w_alpha_beta_estimate(max(link.alpha, 1), link.beta, N)
    if isinstance(link, (CabledChain, WhiteheadLink)):
        return float(N) ** 2
    if isinstance(link, (FigureEight, HopfUnion)):
        return float(N)
    return 1.0


def _emit(records, fmt: str, out):
    if fmt == "json":
        text = json.dumps(records if len(records) != 1 else records[0], indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(records[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(records)
        text = buf.getvalue()
    _write(text, out)


def _write(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    return args.threads if args.threads else (os.cpu_count() or 1)


# --------------------------------------------------------------------------
# commands

def cmd_jones(args):
    link = parse_link(args.link)
    digits = _precision(args)
    N = args.N
    if args.colors:
        colors = tuple(int(c) for c in args.colors.split(","))
    elif args.color is not None:
        colors = (args.color,)
    else:
        colors = jones.diagonal_colors(link, N)
    _guard(link, max([N] + list(colors)), digits)
    ep = make_eval_point(N, digits)
    t0 = time.perf_counter()
    J = jones.jones_value(link, colors, ep, _window(args), args.budget)
    wall = time.perf_counter() - t0
    with ep.workdps():
        a = abs(J)
        log_abs = mp.log(a) if a != 0 else None
        # J' = J/[M_1]; zero when [M_1] vanishes at this root of unity
        q1 = quantum_int(colors[0], ep)
        Jn = J / q1 if q1 != 0 else mp.mpc(0)
        rec = {
            "link": link.spec(),
            "N": N,
            "colors": ",".join(map(str, colors)),
            "re": _num(mp.re(J)),
            "im": _num(mp.im(J)),
            "abs": _num(a),
            "norm_re": _num(mp.re(Jn)),
            "norm_im": _num(mp.im(Jn)),
            "log_abs": "-inf" if log_abs is None else _num(log_abs),
            "g": "-inf" if log_abs is None else _num(2 * mp.pi / ep.scale * log_abs),
            "term_estimate": f"{term_estimate(link, N):.6g}",
        }
    print(f"wall_time {wall:.3f}s", file=sys.stderr)
    _emit([rec], args.format, args.out)


def cmd_growth(args):
    link = parse_link(args.link)
    digits = _precision(args)
    Ns = _n_range(args.N_range)
    _guard(link, max(Ns), digits)
    rule = asymptotics.RatioTargets([float(s) for s in args.ratio.split(",")]) if args.ratio else None
    pred = None
    try:
        if rule is None:
            pred = float(simplicial_volume(link))
        else:
            deform = rule.ratios[0] if len(rule.ratios) == 1 and link.components == 1 else tuple(rule.ratios)
            pred = float(potential.geometry_prediction(link, deform))
    except ValueError:
        pred = None
    table = asymptotics.growth_sequence(link, rule, Ns, _window(args), digits, args.budget,
                                        _threads(args), pred)
    if args.format == "json":
        doc = {
            "link": link.spec(),
            "samples": [s.__dict__ for s in table.samples],
            "fit": None if table.fit is None else table.fit.__dict__,
            "predicted_limit": table.predicted_limit,
        }
        _write(json.dumps(doc, indent=2, sort_keys=True, default=list) + "\n", args.out)
    else:
        _write(table.to_csv(), args.out)


def cmd_tv(args):
    link = parse_link(args.link)
    digits = _precision(args)
    r = args.r if args.r is not None else 2 * args.N + 1
    if r < 3 or r % 2 == 0:
        raise _UsageError("--r must be odd and at least 3")
    N = (r - 1) // 2
    _guard(link, N, digits)
    ep = make_eval_point(N, digits)
    if args.top_color:
        value, terms, exact = tv.tv_lower_bound_from_top_color(link, ep, _window(args)), 1, False
    else:
        res = tv.turaev_viro(link, ep, _window(args), _threads(args))
        value, terms, exact = res.value, res.terms, res.exact
    with ep.workdps():
        rec = {
            "link": link.spec(), "r": r, "value": _num(value), "terms": terms,
            "exact": exact, "growth": _num(tv.tv_growth(value, r)) if value > 0 else "-inf",
        }
    _emit([rec], args.format, args.out)


def cmd_critical(args):
    link = parse_link(args.link)
    digits = _precision(args)
    deform = None
    if args.deformation:
        vals = [float(x) for x in args.deformation.split(",")]
        deform = vals[0] if len(vals) == 1 else tuple(vals)
    with mp.workdps(digits):
        spec = potential.build_potential(link, deform, branch=args.branch)
        cg = potential.find_critical_point(spec)
        doc = {"potential": spec.name, "fourier_shift": list(spec.fourier_shift), **cg.as_dict(DIGITS_OUT)}
    _write(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)


def cmd_saddle(args):
    digits = _precision(args)
    from .links import IteratedDouble

    link = IteratedDouble(0)
    Ns = _n_range(args.N_range)
    _guard(link, max(Ns), digits)
    direct, pred = [], []
    for N in Ns:
        ep = make_eval_point(N, digits)
        direct.append(jones.jones_iterated_double(0, ep, budget=args.budget))
        pred.append(asymptotics.saddle_prediction(ep))
    rows = asymptotics.compare_report(direct, pred, Ns)
    if args.format == "json":
        _write(json.dumps(rows, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _write(asymptotics.report_csv(rows), args.out)


def cmd_selfcheck(args):
    digits = _precision(args)
    if args.N is not None:
        from .links import IteratedDouble

        need = digits_needed(IteratedDouble(0), args.N)
        if digits < need:
            raise PrecisionInsufficient(
                f"precision-insufficient: peak term at N={args.N} is about 10^{need - 20}, "
                f"{digits} digits leave no significant figures; use --precision {need}"
            )
    suites = {"qdilog", "fd", "cross"} if args.suite == "all" else {args.suite}
    ok = True
    lines = []
    with mp.workdps(digits):
        for name, resid, tol in selfcheck.run_suites(suites, r=args.r, samples=args.samples, seed=args.seed):
            passed = resid <= tol
            ok &= bool(passed)
            lines.append(f"{'PASS' if passed else 'FAIL'} {name} max_residual={mp.nstr(resid, 3)} tol={mp.nstr(tol, 1)}")
    _write("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help="decimal digits (>= 30)")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--budget", type=int, default=None)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None)
    common.add_argument("--seed", type=int, default=0)
    win = common.add_mutually_exclusive_group()
    win.add_argument("--full", action="store_true", help="full summation (default)")
    win.add_argument("--window", action="store_true", help="restricted window with eta = 0.08")
    common.add_argument("--eta", type=float, default=None, help="restricted window half-width")

    p = argparse.ArgumentParser(prog="volconj", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("jones", parents=[common])
    s.add_argument("--link", required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--colors", default=None)
    s.add_argument("--color", type=int, default=None)
    s.set_defaults(func=cmd_jones)

    s = sub.add_parser("growth", parents=[common])
    s.add_argument("--link", required=True)
    s.add_argument("--N-range", dest="N_range", required=True)
    s.add_argument("--ratio", default=None)
    s.set_defaults(func=cmd_growth)

    s = sub.add_parser("tv", parents=[common])
    s.add_argument("--link", required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--r", type=int)
    g.add_argument("--N", type=int)
    s.add_argument("--top-color", action="store_true")
    s.set_defaults(func=cmd_tv)

    s = sub.add_parser("critical", parents=[common])
    s.add_argument("--link", required=True)
    s.add_argument("--deformation", default=None)
    s.add_argument("--branch", type=int, choices=(1, -1), default=1)
    s.set_defaults(func=cmd_critical)

    s = sub.add_parser("saddle", parents=[common])
    s.add_argument("--N-range", dest="N_range", required=True)
    s.set_defaults(func=cmd_saddle)

    s = sub.add_parser("selfcheck", parents=[common])
    s.add_argument("--suite", choices=("all", "qdilog", "fd", "cross"), default="all")
    s.add_argument("--r", type=int, default=25)
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--samples", type=int, default=10)
    s.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = args.func(args)
    except (LinkSpecError, _UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (jones.BudgetExceeded, PrecisionInsufficient) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, potential.NewtonFailure, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
