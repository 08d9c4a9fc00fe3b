"""Command-line interface.

Subcommands: interval, alpha, alpha-star, staircase, ratio, oracle,
check.  Exit codes: 0 success, 2 domain error, 3 precision or
certification failure, 4 hypothesis failure.  Output is deterministic for
identical invocations, and every printed decimal carries its precision or
rigor annotation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from mpmath import mp, mpf

from . import __version__
from .contfrac import (
    CertificationError,
    CFError,
    CFExpansion,
    CoefficientsExhausted,
    cf_of_quadratic,
    cf_of_real,
)
from .family import FamilyError, resolve_family
from .irrational_preimage import (
    IrrationalPreimageError,
    PrecisionError,
    alpha_for_irrational,
)
from .oracle import check_condition_v, jsr_bounds
from .precision import Ball, mpf_from_fraction
from .rational_preimage import (
    PreimageError,
    preimage_interval,
    preimage_one,
    preimage_zero,
)
from .family import check_technical_hypotheses
from .staircase import RatioBracket, build_staircase, gap_diagnostics, ratio_at, render

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_HYPOTHESIS = 4


class CliError(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)  # accepts both 'p/q' and decimal strings, exactly
    except (ValueError, ZeroDivisionError) as e:
        raise CliError(EXIT_DOMAIN, f"bad fraction {text!r}: {e}") from None


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_interval(args) -> int:
    fam = resolve_family(args.family)
    pq = _fraction(args.fraction)
    try:
        if pq == 0:
            iv = preimage_zero(fam, args.prec)
        elif pq == 1:
            iv = preimage_one(fam, args.prec)
        else:
            iv = preimage_interval(fam, pq, args.prec)
    except PreimageError as e:
        raise CliError(EXIT_DOMAIN, str(e)) from None
    digits = max(20, int(args.prec / 3.33))
    if iv.empty:
        text = "{} (empty)"
    elif iv.degenerate:
        text = "{0}"
    else:
        lo = "0" if iv.lo is None else (
            repr(iv.lo.exact) if args.exact and iv.lo.exact is not None else mp.nstr(iv.lo.value, digits)
        )
        hi = "+inf" if iv.hi is None else (
            repr(iv.hi.exact) if args.exact and iv.hi.exact is not None else mp.nstr(iv.hi.value, digits)
        )
        text = f"[{lo}, {hi}]  (prec={args.prec} bits, exact={'yes' if iv.lo is not None and iv.lo.exact is not None else 'no'})"
    _emit(args, iv.as_json(), text)
    return EXIT_OK


def _parse_gamma(args, prec: int) -> tuple[CFExpansion, str]:
    given = [x is not None for x in (args.cf, args.quadratic, args.decimal)]
    if sum(given) != 1:
        raise CliError(EXIT_DOMAIN, "give exactly one of --cf, --quadratic, --decimal")
    if args.cf is not None:
        cf = CFExpansion.parse(args.cf)
        return cf, f"cf:{args.cf}"
    if args.quadratic is not None:
        try:
            a_s, b_s, d_s = args.quadratic.split(",")
            cf = cf_of_quadratic(_fraction(a_s), _fraction(b_s), int(d_s))
        except (ValueError, CFError) as e:
            raise CliError(EXIT_DOMAIN, f"bad quadratic spec: {e}") from None
        return cf, f"quadratic:{args.quadratic}"
    val_s, _, rad_s = args.decimal.partition("±")
    if not rad_s:
        val_s, _, rad_s = args.decimal.partition("+-")
    with mp.workprec(prec):
        val = mpf_from_fraction(_fraction(val_s.strip()), prec)
        rad = mpf_from_fraction(_fraction(rad_s.strip()), prec) if rad_s else mpf(2) ** (-prec + 8)
        ball = Ball(val, rad)
    want = args.terms or 40
    try:
        cf = cf_of_real(ball, want)
    except CertificationError as e:
        if e.index <= 4:
            raise CliError(EXIT_PRECISION, f"cannot certify expansion: {e}") from None
        cf = cf_of_real(ball, e.index - 1)  # keep the certified prefix
    return cf, f"decimal:{args.decimal}"


def cmd_alpha(args) -> int:
    fam = resolve_family(args.family)
    prec = args.prec
    cf, label = _parse_gamma(args, max(prec, 64 + int((args.digits or 30) * 3.33)))
    try:
        res = alpha_for_irrational(
            fam, cf, digits=args.digits, terms=args.terms, gamma_label=label
        )
    except (PrecisionError, CoefficientsExhausted) as e:
        raise CliError(EXIT_PRECISION, str(e)) from None
    except IrrationalPreimageError as e:
        raise CliError(EXIT_DOMAIN, str(e)) from None
    digits = args.digits or 30
    payload = res.as_json()
    if args.quadratic is not None:
        a_s, b_s, d_s = args.quadratic.split(",")
        payload["gamma"] = {"quadratic": {"a": a_s, "b": b_s, "D": int(d_s)}}
    else:
        payload["gamma"] = {"cf": cf.prefix(min(24, len(cf._coeffs) or 24))}
        if cf.period is not None:
            payload["gamma"]["period"] = cf.period
    text = (
        f"alpha = {mp.nstr(res.value, digits)}\n"
        f"radius <= {mp.nstr(res.error_radius, 4)} "
        f"({'rigorous' if res.rigorous else 'heuristic'}), N = {res.terms_used}"
    )
    if res.certificate:
        text += f", certificate (L,K,n0,C0) = ({res.certificate.L},{res.certificate.K},{res.certificate.n0},{res.certificate.C0})"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_alpha_star(args) -> int:
    args.cf = "2,1;period=1"
    args.quadratic = None
    args.decimal = None
    args.terms = None
    if args.digits is None:
        args.digits = 29
    return cmd_alpha(args)


def cmd_staircase(args) -> int:
    fam = resolve_family(args.family)
    try:
        st = build_staircase(fam, args.qmax, args.prec, workers=args.workers)
    except PreimageError as e:
        raise CliError(EXIT_DOMAIN, str(e)) from None
    fmt = args.format if args.format in ("csv", "json") else "csv"
    window = None
    if args.range:
        lo_s, hi_s = args.range.split(",")
        window = (lo_s, hi_s)
    text = render(st, fmt, midpoint_samples=args.midpoints, alpha_range=window)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {len(st.all_rows())} steps to {args.out}")
    else:
        print(text, end="")
    if args.gaps:
        lo_s, hi_s = args.gaps.split(",")
        levels = sorted({q for q in (5, 10, 20, st.qmax) if 2 <= q <= st.qmax})
        rep = gap_diagnostics(st, (lo_s, hi_s), levels)
        for q, r in sorted(rep.residuals.items()):
            print(f"# uncovered in [{lo_s},{hi_s}] at qmax={q}: {mp.nstr(r, 8)}")
    return EXIT_OK


def cmd_ratio(args) -> int:
    fam = resolve_family(args.family)
    alpha = _fraction(args.alpha)
    result = ratio_at(fam, alpha, depth=args.depth, prec=args.prec)
    if isinstance(result, RatioBracket):
        payload = {
            "bracket": [str(result.low), str(result.high)],
            "cf_prefix": list(result.cf_prefix),
            "depth": args.depth,
        }
        text = (
            f"ratio in ({result.low}, {result.high}); "
            f"certified cf prefix {list(result.cf_prefix)} (depth {args.depth})"
        )
    else:
        payload = {"ratio": str(result)}
        text = str(result)
    _emit(args, payload, text)
    return EXIT_OK


def cmd_oracle(args) -> int:
    fam = resolve_family(args.family)
    alpha = _fraction(args.alpha)
    bound = jsr_bounds(fam, alpha, args.maxlen, args.prec)
    digits = max(20, int(args.prec / 3.33))
    text = (
        f"word {bound.lower_witness} slope "
        f"{bound.lower_witness.count('1')}/{len(bound.lower_witness)} "
        f"value {mp.nstr(bound.lower, digits)}\n"
        f"upper {mp.nstr(bound.upper, digits)} ({bound.upper_norm} norm)\n"
        f"gap {mp.nstr(bound.upper - bound.lower, 6)}  (maxlen {args.maxlen}, prec {args.prec})"
    )
    _emit(args, bound.as_json(), text)
    return EXIT_OK


def cmd_check(args) -> int:
    fam = resolve_family(args.family_pos or args.family)
    rep = check_technical_hypotheses(fam, depth=args.depth_check)
    lines = [
        f"nonnegative: {rep.nonnegative}",
        f"invertible: {rep.invertible}",
        f"positive trace: {rep.positive_trace}",
        f"no common invariant subspace: {rep.no_common_invariant_subspace}",
        f"mixed products positive: {rep.mixed_products_positive} ({rep.mixed_positivity_method})",
        f"extremality spot check: {rep.condition_v_detail}",
        f"overall: {rep.overall.upper()}",
    ]
    if args.spot_check:
        pq = Fraction(1, 2)
        iv = preimage_interval(fam, pq, args.prec)
        with mp.workprec(args.prec):
            mid = (iv.lo.value + iv.hi.value) / 2
        vrep = check_condition_v(fam, mid, pq, max_len=8, prec=args.prec)
        rep.condition_v_spot = vrep.passed
        rep.condition_v_detail = (
            f"{'pass' if vrep.passed else 'fail'} at alpha midpoint of the 1/2 step, "
            f"{vrep.checked} words"
        )
        lines[5] = f"extremality spot check: {rep.condition_v_detail}"
        lines[6] = f"overall: {rep.overall.upper()}"
    payload = {
        "nonnegative": rep.nonnegative,
        "invertible": rep.invertible,
        "positive_trace": rep.positive_trace,
        "no_common_invariant_subspace": rep.no_common_invariant_subspace,
        "mixed_products_positive": rep.mixed_products_positive,
        "method": rep.mixed_positivity_method,
        "condition_v_spot": rep.condition_v_spot,
        "overall": rep.overall,
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if rep.overall == "pass" else EXIT_HYPOTHESIS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sturmjsr",
        description=(
            "Exact joint spectral radius structure of one-parameter "
            "families {A0, alpha*A1} with mechanical-word extremality"
        ),
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    def common(sub, maxlen=False, depth=False):
        sub.add_argument(
            "--family", default="hmst",
            help="builtin family (hmst, kozyakin, bousch-mairesse) or JSON config path",
        )
        sub.add_argument("--prec", type=int, default=256, help="working precision, bits (>= 64)")
        sub.add_argument("--format", choices=("text", "json", "csv"), default="text")
        if maxlen:
            sub.add_argument("--maxlen", type=int, default=12, help="word length cap (<= 20)")
        if depth:
            sub.add_argument("--depth", type=int, default=32, help="mediant descent depth")

    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("interval", help="parameter interval of a rational ratio")
    p.add_argument("fraction", help="ratio p/q in [0, 1]")
    p.add_argument("--exact", action="store_true", help="print exact quadratic endpoints")
    common(p)
    p.set_defaults(fn=cmd_interval)

    p = sp.add_parser("alpha", help="unique parameter of an irrational ratio")
    p.add_argument("--cf", help="coefficients, e.g. '2,1;period=1'")
    p.add_argument("--quadratic", help="a,b,D meaning a + b*sqrt(D)")
    p.add_argument("--decimal", help="decimal value, optionally 'value±radius'")
    p.add_argument("--digits", type=int, default=None, help="decimal accuracy target")
    p.add_argument("--terms", type=int, default=None, help="explicit truncation index")
    common(p)
    p.set_defaults(fn=cmd_alpha)

    p = sp.add_parser("alpha-star", help="the classic non-finiteness parameter")
    p.add_argument("--digits", type=int, default=29)
    common(p)
    p.set_defaults(fn=cmd_alpha_star)

    p = sp.add_parser("staircase", help="all rational steps up to a denominator cap")
    p.add_argument("--qmax", type=int, default=20)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--workers", type=int, default=os.cpu_count(), help="process pool size")
    p.add_argument("--gaps", help="report uncovered mass in 'lo,hi'")
    p.add_argument("--range", help="restrict exported steps to 'lo,hi'")
    p.add_argument("--midpoints", action="store_true", help="append midpoint sample rows")
    common(p)
    p.set_defaults(fn=cmd_staircase)

    p = sp.add_parser("ratio", help="ratio-function value at a parameter")
    p.add_argument("alpha", help="parameter, decimal or fraction")
    common(p, depth=True)
    p.set_defaults(fn=cmd_ratio)

    p = sp.add_parser("oracle", help="brute-force JSR bounds at a parameter")
    p.add_argument("alpha", help="parameter, decimal or fraction")
    common(p, maxlen=True)
    p.set_defaults(fn=cmd_oracle)

    p = sp.add_parser("check", help="verify the structural hypotheses of a family")
    p.add_argument("family_pos", nargs="?", help="family, positional alternative to --family")
    p.add_argument("--depth-check", type=int, default=8, help="mixed-word enumeration depth")
    p.add_argument("--spot-check", action="store_true", help="also spot-check extremality")
    common(p)
    p.set_defaults(fn=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.prec < 64:
        print("error: --prec must be at least 64", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (PreimageError, FamilyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
