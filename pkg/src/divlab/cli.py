"""Deterministic command-line surface for the divergence laboratory.

Every subcommand emits machine-readable JSON (CSV for series tables) and
honors one exit-code contract: 0 for success or a verified certificate, 2 for
a certificate that failed verification or an exhausted certified search, 1
for usage errors and violated engine preconditions.  Identical flags produce
byte-identical output (Monte Carlo included, via the mandatory seed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from .averages import (
    SearchExhaustedError,
    cube_certificate_check,
    find_riemann_n,
    form_time_set,
    monte_carlo_average,
    sweep_superlevel,
    degenerate_lower_ratio,
    dependent_forms_lower_ratio,
)
from .hilbert import h3_evaluate, h3_ratio_series, h3_series_columns, h3_witness_evaluations
from .intervals import rat, rat_str, real
from .linforms import classify
from .scenarios import (
    blowup_series,
    cube_family,
    cube_threshold,
    degenerate_threshold,
    furstenberg_family,
    furstenberg_threshold,
    furstenberg_threshold_log_form,
    _eps_key,
)


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit 2 by default; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit_json(data, path: str | None) -> None:
    text = json.dumps(data, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_csv(header, rows, path: str | None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if path:
        Path(path).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _rat_real(q: Fraction) -> dict:
    return {"exact": rat_str(q), "real": real(q)}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_construct_thm1(args) -> int:
    scen = furstenberg_family(args.k)
    data = scen.to_json()
    data["intervals"] = {
        f"factor_{i + 1}": u.to_json() for i, u in enumerate(scen.factors)
    }
    data["intervals"]["witness"] = scen.witness.to_json()
    _emit_json(data, args.out)
    return 0


def _cmd_construct_cubes(args) -> int:
    scen = cube_family(args.m, args.k)
    _emit_json(scen.to_json(), args.out)
    return 0


def _cmd_verify_claim(args) -> int:
    scen = furstenberg_family(args.k)
    res = sweep_superlevel(
        scen.factors, scen.coefficients, scen.level, window=(-1, 0)
    )
    witness_in = scen.witness.clip(-1, 0).issubset(res.superlevel)
    target = Fraction(1, 8) - scen.level
    meas_ok = res.superlevel_measure >= target
    verified = witness_in and meas_ok
    _emit_json(
        {
            "k": args.k,
            "lambda": rat_str(scen.level),
            "window": [rat_str(-1), rat_str(0)],
            "target": rat_str(target),
            "superlevel_measure": _rat_real(res.superlevel_measure),
            "witness_contained": witness_in,
            "measure_reached": meas_ok,
            "breakpoints": len(res.function.xs),
            "superlevel": res.superlevel.to_json(),
            "verified": verified,
        },
        args.out,
    )
    return 0 if verified else 2


def _cmd_find_nk(args) -> int:
    level, target = rat(args.level), rat(args.target)
    try:
        cert = find_riemann_n(args.k, level, target, max_n=args.max_n)
    except SearchExhaustedError as exc:
        _emit_json(
            {
                "k": args.k,
                "level": rat_str(level),
                "target": rat_str(target),
                "max_n": args.max_n,
                "verified": False,
                "error": str(exc),
            },
            args.out,
        )
        return 2
    _emit_json(
        {
            "k": args.k,
            "level": rat_str(cert.level),
            "target": rat_str(cert.target),
            "max_n": args.max_n,
            "n_steps": cert.n_steps,
            "measure": _rat_real(cert.measure),
            "verified": True,
        },
        args.out,
    )
    return 0


def _cmd_verify_cubes(args) -> int:
    scen = cube_family(args.m, args.k)
    t_tail = rat(args.t_tail) if args.t_tail is not None else scen.witness_tail
    if args.tamper:
        t_tail *= 2
    report = cube_certificate_check(scen, t_tail)
    failures = [c for c in report.checks if not c.passed]
    meas = scen.witness.measure()
    meas_ok = meas == Fraction(1, args.m + 1)
    cards = scen.cardinalities()
    card_rows = {}
    cards_ok = True
    for eps in sorted(cards):
        bound = scen.cardinality_bound(eps)
        ok = cards[eps] <= bound
        cards_ok &= ok
        card_rows[_eps_key(eps)] = {"count": cards[eps], "bound": bound, "ok": ok}
    verified = report.all_pass and meas_ok and cards_ok
    _emit_json(
        {
            "m": args.m,
            "k": args.k,
            "t_tail": rat_str(t_tail),
            "tampered": bool(args.tamper),
            "checks_total": len(report.checks),
            "checks_failed": len(failures),
            "first_failures": [
                {
                    "x": rat_str(c.x),
                    "eps": _eps_key(c.eps),
                    "base_in_form": c.base_in_form,
                    "slack": rat_str(c.slack),
                }
                for c in failures[:5]
            ],
            "witness_measure": rat_str(meas),
            "witness_measure_expected": rat_str(Fraction(1, args.m + 1)),
            "measure_ok": meas_ok,
            "cardinalities": card_rows,
            "cardinalities_ok": cards_ok,
            "integral_lower_bound": _rat_real(report.integral_lower_bound),
            "verified": verified,
        },
        args.out,
    )
    return 0 if verified else 2


def _series_csv(series, h3_columns=None):
    if h3_columns is not None:
        header = ["index", "lower_norm_bound", "product_of_norms", "value",
                  "step_ratio", "verdict"]
        rows = []
        for i, (k, bound, norms, _ratio) in enumerate(h3_columns):
            step = "" if i == 0 else repr(real(series.step_ratios[i - 1]))
            rows.append(
                [k, repr(real(bound)), repr(real(norms)),
                 repr(real(series.values[i])), step, series.verdict]
            )
        return header, rows
    header = ["index", "value", "step_ratio", "verdict"]
    rows = []
    for i, k in enumerate(series.indices):
        step = "" if i == 0 else repr(real(series.step_ratios[i - 1]))
        rows.append([k, repr(real(series.values[i])), step, series.verdict])
    return header, rows


def _cmd_blowup(args) -> int:
    if args.kind == "h3":
        series = h3_ratio_series(args.p, args.kmax, normalization=args.normalization)
        columns = h3_series_columns(args.p, args.kmax, normalization=args.normalization)
    else:
        series = blowup_series(
            args.kind, args.p, args.kmax,
            m=args.m, weighted=args.weighted, mode=args.mode,
        )
        columns = None
    if args.csv is not None:
        header, rows = _series_csv(series, columns)
        _emit_csv(header, rows, args.csv or None)
    if args.csv is None or args.out:
        _emit_json(series.to_json(), args.out)
    return 0


def _cmd_h3_eval(args) -> int:
    scen = furstenberg_family(args.k)

    def enc(ev):
        return {
            "x": rat_str(ev.x),
            "support": ev.support.to_json(),
            "value": "inf" if ev.diverges else real(ev.value),
            "lower_bound": rat_str(ev.lower_bound),
            "diverges": ev.diverges,
        }

    if args.x is not None:
        first, second, third = scen.factors
        ev = h3_evaluate(rat(args.x), first, second, third)
        _emit_json({"k": args.k, "lambda": rat_str(scen.level),
                    "evaluations": [enc(ev)]}, args.out)
        return 0
    evs = h3_witness_evaluations(scen)
    min_lower = min(ev.lower_bound for ev in evs)
    verified = min_lower >= scen.level
    _emit_json(
        {
            "k": args.k,
            "lambda": rat_str(scen.level),
            "count": len(evs),
            "min_lower_bound": _rat_real(min_lower),
            "evaluations": [enc(ev) for ev in evs],
            "verified": verified,
        },
        args.out,
    )
    return 0 if verified else 2


def _cmd_degenerate(args) -> int:
    if args.p4prime is not None:
        if args.r is not None or args.b is not None or args.p is not None:
            raise ValueError("--p4prime (squares) and --r/--b/--p are exclusive")
        ratio, integral = degenerate_lower_ratio(args.big_m, args.p4prime, args.L)
        _emit_json(
            {
                "family": "squares",
                "M": args.big_m,
                "p4prime": real(args.p4prime),
                "L": real(args.L),
                "integral": real(integral),
                "ratio": real(ratio),
                "threshold_p4prime": "1/2",
                "grows": args.p4prime < 0.5,
            },
            args.out,
        )
        return 0
    if args.r is None or args.b is None or args.p is None:
        raise ValueError("need either --p4prime or all of --r, --b, --p")
    b = [int(v) for v in args.b.split(",")]
    res = dependent_forms_lower_ratio(args.r, b, args.big_m, args.p, args.L)
    _emit_json(
        {
            "family": "dependent-forms",
            "r": args.r,
            "b": b,
            "M": args.big_m,
            "p": real(args.p),
            "L": real(args.L),
            "integral": real(res.integral),
            "ratio": real(res.ratio),
            "threshold": rat_str(res.threshold),
            "grows": res.grows,
        },
        args.out,
    )
    return 0


def _cmd_classify(args) -> int:
    rows = [
        [int(v) for v in row.replace(",", " ").split()]
        for row in args.rows.split(";")
        if row.strip()
    ]
    _emit_json(classify(rows).to_json(), args.out)
    return 0


def _cmd_thresholds(args) -> int:
    cub = cube_threshold(args.m)
    deg = degenerate_threshold(args.r)
    _emit_json(
        {
            "furstenberg": {
                "real": real(furstenberg_threshold()),
                "log_form_real": real(furstenberg_threshold_log_form()),
            },
            "cubes": {"m": args.m, "exact": rat_str(cub), "real": real(cub)},
            "degenerate": {"r": args.r, "exact": rat_str(deg), "real": real(deg)},
        },
        args.out,
    )
    return 0


def _cmd_mc_average(args) -> int:
    scen = furstenberg_family(args.k)
    x = rat(args.x)
    eps = rat(args.eps)
    est = monte_carlo_average(
        [[c] for c in scen.coefficients], scen.factors, x, eps,
        samples=args.samples, seed=args.seed,
    )
    exact = form_time_set(
        scen.factors, scen.coefficients, x, t_domain=(0, eps)
    ).measure() / eps
    z = 0.0 if est.stderr == 0 else (est.estimate - float(exact)) / est.stderr
    agrees = abs(est.estimate - float(exact)) <= 4 * est.stderr or est.stderr == 0
    _emit_json(
        {
            "k": args.k,
            "x": rat_str(x),
            "eps": rat_str(eps),
            "samples": est.samples,
            "seed": est.seed,
            "estimate": real(est.estimate),
            "stderr": real(est.stderr),
            "exact": _rat_real(exact),
            "z_score": real(z),
            "within_4_sigma": agrees,
        },
        args.out,
    )
    return 0 if agrees else 2


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="divlab",
        description="exact divergence-counterexample laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--out", help="write JSON to this path instead of stdout")
        return p

    p = add("construct-thm1", _cmd_construct_thm1,
            "build the depth-k triple-average scenario")
    p.add_argument("--k", type=int, required=True)

    p = add("construct-cubes", _cmd_construct_cubes,
            "build the dimension-m depth-k cube scenario")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("verify-claim", _cmd_verify_claim,
            "exact superlevel sweep certificate on [-1, 0]")
    p.add_argument("--k", type=int, required=True)

    p = add("find-nk", _cmd_find_nk,
            "smallest grid size whose discrete superlevel reaches the target")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--level", required=True, help="rational, e.g. 1/192")
    p.add_argument("--target", required=True, help="rational, e.g. 1/9")
    p.add_argument("--max-n", type=int, default=10_000)

    p = add("verify-cubes", _cmd_verify_cubes,
            "symbolic cube certificate (base points and tail slacks)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t-tail", help="override the t-box side (rational)")
    p.add_argument("--tamper", action="store_true",
                   help="double the t-box side; the certificate must fail")

    p = add("blowup", _cmd_blowup, "blow-up series for a scenario")
    p.add_argument("--kind", choices=("thm1", "cubes", "h3"), required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--m", type=int, help="cube dimension (kind=cubes)")
    p.add_argument("--weighted", action="store_true",
                   help="k^-6 weighted variant (kind=thm1)")
    p.add_argument("--mode", choices=("exact", "bound"), default="exact",
                   help="cube cardinalities: exact counts or proven bounds")
    p.add_argument("--normalization", choices=("lebesgue", "normalized"),
                   default="lebesgue", help="factor norms (kind=h3)")
    p.add_argument("--csv", nargs="?", const="", default=None, metavar="PATH",
                   help="emit CSV (to PATH, or stdout if no PATH)")

    p = add("h3-eval", _cmd_h3_eval,
            "singular-integral values at witness base points")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", help="evaluate at one rational point only")

    p = add("degenerate", _cmd_degenerate,
            "truncated quasi-norm ratios for dependent forms")
    p.add_argument("--M", dest="big_m", type=int, default=100)
    p.add_argument("--p4prime", type=float, help="squares family exponent")
    p.add_argument("--r", type=int, help="number of monomials (general family)")
    p.add_argument("--b", help="comma-separated integer coefficients summing to 1")
    p.add_argument("--p", type=float, help="Lebesgue exponent (general family)")
    p.add_argument("--L", type=float, default=100.0, help="truncation radius")

    p = add("classify", _cmd_classify,
            "divergence scenario of an integer linear-forms matrix")
    p.add_argument("--rows", required=True,
                   help="semicolon-separated rows, e.g. '2,0;0,2;1,1'")

    p = add("thresholds", _cmd_thresholds, "the three divergence thresholds")
    p.add_argument("--m", type=int, default=3, help="cube dimension")
    p.add_argument("--r", type=int, default=3, help="dependent-monomial count")

    p = add("mc-average", _cmd_mc_average,
            "seeded Monte Carlo vs exact integral at one point")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--x", required=True, help="rational base point")
    p.add_argument("--eps", default="1", help="cube side (rational)")
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--seed", type=int, required=True)

    return parser


# flags whose values may start with '-' (rationals, coefficient lists)
_VALUE_FLAGS = {"--x", "--b", "--rows", "--t-tail", "--level", "--target", "--eps"}


def _merge_negative_values(argv):
    """Turn ['--x', '-2/3'] into ['--x=-2/3'] so argparse keeps the value."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and re.match(r"-[\d.]", argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = _build_parser().parse_args(_merge_negative_values(argv))
    try:
        return args.func(args)
    except (ValueError, TypeError, ZeroDivisionError, OverflowError) as exc:
        print(f"divlab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
