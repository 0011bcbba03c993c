"""Command-line front end.

Single-point queries (dist, norming, solve-bn, exact, expand, simulate)
print space-separated numbers on stdout; ``verify`` runs a sweep and
writes a CSV/JSON file.  Progress goes to stderr.  Exit codes: 0 on
success, 2 for configuration errors, 3 when an iterative solve fails to
converge in a single-point command.
"""

import argparse
import json
import sys

from . import __version__
from .expansions import (
    DEFAULT_Q_VARIANT,
    classify_case,
    theorem_expansion,
)
from .ged import cdf, make_params, pdf, quantile, survival
from .harness import ConfigError, SweepConfig, emit, run_sweep
from .norming import (
    gumbel_constants,
    hall_constants,
    optimal_constants,
    power_constants,
    solve_bn,
)
from .orderstats import (
    BudgetError,
    OrderStatSpec,
    exact_powered_cdf,
    mc_powered_cdf,
    poisson_powered_cdf,
)
from .specfun import ConvergenceError

_G17 = ".17g"


def _fmt(*values: float) -> str:
    return " ".join(format(v, _G17) for v in values)


def _parse_n_item(text: str) -> int:
    value = float(text)
    if not value.is_integer() or not 1 <= value < 2**63:
        raise argparse.ArgumentTypeError(
            f"n must be an integer in [1, 2^63), got {text!r}"
        )
    return int(value)


def _parse_list(text: str, conv):
    return tuple(conv(item) for item in text.split(",") if item)


def _add_mode_args(sub, n_required=True):
    group = sub.add_mutually_exclusive_group(required=n_required)
    group.add_argument("--n", type=_parse_n_item, help="exact sample size")
    group.add_argument("--ln-n", dest="ln_n", type=float,
                       help="log of the sample size (asymptotic mode)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gedpower",
        description="Powered GED order statistics: exact laws, norming "
                    "constants, and convergence-rate verification sweeps.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("dist", help="evaluate pdf/cdf/survival/quantile at a point")
    sp.add_argument("--v", type=float, required=True)
    sp.add_argument("--what", choices=("pdf", "cdf", "survival", "quantile"),
                    required=True)
    sp.add_argument("--x", type=float, help="evaluation point (pdf/cdf/survival)")
    sp.add_argument("--u", type=float, help="probability level (quantile)")

    sp = subs.add_parser("norming", help="print scale and shift of a family")
    sp.add_argument("--family", choices=("gumbel", "power", "hall", "optimal"),
                    required=True)
    sp.add_argument("--v", type=float, required=True)
    sp.add_argument("--p", type=float, default=1.0)
    _add_mode_args(sp)

    sp = subs.add_parser("solve-bn", help="solve the tail-calibration equation")
    sp.add_argument("--v", type=float, required=True)
    _add_mode_args(sp)

    sp = subs.add_parser("exact", help="exact P(|M_{n,r}|^p <= y)")
    sp.add_argument("--v", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--y", type=float, required=True)
    _add_mode_args(sp)

    sp = subs.add_parser("expand", help="theorem terms and scales at a point")
    sp.add_argument("--v", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--theorem", choices=("1", "2"), required=True)
    sp.add_argument("--q-variant", dest="q_variant",
                    choices=("eq22", "eq34"), default=DEFAULT_Q_VARIANT)
    _add_mode_args(sp)

    sp = subs.add_parser("verify", help="run a sweep and write CSV/JSON rows")
    sp.add_argument("--config", help="JSON file with sweep defaults")
    sp.add_argument("--v", type=str, help="comma-separated shape grid")
    sp.add_argument("--p", type=str, help="comma-separated power grid")
    sp.add_argument("--r", type=str, help="comma-separated rank grid")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--n", type=str, help="comma-separated integer ladder")
    group.add_argument("--ln-n", dest="ln_n", type=str,
                       help="comma-separated log-n ladder")
    sp.add_argument("--x-min", type=float)
    sp.add_argument("--x-max", type=float)
    sp.add_argument("--x-step", type=float)
    sp.add_argument("--theorem", help="1, 2, or a case tag like t1_iii")
    sp.add_argument("--out", help="output path")
    sp.add_argument("--format", dest="fmt", choices=("csv", "json"))
    sp.add_argument("--seed", type=int)
    sp.add_argument("--mc-reps", dest="mc_reps", type=int)
    sp.add_argument("--q-variant", dest="q_variant", choices=("eq22", "eq34"))

    sp = subs.add_parser("simulate", help="Monte Carlo estimate of the exact law")
    sp.add_argument("--v", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--y", type=float, required=True)
    sp.add_argument("--n", type=_parse_n_item, required=True)
    sp.add_argument("--mc-reps", dest="mc_reps", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_dist(args) -> str:
    params = make_params(args.v)
    if args.what == "quantile":
        if args.u is None:
            raise ConfigError("quantile needs --u")
        return _fmt(quantile(params, args.u))
    if args.x is None:
        raise ConfigError(f"{args.what} needs --x")
    fn = {"pdf": pdf, "cdf": cdf, "survival": survival}[args.what]
    return _fmt(fn(params, args.x))


def _cmd_norming(args) -> str:
    params = make_params(args.v)
    if args.family == "gumbel":
        nm = gumbel_constants(params, args.n, log_n=args.ln_n)
    elif args.family == "power":
        nm = power_constants(params, args.p, args.n, log_n=args.ln_n)
    elif args.family == "hall":
        nm = hall_constants(params, args.p, args.n, log_n=args.ln_n)
    else:
        nm = optimal_constants(params, args.n, log_n=args.ln_n)
    return _fmt(nm.scale, nm.shift)


def _cmd_solve_bn(args) -> str:
    sol = solve_bn(make_params(args.v), args.n, log_n=args.ln_n)
    return _fmt(sol.b_n, sol.residual)


def _cmd_exact(args) -> str:
    params = make_params(args.v)
    if args.n is not None:
        spec = OrderStatSpec(n=args.n, r=args.r, p=args.p)
        return _fmt(exact_powered_cdf(params, spec, args.y))
    return _fmt(poisson_powered_cdf(params, args.r, args.p, args.y, args.ln_n))


def _cmd_expand(args) -> str:
    params = make_params(args.v)
    case = classify_case(args.v, args.p, theorem=int(args.theorem))
    ee = theorem_expansion(params, case, args.r, args.n, args.x,
                           log_n=args.ln_n, q_variant=args.q_variant)
    return _fmt(ee.leading, ee.first_order, ee.second_order,
                ee.scale_first, ee.scale_second)


def _cmd_simulate(args) -> str:
    params = make_params(args.v)
    spec = OrderStatSpec(n=args.n, r=args.r, p=args.p)
    est, se = mc_powered_cdf(params, spec, args.y, args.mc_reps, args.seed)
    return _fmt(est, se)


def _sweep_config(args) -> SweepConfig:
    file_cfg = {}
    if args.config:
        with open(args.config) as fh:
            file_cfg = json.load(fh)

    def pick(flag_value, key, default=None):
        if flag_value is not None:
            return flag_value
        return file_cfg.get(key, default)

    v_list = pick(args.v and _parse_list(args.v, float), "v")
    p_list = pick(args.p and _parse_list(args.p, float), "p")
    r_list = pick(args.r and _parse_list(args.r, int), "r")
    n_ladder = pick(args.n and _parse_list(args.n, _parse_n_item), "n")
    ln_ladder = pick(args.ln_n and _parse_list(args.ln_n, float), "ln_n")
    if v_list is None or p_list is None or r_list is None:
        raise ConfigError("verify needs --v, --p and --r (flags or config file)")
    return SweepConfig(
        v_list=tuple(v_list),
        p_list=tuple(p_list),
        r_list=tuple(int(r) for r in r_list),
        n_ladder=tuple(int(n) for n in (n_ladder or ())),
        log_n_ladder=tuple(float(l) for l in (ln_ladder or ())),
        x_min=pick(args.x_min, "x_min", 0.0),
        x_max=pick(args.x_max, "x_max", 0.0),
        x_step=pick(args.x_step, "x_step", 1.0),
        theorem=pick(args.theorem, "theorem"),
        out=pick(args.out, "out"),
        fmt=pick(args.fmt, "format", "csv"),
        seed=int(pick(args.seed, "seed", 0)),
        mc_reps=int(pick(args.mc_reps, "mc_reps", 0)),
        q_variant=pick(args.q_variant, "q_variant", DEFAULT_Q_VARIANT),
    )


def _cmd_verify(args) -> int:
    config = _sweep_config(args)
    if not config.out:
        raise ConfigError("verify needs --out (flag or config file)")
    rows = run_sweep(config, progress=sys.stderr)
    emit(rows, config.fmt, config.out)
    print(f"wrote {len(rows)} rows to {config.out}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        handler = {
            "dist": _cmd_dist,
            "norming": _cmd_norming,
            "solve-bn": _cmd_solve_bn,
            "exact": _cmd_exact,
            "expand": _cmd_expand,
            "simulate": _cmd_simulate,
        }[args.command]
        print(handler(args))
        return 0
    except (ConfigError, BudgetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
