"""Sweep orchestration: walk a (v, p, r, n, x) grid, evaluate the exact
order-statistic CDF against the Gumbel limit and the theorem corrections,
and emit the rows as CSV or JSON with deterministic bytes."""

import json
import math
from dataclasses import dataclass

import numpy as np

from .expansions import (
    DEFAULT_Q_VARIANT,
    classify_case,
    case_norming,
    exact_deficit,
    theorem_expansion,
)
from .ged import make_params
from .orderstats import (
    OrderStatSpec,
    cdf_gap_from_deficit,
    mc_powered_cdf,
    poisson_remainder_bound,
)

__all__ = [
    "ConfigError",
    "SweepConfig",
    "VerificationRow",
    "CSV_HEADER",
    "run_sweep",
    "emit",
]

CSV_HEADER = ("v,p,r,n,x,exact,limit,err,scaled_err1,target1,"
              "scaled_err2,target2,theta_deficit,remainder_bound,error")
_ROW_KEYS = CSV_HEADER.split(",")

_CASE_TAGS = ("t1_i", "t1_ii", "t1_iii", "t2_i", "t2_ii")


class ConfigError(ValueError):
    """A sweep configuration violates its invariants."""


@dataclass(frozen=True)
class SweepConfig:
    """Grid, mode, and output description of one verification sweep."""

    v_list: tuple[float, ...]
    p_list: tuple[float, ...]
    r_list: tuple[int, ...]
    n_ladder: tuple[int, ...] = ()
    log_n_ladder: tuple[float, ...] = ()
    x_min: float = 0.0
    x_max: float = 0.0
    x_step: float = 1.0
    theorem: str | None = None  # None, "1", "2", or a case tag
    out: str | None = None
    fmt: str = "csv"
    seed: int = 0
    mc_reps: int = 0
    q_variant: str = DEFAULT_Q_VARIANT

    def __post_init__(self):
        if not self.v_list or not self.p_list or not self.r_list:
            raise ConfigError("v, p and r grids must be nonempty")
        if any(v <= 0 for v in self.v_list) or any(p <= 0 for p in self.p_list):
            raise ConfigError("v and p values must be positive")
        if any(r < 1 for r in self.r_list):
            raise ConfigError("ranks must be >= 1")
        if bool(self.n_ladder) == bool(self.log_n_ladder):
            raise ConfigError("exactly one of n_ladder and log_n_ladder is required")
        ladder = self.n_ladder or self.log_n_ladder
        if any(b <= a for a, b in zip(ladder, ladder[1:])) :
            raise ConfigError("the n ladder must be strictly increasing")
        if not self.x_step > 0:
            raise ConfigError(f"x_step must be positive, got {self.x_step}")
        if self.x_max < self.x_min:
            raise ConfigError("empty x grid: x_max < x_min")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")
        if self.q_variant not in ("eq22", "eq34"):
            raise ConfigError(f"q_variant must be eq22 or eq34, got {self.q_variant!r}")
        if self.theorem is not None and self.theorem not in ("1", "2") + _CASE_TAGS:
            raise ConfigError(f"theorem filter must be 1, 2 or a case tag, "
                              f"got {self.theorem!r}")
        if self.mc_reps < 0:
            raise ConfigError("mc_reps must be >= 0")

    def x_grid(self) -> tuple[float, ...]:
        count = int(math.floor((self.x_max - self.x_min) / self.x_step + 1e-9)) + 1
        return tuple(self.x_min + k * self.x_step for k in range(count))


@dataclass(frozen=True)
class VerificationRow:
    """One sweep point with the double-limit bookkeeping columns."""

    v: float
    p: float
    r: int
    n: float
    x: float
    exact: float = math.nan
    limit: float = math.nan
    err: float = math.nan
    scaled_err1: float = math.nan
    target1: float = math.nan
    scaled_err2: float = math.nan
    target2: float = math.nan
    theta_deficit: float = math.nan
    remainder_bound: float = math.nan
    error: str = ""


def _resolve_theorem(theorem: str | None, v: float, p: float):
    """Map the filter to a concrete case for one (v, p)."""
    if theorem in ("1", "2"):
        return classify_case(v, p, theorem=int(theorem))
    if theorem is None:
        branch = 1 if abs(v - 1.0) <= 1e-12 else 2
        return classify_case(v, p, theorem=branch)
    case = classify_case(v, p, theorem=1 if theorem.startswith("t1") else 2)
    if case.tag != theorem:
        raise ValueError(f"(v={v}, p={p}) belongs to case {case.tag!r}, "
                         f"not {theorem!r}")
    return case


def _eval_point(config: SweepConfig, v: float, p: float, r: int,
                n: int | None, log_n: float | None, x: float,
                row_index: int) -> VerificationRow:
    n_value = float(n) if n is not None else math.exp(log_n) if log_n < 700 else math.inf
    try:
        params = make_params(v)
        case = _resolve_theorem(config.theorem, v, p)
        norming = case_norming(params, case, n, log_n=log_n)
        deficit = exact_deficit(params, case, norming, x)
        if n is not None:
            gap = cdf_gap_from_deficit(r, x, deficit, n=float(n))
            bound = 0.0
        else:
            gap = cdf_gap_from_deficit(r, x, deficit, log_n=log_n)
            bound = poisson_remainder_bound(r, x, deficit, log_n)
        ee = theorem_expansion(params, case, r, n, x, log_n=log_n,
                               q_variant=config.q_variant)
        limit = ee.leading
        target1 = ee.first_order * ee.scale_first
        target2 = ee.second_order * ee.scale_second
        scaled_err1 = ee.scale_first * gap
        mult2 = ee.scale_second / ee.scale_first
        scaled_err2 = mult2 * (scaled_err1 - target1)
        exact = min(1.0, max(0.0, limit + gap))
        error = ""
        if config.mc_reps > 0 and n is not None:
            error = _mc_note(config, params, case, norming, r, n, x,
                             exact, row_index)
        return VerificationRow(
            v=v, p=p, r=r, n=n_value, x=x,
            exact=exact, limit=limit, err=gap,
            scaled_err1=scaled_err1, target1=target1,
            scaled_err2=scaled_err2, target2=target2,
            theta_deficit=deficit, remainder_bound=bound, error=error,
        )
    except Exception as exc:  # per-row: record, never abort the sweep
        msg = f"{type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
        return VerificationRow(v=v, p=p, r=r, n=n_value, x=x, error=msg)


def _mc_note(config, params, case, norming, r, n, x, exact, row_index) -> str:
    """Cross-check the exact value against Monte Carlo; note 3-sigma misses."""
    from .orderstats import BudgetError

    y = norming.scale * x + norming.shift
    spec = OrderStatSpec(n=int(n), r=r, p=case.p)
    row_seed = int(np.random.SeedSequence((config.seed, row_index)).generate_state(1)[0])
    try:
        est, se = mc_powered_cdf(params, spec, y, config.mc_reps, row_seed)
    except BudgetError:
        return "mc_skipped_budget"
    if se == 0.0:
        se = math.sqrt(0.25 / config.mc_reps)
    z = (est - exact) / se
    if abs(z) > 3.0:
        return f"mc_3sigma_violation(z={z:.2f})"
    return ""


def run_sweep(config: SweepConfig, progress=None) -> list[VerificationRow]:
    """Evaluate every grid point in (v, p, r, n, x)-lexicographic order."""
    rows: list[VerificationRow] = []
    xs = config.x_grid()
    ladder: list[tuple[int | None, float | None]]
    if config.n_ladder:
        ladder = [(int(n), None) for n in config.n_ladder]
    else:
        ladder = [(None, float(ln)) for ln in config.log_n_ladder]
    total = (len(config.v_list) * len(config.p_list) * len(config.r_list)
             * len(ladder) * len(xs))
    done = 0
    for v in sorted(config.v_list):
        for p in sorted(config.p_list):
            for r in sorted(config.r_list):
                for n, log_n in ladder:
                    for x in xs:
                        rows.append(_eval_point(config, v, p, r, n, log_n, x,
                                                row_index=done))
                        done += 1
                        if progress is not None and done % 50 == 0:
                            print(f"{done}/{total} points", file=progress)
    if progress is not None:
        print(f"{done}/{total} points", file=progress)
    return rows


def _fmt_float(value: float) -> str:
    return format(value, ".17g")


def _row_values(row: VerificationRow) -> list:
    return [row.v, row.p, row.r, row.n, row.x, row.exact, row.limit, row.err,
            row.scaled_err1, row.target1, row.scaled_err2, row.target2,
            row.theta_deficit, row.remainder_bound, row.error]


def _csv_lines(rows: list[VerificationRow]) -> list[str]:
    lines = [CSV_HEADER]
    for row in rows:
        vals = _row_values(row)
        cells = []
        for key, val in zip(_ROW_KEYS, vals):
            if key == "r":
                cells.append(str(int(val)))
            elif key == "error":
                cells.append(val)
            elif key == "n" and float(val).is_integer() and abs(val) < 2**53:
                cells.append(str(int(val)))
            else:
                cells.append(_fmt_float(val))
        lines.append(",".join(cells))
    return lines


def _json_scalar(key: str, val) -> str:
    if key == "error":
        return json.dumps(val)
    if key == "r":
        return str(int(val))
    if key == "n" and float(val).is_integer() and abs(val) < 2**53:
        return str(int(val))
    f = float(val)
    if math.isnan(f) or math.isinf(f):
        return "null"
    return _fmt_float(f)


def _json_text(rows: list[VerificationRow]) -> str:
    out = ["["]
    for i, row in enumerate(rows):
        fields = ", ".join(
            f"{json.dumps(k)}: {_json_scalar(k, v)}"
            for k, v in zip(_ROW_KEYS, _row_values(row))
        )
        out.append("  {" + fields + ("}," if i + 1 < len(rows) else "}"))
    out.append("]")
    return "\n".join(out) + "\n"


def rows_from_json(text: str) -> list[VerificationRow]:
    """Parse emit()'s JSON back into rows (inverse of the json format)."""
    rows = []
    for obj in json.loads(text):
        vals = {k: (math.nan if obj[k] is None and k != "error" else obj[k])
                for k in _ROW_KEYS}
        rows.append(VerificationRow(**vals))
    return rows


def emit(rows: list[VerificationRow], fmt: str, path: str) -> str:
    """Write rows to ``path`` as csv or json; bytes are deterministic."""
    if fmt == "csv":
        text = "\n".join(_csv_lines(rows)) + "\n"
    elif fmt == "json":
        text = _json_text(rows)
    else:
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write sweep output to {path!r}: {exc}") from exc
    return path
