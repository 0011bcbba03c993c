"""Normalizing-constant families for powered GED order statistics.

Four affine families are provided: the classical Gumbel pair for the
un-powered maximum, its powered transform, the pair built from the
calibration root b_n (sharper rate when the power differs from the shape),
and the corrected pair that is rate-optimal when the power equals the
shape.  Sample sizes can be given as exact integers or as log n, so
asymptotic sweeps can run far beyond any representable n.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .ged import GedParams
from .specfun import Accuracy, ConvergenceError, DEFAULT_ACCURACY, log_gamma

__all__ = [
    "LinearNorming",
    "BnSolution",
    "AuxFG",
    "resolve_log_n",
    "gumbel_constants",
    "power_constants",
    "solve_bn",
    "hall_constants",
    "optimal_constants",
    "aux_f_g",
]


@dataclass(frozen=True)
class LinearNorming:
    """An affine (scale, shift) pair with the inputs that produced it."""

    scale: float
    shift: float
    family: str  # "gumbel" | "power" | "hall" | "optimal"
    v: float
    p: float
    log_n: float

    def __post_init__(self):
        if not self.scale > 0.0:
            raise ValueError(f"norming scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class BnSolution:
    """Root of the tail-calibration equation together with its residual.

    residual = LHS(b_n)/n - 1; the solver targets |residual| <= 1e-13.
    """

    b_n: float
    residual: float
    log_n: float

    @property
    def n(self) -> float:
        return math.exp(self.log_n)


def resolve_log_n(n: int | float | None, log_n: float | None, min_n: float = 2.0) -> float:
    """Accept either an exact n or log n and return log n."""
    if (n is None) == (log_n is None):
        raise ValueError("pass exactly one of n and log_n")
    if n is not None:
        if n < min_n:
            raise ValueError(f"sample size must be >= {min_n}, got {n}")
        return math.log(n)
    if log_n < math.log(min_n):
        raise ValueError(f"log_n must be >= log({min_n}), got {log_n}")
    return float(log_n)


def gumbel_constants(params: GedParams, n: int | float | None = None, *,
                     log_n: float | None = None) -> LinearNorming:
    """Centering/scaling of the plain maximum under GED(v).

    scale = 2^(1/v) lam / (v (log n)^(1-1/v)); the shift carries the
    log-log and log(2 Gamma(1/v)) corrections.
    """
    ln = resolve_log_n(n, log_n, min_n=3)
    v, lam = params.v, params.lam
    pref = 2.0 ** (1.0 / v) * lam
    scale = pref / (v * ln ** (1.0 - 1.0 / v))
    shift = pref * ln ** (1.0 / v) - scale * (
        (v - 1.0) / v * math.log(ln) + math.log(2.0) + log_gamma(1.0 / v)
    )
    return LinearNorming(scale=scale, shift=shift, family="gumbel",
                         v=v, p=1.0, log_n=ln)


def power_constants(params: GedParams, p: float, n: int | float | None = None, *,
                    log_n: float | None = None) -> LinearNorming:
    """Powered transform of the Gumbel pair: (p a b^(p-1), b^p)."""
    if not p > 0.0:
        raise ValueError(f"power index must be positive, got {p}")
    base = gumbel_constants(params, n, log_n=log_n)
    if base.shift <= 0.0:
        raise ValueError(
            f"gumbel shift {base.shift} is not positive at log_n={base.log_n}; "
            "n too small for the powered transform"
        )
    return LinearNorming(
        scale=p * base.scale * base.shift ** (p - 1.0),
        shift=base.shift ** p,
        family="power",
        v=params.v,
        p=p,
        log_n=base.log_n,
    )


def _calibration_log_lhs(params: GedParams, b: float) -> float:
    """log of 2^(1/v) lam^(1-v) Gamma(1/v) b^(v-1) exp(b^v / (2 lam^v))."""
    v, lam = params.v, params.lam
    return (math.log(2.0) / v + (1.0 - v) * math.log(lam) + log_gamma(1.0 / v)
            + (v - 1.0) * math.log(b) + b**v / (2.0 * lam**v))


def solve_bn(params: GedParams, n: int | float | None = None, *,
             log_n: float | None = None,
             acc: Accuracy = DEFAULT_ACCURACY) -> BnSolution:
    """Solve the calibration equation LHS(b) = n for b > 0.

    Works on log LHS(b) = log n (the raw equation spans hundreds of orders
    of magnitude).  Newton from b_0 = (2 lam^v log n)^(1/v), safeguarded by
    a bracket that starts at [b_0/2, 2 b_0] and is grown or clipped to the
    increasing branch of the LHS when necessary.
    """
    ln = resolve_log_n(n, log_n, min_n=2)
    v, lam = params.v, params.lam

    def f(b: float) -> float:
        return _calibration_log_lhs(params, b) - ln

    def fprime(b: float) -> float:
        return (v - 1.0) / b + v * b ** (v - 1.0) / (2.0 * lam**v)

    b0 = (2.0 * lam**v * ln) ** (1.0 / v)
    lo, hi = 0.5 * b0, 2.0 * b0
    if v < 1.0:
        # the log LHS decreases up to b_stat and increases after it; the
        # calibration root we want lies on the increasing branch
        b_stat = (2.0 * lam**v * (1.0 - v) / v) ** (1.0 / v)
        lo = max(lo, b_stat * (1.0 + 1e-9))
    trace: list[tuple[float, float]] = []
    for _ in range(acc.max_iter):
        if f(hi) >= 0.0:
            break
        hi *= 2.0
    for _ in range(acc.max_iter):
        if f(lo) <= 0.0:
            break
        if v < 1.0 and lo <= b_stat * (1.0 + 1e-8):
            raise ConvergenceError(
                f"no calibration root on the increasing branch for v={v}, "
                f"log_n={ln}; trace={trace}"
            )
        lo = 0.5 * lo if v >= 1.0 else 0.5 * (lo + b_stat)

    # the log LHS is ~log n near the root, so its double-precision
    # evaluation noise scales with log n; the residual target does too
    f_tol = max(1e-13, abs(ln) * 5e-15)
    b = min(max(b0, lo), hi)
    for _ in range(acc.max_iter):
        fb = f(b)
        trace.append((b, fb))
        if fb > 0.0:
            hi = min(hi, b)
        else:
            lo = max(lo, b)
        step = -fb / fprime(b)
        b_new = b + step
        if not lo <= b_new <= hi:
            b_new = 0.5 * (lo + hi)
        if abs(fb) < f_tol and abs(b_new - b) <= acc.rel_tol * abs(b_new):
            b = b_new
            break
        b = b_new
    else:
        raise ConvergenceError(
            f"calibration solve did not converge for v={v}, log_n={ln}; "
            f"iterates: {trace[-8:]}"
        )
    return BnSolution(b_n=b, residual=math.expm1(f(b)), log_n=ln)


def hall_constants(params: GedParams, p: float, n: int | float | None = None, *,
                   log_n: float | None = None,
                   acc: Accuracy = DEFAULT_ACCURACY) -> LinearNorming:
    """Norming built on the calibration root: (2 p lam^v b^(p-v) / v, b^p)."""
    if not p > 0.0:
        raise ValueError(f"power index must be positive, got {p}")
    sol = solve_bn(params, n, log_n=log_n, acc=acc)
    v, lam = params.v, params.lam
    b = sol.b_n
    return LinearNorming(
        scale=2.0 * p / v * lam**v * b ** (p - v),
        shift=b**p,
        family="hall",
        v=v,
        p=p,
        log_n=sol.log_n,
    )


def optimal_constants(params: GedParams, n: int | float | None = None, *,
                      log_n: float | None = None,
                      acc: Accuracy = DEFAULT_ACCURACY) -> LinearNorming:
    """Rate-optimal norming for the power-equals-shape case.

    shift = b^v + 4 (1/v - 1) lam^(2v) b^(-v) and scale = f(b^v) with the
    same correction, so both tend to the plain pair (2 lam^v, b^v).  The
    v = 1 case is rejected: there the correction vanishes identically and
    the powered family already covers it.
    """
    v, lam = params.v, params.lam
    if abs(v - 1.0) <= 1e-12:
        raise ValueError(
            "optimal constants are undefined at v = 1; use power_constants"
        )
    sol = solve_bn(params, n, log_n=log_n, acc=acc)
    bv = sol.b_n**v
    corr = 4.0 * (1.0 / v - 1.0) * lam ** (2.0 * v) / bv
    return LinearNorming(
        scale=2.0 * lam**v + corr,
        shift=bv + corr,
        family="optimal",
        v=v,
        p=v,
        log_n=sol.log_n,
    )


class AuxFG(NamedTuple):
    """Auxiliary pair (f(t), g(t)) of the powered-tail product form."""

    f: float
    g: float

    @property
    def degenerate(self) -> bool:
        return abs(self.f) < 1e-10


def aux_f_g(params: GedParams, t: float) -> AuxFG:
    """f(t) = 2 lam^v (1 + 2 lam^v (1/v - 1) / t), g(t) = 1 - 4 (1/v -1)(1/v - 2) lam^(2v) / t^2."""
    if not t > 0.0:
        raise ValueError(f"t must be positive, got {t}")
    v, lam = params.v, params.lam
    vi = 1.0 / v
    f = 2.0 * lam**v * (1.0 + 2.0 * lam**v * (vi - 1.0) / t)
    g = 1.0 - 4.0 * (vi - 1.0) * (vi - 2.0) * lam ** (2.0 * v) / t**2
    return AuxFG(f=f, g=g)
