"""The general error distribution GED(v): density, distribution, tails,
quantiles, sampling, and the closed-form tail expansions used by the
higher-order limit theory."""

import math
from dataclasses import dataclass

import numpy as np

from .specfun import (
    DEFAULT_ACCURACY,
    Accuracy,
    inv_reg_gamma_upper,
    log_gamma,
    log_reg_gamma_upper,
    reg_gamma_upper,
)

__all__ = [
    "GedParams",
    "TailExpansion",
    "make_params",
    "pdf",
    "cdf",
    "survival",
    "log_survival",
    "quantile",
    "sample_stream",
    "tail_expansion_coefficients",
    "tail_survival_expansion",
    "powered_abs_survival",
    "powered_abs_survival_expansion",
]

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class GedParams:
    """Shape v and the derived scale lambda of one GED(v) law.

    lambda(v) = sqrt(2^(-2/v) Gamma(1/v) / Gamma(3/v)) normalizes the
    variance to one; v = 2 is the standard normal law (lambda = 1) and
    v = 1 the Laplace law (lambda = 2^(-3/2)).

    ``tail_factor_degenerate`` flags |1 + 2(1/v - 1) lambda^v| < 1e-8,
    where the constant prefactor of the powered-tail product
    representation vanishes (it does so at v = 2).  Only that diagnostic
    representation is affected; every quantity computed here stays valid.
    """

    v: float
    lam: float
    tail_factor_degenerate: bool = False


def make_params(v: float) -> GedParams:
    """Build GedParams from the shape parameter v > 0."""
    if not v > 0.0:
        raise ValueError(f"shape parameter v must be positive, got {v}")
    lam = math.exp(0.5 * (-2.0 / v * _LOG2 + log_gamma(1.0 / v) - log_gamma(3.0 / v)))
    degenerate = abs(1.0 + 2.0 * (1.0 / v - 1.0) * lam**v) < 1e-8
    return GedParams(v=v, lam=lam, tail_factor_degenerate=degenerate)


def _log_norm_const(params: GedParams) -> float:
    """log of the density normalization v / (lambda 2^(1+1/v) Gamma(1/v))."""
    v = params.v
    return (math.log(v) - math.log(params.lam) - (1.0 + 1.0 / v) * _LOG2
            - log_gamma(1.0 / v))


def pdf(params: GedParams, x: float) -> float:
    """Density g_v(x) = v exp(-|x/lambda|^v / 2) / (lambda 2^(1+1/v) Gamma(1/v))."""
    u = abs(x / params.lam) ** params.v
    return math.exp(_log_norm_const(params) - 0.5 * u)


def log_pdf(params: GedParams, x: float) -> float:
    """log g_v(x); finite far beyond where the density underflows."""
    u = abs(x / params.lam) ** params.v
    return _log_norm_const(params) - 0.5 * u


def survival(params: GedParams, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Upper tail 1 - G_v(x) with full relative accuracy for x >= 0.

    For x >= 0 this is Q(1/v, (x/lambda)^v / 2) / 2 with Q the regularized
    upper incomplete gamma, evaluated directly rather than as 1 - cdf.
    """
    if x < 0.0:
        return 1.0 - survival(params, -x, acc)
    u = (x / params.lam) ** params.v / 2.0
    return 0.5 * reg_gamma_upper(1.0 / params.v, u, acc)


def log_survival(params: GedParams, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """log(1 - G_v(x)) for x >= 0; finite even where the tail underflows."""
    if x < 0.0:
        raise ValueError("log_survival is defined for x >= 0")
    u = (x / params.lam) ** params.v / 2.0
    return log_reg_gamma_upper(1.0 / params.v, u, acc) - _LOG2


def cdf(params: GedParams, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Distribution function G_v(x); symmetric about G_v(0) = 1/2."""
    if x < 0.0:
        return survival(params, -x, acc)
    return 1.0 - survival(params, x, acc)


def quantile(params: GedParams, u: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Inverse of cdf on (0, 1); odd around u = 1/2."""
    if not 0.0 < u < 1.0:
        raise ValueError(f"u must be in (0, 1), got {u}")
    if u == 0.5:
        return 0.0
    if u < 0.5:
        return -quantile(params, 1.0 - u, acc)
    # survival(x) = (1 - u)  =>  Q(1/v, (x/lam)^v / 2) = 2 (1 - u)
    y = inv_reg_gamma_upper(1.0 / params.v, 2.0 * (1.0 - u), acc)
    return params.lam * (2.0 * y) ** (1.0 / params.v)


def sample_stream(params: GedParams, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` i.i.d. GED(v) variates, deterministic per (seed, count).

    |X| = lambda (2 Y)^(1/v) with Y ~ Gamma(1/v, 1), attached to an
    independent uniform sign.
    """
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    rng = np.random.Generator(np.random.PCG64(seed))
    y = rng.standard_gamma(1.0 / params.v, size=count)
    signs = rng.integers(0, 2, size=count) * 2 - 1
    return signs * params.lam * (2.0 * y) ** (1.0 / params.v)


@dataclass(frozen=True)
class TailExpansion:
    """Correction coefficients of the upper-tail expansion in powers of x^-v."""

    coefficients: tuple[float, ...]
    order: int


def tail_expansion_coefficients(params: GedParams, order: int) -> TailExpansion:
    """Coefficients c_k of 1 - G_v(x) ~ (2 lam^v / v) {1 + sum c_k x^(-kv)} x^(1-v) g_v(x).

    c_1 = 2 (1/v - 1) lam^v, and each further c_k appends a factor
    2 (1/v - k) lam^v.  All of them vanish at v = 1.
    """
    if order not in (0, 1, 2, 3):
        raise ValueError(f"order must be in 0..3, got {order}")
    v, lam = params.v, params.lam
    coeffs = []
    running = 1.0
    for k in range(1, order + 1):
        running *= 2.0 * (1.0 / v - k) * lam**v
        coeffs.append(running)
    return TailExpansion(coefficients=tuple(coeffs), order=order)


def tail_survival_expansion(params: GedParams, x: float, order: int) -> float:
    """Evaluate the order-k truncation of the upper-tail expansion at x.

    Rejects v = 1 (all correction terms vanish and the exact tail is
    elementary there) and x with x^-v >= 1, where the series is meaningless.
    """
    if abs(params.v - 1.0) <= 1e-12:
        raise ValueError("tail expansion degenerates at v = 1; use survival()")
    if not x > 1.0:
        raise ValueError(f"need x > 1 so that x^-v < 1, got x={x}")
    exp_ = tail_expansion_coefficients(params, order)
    v = params.v
    series = 1.0
    for k, c in enumerate(exp_.coefficients, start=1):
        series += c * x ** (-k * v)
    lead = 2.0 * params.lam**v / v * x ** (1.0 - v)
    return lead * series * pdf(params, x)


def powered_abs_survival(params: GedParams, y: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Survival 1 - F(y) of |X|^v, i.e. 2 (1 - G_v(y^(1/v))), for y >= 0."""
    if y < 0.0:
        raise ValueError(f"y must be nonnegative, got {y}")
    return 2.0 * survival(params, y ** (1.0 / params.v), acc)


def powered_abs_survival_expansion(params: GedParams, y: float, order: int) -> float:
    """Asymptotic form of 1 - F(y): the prefactor
    2^(1-1/v) lam^(v-1) / Gamma(1/v) times {1 + sum c_k y^-k} y^(1/v-1) e^(-y/(2 lam^v)),
    with the same c_k as the plain tail expansion.  Diagnostic companion to
    :func:`powered_abs_survival`.
    """
    if abs(params.v - 1.0) <= 1e-12:
        raise ValueError("expansion degenerates at v = 1")
    if not y > 1.0:
        raise ValueError(f"need y > 1, got y={y}")
    v, lam = params.v, params.lam
    exp_ = tail_expansion_coefficients(params, order)
    series = 1.0
    for k, c in enumerate(exp_.coefficients, start=1):
        series += c * y ** (-k)
    log_pref = ((1.0 - 1.0 / v) * _LOG2 + (v - 1.0) * math.log(lam) - log_gamma(1.0 / v))
    return (math.exp(log_pref) * series * y ** (1.0 / v - 1.0)
            * math.exp(-y / (2.0 * lam**v)))
