"""Limit law, correction polynomials, tail-deficit channels, and the
assembled first/second-order approximations of the five theorem cases.

Case tags
---------
The double-limit statements split by shape and power:

* ``t1_i``   : v = 1, p = 1   (powered-family norming; exact calibration)
* ``t1_ii``  : v = 1, p != 1  (powered-family norming)
* ``t1_iii`` : v != 1         (powered-family norming, any p > 0)
* ``t2_i``   : v != 1, p != v (calibration-root norming)
* ``t2_ii``  : v != 1, p = v  (corrected calibration-root norming)

A (v, p) pair picks its case within a chosen theorem branch; the same
pair with v != 1 legitimately belongs to ``t1_iii`` under branch 1 and to
a ``t2_*`` case under branch 2, which use different norming families.
"""

import math
from dataclasses import dataclass

from .ged import GedParams, log_survival, make_params
from .norming import (
    LinearNorming,
    hall_constants,
    optimal_constants,
    power_constants,
    resolve_log_n,
    solve_bn,
)
from .specfun import log_gamma

__all__ = [
    "EQ_TOL",
    "TheoremCase",
    "ExpansionEval",
    "gumbel",
    "gumbel_r",
    "gumbel_r_identities",
    "classify_case",
    "case_norming",
    "normed_threshold",
    "exact_deficit",
    "theta_deficit",
    "correction_h",
    "correction_q",
    "correction_s",
    "correction_b",
    "lemma3_transfer",
    "theorem_expansion",
]

EQ_TOL = 1e-12  # tie tolerance for v = 1 and p = v routing
DEFAULT_Q_VARIANT = "eq34"  # numerically adjudicated winner; see README


def gumbel(x: float) -> float:
    """The Gumbel law Lambda(x) = exp(-exp(-x))."""
    return math.exp(-math.exp(-x))


def gumbel_r(r: int, x: float) -> float:
    """Limit law of the r-th largest: Lambda(x) sum_{j<r} e^(-jx)/j!; zero for r <= 0."""
    if r <= 0:
        return 0.0
    log_lam = -math.exp(-x)
    return math.fsum(math.exp(log_lam - j * x - math.lgamma(j + 1.0)) for j in range(r))


def gumbel_r_identities(r: int, x: float) -> tuple[float, float, float, float]:
    """Both sides of the first- and second-moment reduction identities.

    lhs1 = Lambda(x) sum_{j<r} j e^(-jx)/j!            rhs1 = e^(-x) Lambda_{r-1}(x)
    lhs2 = Lambda(x) sum_{j<r} j^2 e^(-jx)/j!          rhs2 = e^(-2x) Lambda_{r-2}(x) + rhs1

    Test fixture for the moment bookkeeping inside the transfer lemma.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    lam = gumbel(x)
    lhs1 = math.fsum(lam * j * math.exp(-j * x) / math.factorial(j) for j in range(r))
    lhs2 = math.fsum(lam * j * j * math.exp(-j * x) / math.factorial(j) for j in range(r))
    rhs1 = math.exp(-x) * gumbel_r(r - 1, x)
    rhs2 = math.exp(-2.0 * x) * gumbel_r(r - 2, x) + math.exp(-x) * gumbel_r(r - 1, x)
    return lhs1, rhs1, lhs2, rhs2


@dataclass(frozen=True)
class TheoremCase:
    """Resolved case tag with the (v, p) that produced it."""

    tag: str
    v: float
    p: float


def classify_case(v: float, p: float, theorem: int) -> TheoremCase:
    """Route (v, p) to its case within theorem branch 1 or 2."""
    if not v > 0.0 or not p > 0.0:
        raise ValueError(f"v and p must be positive, got v={v}, p={p}")
    v_is_one = abs(v - 1.0) <= EQ_TOL
    p_eq_v = abs(p - v) <= EQ_TOL
    if theorem == 1:
        if v_is_one:
            tag = "t1_i" if abs(p - 1.0) <= EQ_TOL else "t1_ii"
        else:
            tag = "t1_iii"
    elif theorem == 2:
        if v_is_one:
            raise ValueError("theorem branch 2 excludes v = 1; its norming "
                             "coincides with the powered family there")
        tag = "t2_ii" if p_eq_v else "t2_i"
    else:
        raise ValueError(f"theorem must be 1 or 2, got {theorem}")
    return TheoremCase(tag=tag, v=v, p=p)


def case_norming(params: GedParams, case: TheoremCase,
                 n: int | float | None = None, *,
                 log_n: float | None = None) -> LinearNorming:
    """The norming family each case verifies against."""
    if case.tag in ("t1_i", "t1_ii", "t1_iii"):
        return power_constants(params, case.p, n, log_n=log_n)
    if case.tag == "t2_i":
        return hall_constants(params, case.p, n, log_n=log_n)
    if case.tag == "t2_ii":
        return optimal_constants(params, n, log_n=log_n)
    raise ValueError(f"unknown case tag {case.tag!r}")


def normed_threshold(case: TheoremCase, norming: LinearNorming, x: float) -> float:
    """z_n(x) = (scale x + shift)^(1/p), the threshold on |M_{n,r}|."""
    arg = norming.scale * x + norming.shift
    if not arg > 0.0:
        raise ValueError(
            f"normed point scale*x+shift = {arg} is not positive at x={x}; "
            "n is too small for this x"
        )
    return arg ** (1.0 / case.p)


def exact_deficit(params: GedParams, case: TheoremCase,
                  norming: LinearNorming, x: float) -> float:
    """1 - theta with theta = n e^x (1 - G_v(z_n(x))), from the exact tail.

    In the Laplace unit-power case the norming calibrates the tail exactly
    (theta = 1 for z > 0), so the deficit is returned as an exact zero
    rather than re-deriving it from the tail at O(1e-16) noise that a
    second-order sweep would amplify by n^2.
    """
    z = normed_threshold(case, norming, x)
    if case.tag == "t1_i":
        return 0.0
    return -math.expm1(norming.log_n + x + log_survival(params, z))


def _lemma_deficit(params: GedParams, case: TheoremCase, x: float,
                   log_n: float, order: int, q_variant: str) -> float:
    """Closed-form prediction of 1 - theta at expansion order 1 or 2."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    v, p = case.v, case.p
    if case.tag == "t1_i":
        return 0.0
    if case.tag == "t1_ii":
        half_log = log_n - math.log(2.0)
        out = (1.0 - p) * x * x / (2.0 * half_log)
        if order == 2:
            out -= ((1.0 - p) * (3.0 * (1.0 - p) * x - 4.0 * (1.0 - 2.0 * p))
                    * x**3 / (24.0 * half_log**2))
        return out
    if case.tag == "t1_iii":
        vi = 1.0 / v
        ll = math.log(log_n)
        out = (1.0 - vi) ** 3 * ll * ll / (2.0 * log_n)
        if order == 2:
            out -= ((1.0 - vi) ** 2
                    * (1.0 - math.log(2.0) - log_gamma(vi) + x) * ll / log_n)
        return out
    b = solve_bn(params, log_n=log_n).b_n
    bv = b**case.v
    ex = math.exp(x)
    if case.tag == "t2_i":
        out = correction_h(v, p, x) * ex / bv
        if order == 2:
            out += correction_q(v, p, x, variant=q_variant) * ex / bv**2
        return out
    if case.tag == "t2_ii":
        out = correction_s(v, x) * ex / bv**2
        if order == 2:
            out += correction_b(v, x) * ex / bv**3
        return out
    raise ValueError(f"unknown case tag {case.tag!r}")


def theta_deficit(params: GedParams, case: TheoremCase,
                  n: int | float | None, x: float, *,
                  log_n: float | None = None, order: int = 2,
                  q_variant: str = DEFAULT_Q_VARIANT) -> tuple[float, float]:
    """(exact, predicted) tail deficit 1 - theta at the case's normed point.

    The exact channel never touches the expansions, so comparing the two
    isolates expansion error from tail-evaluation error.
    """
    norming = case_norming(params, case, n, log_n=log_n)
    exact = exact_deficit(params, case, norming, x)
    predicted = _lemma_deficit(params, case, x, norming.log_n, order, q_variant)
    return exact, predicted


def _check_v_not_one(v: float, name: str) -> None:
    if abs(v - 1.0) <= EQ_TOL:
        raise ValueError(f"{name} degenerates at v = 1")


def correction_h(v: float, p: float, x: float) -> float:
    """First-order correction h_v(x) of the calibration-root case."""
    lam_v = make_params(v).lam ** v
    vi = 1.0 / v
    poly = (vi * (v - p) * lam_v * x * x
            - 2.0 * vi * (1.0 - v) * lam_v * x
            - 2.0 * (vi - 1.0) * lam_v)
    return poly * math.exp(-x)


def correction_q(v: float, p: float, x: float,
                 variant: str = DEFAULT_Q_VARIANT) -> float:
    """Second-order correction q_v(x) of the calibration-root case.

    The two published forms of its constant term disagree; both are kept
    behind ``variant`` ("eq34" carries -4(1/v-1)(1/v-2) lam^2v, "eq22"
    carries -4(1/v-1)^2 lam^2v).  Numerical fits of the exact deficit
    select "eq34"; see the README verification notes.
    """
    _check_v_not_one(v, "correction_q")
    lam2 = make_params(v).lam ** (2.0 * v)
    vi = 1.0 / v
    if variant == "eq34":
        const = -4.0 * (vi - 1.0) * (vi - 2.0) * lam2
    elif variant == "eq22":
        const = -4.0 * (vi - 1.0) * (vi - 1.0) * lam2
    else:
        raise ValueError(f"variant must be 'eq22' or 'eq34', got {variant!r}")
    poly = (-0.5 * lam2 * vi * vi * (v - p) ** 2 * x**4
            + vi * vi * (v - p) * lam2 * (2.0 - 4.0 * v / 3.0 - 4.0 * p / 3.0) * x**3
            - 2.0 * vi * vi * (1.0 - v) * lam2 * x * x
            - 4.0 * (vi - 1.0) * (vi - 2.0) * lam2 * x
            + const)
    return poly * math.exp(-x)


def correction_s(v: float, x: float) -> float:
    """Second-order correction s_v(x) of the corrected (p = v) case."""
    _check_v_not_one(v, "correction_s")
    lam2 = make_params(v).lam ** (2.0 * v)
    vi = 1.0 / v
    poly = 2.0 * (vi - 1.0) * lam2 * (
        x * x - 2.0 * (vi - 2.0) * x - (3.0 * vi - 5.0)
    )
    return poly * math.exp(-x)


def correction_b(v: float, x: float) -> float:
    """Third-order correction b_v(x) of the corrected (p = v) case."""
    _check_v_not_one(v, "correction_b")
    lam3 = make_params(v).lam ** (3.0 * v)
    vi = 1.0 / v
    poly = -4.0 / 3.0 * (vi - 1.0) * lam3 * (
        (4.0 - vi) * (vi - 1.0) * x**3
        - 6.0 * (vi - 2.0) * x * x
        - 6.0 * (3.0 * vi - 5.0) * x
        + (2.0 * vi * vi - 22.0 * vi + 32.0)
    )
    return poly * math.exp(-x)


def lemma3_transfer(one_minus_theta: float, r: int, x: float) -> float:
    """Quadratic transfer from tail deficit to CDF deficit.

    Lambda(x) [1 - (1-theta)(r - 1 - e^(-x))/2] (1-theta) e^(-rx)/(r-1)!,
    i.e. P(|M_{n,r}|^p <= z^p) - Lambda_r(x) up to O(n^-1) and cubic terms
    in the deficit.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if not abs(one_minus_theta) < 1.0:
        raise ValueError(f"|1 - theta| must be < 1, got {one_minus_theta}")
    d = one_minus_theta
    return (gumbel(x) * (1.0 - 0.5 * d * (r - 1.0 - math.exp(-x))) * d
            * math.exp(-r * x) / math.factorial(r - 1))


@dataclass(frozen=True)
class ExpansionEval:
    """Leading term and the additive first/second-order corrections.

    ``first_order`` and ``second_order`` are the terms as they enter the
    CDF approximation; multiplying them by ``scale_first`` and
    ``scale_second`` recovers the two limit values of the double-limit
    statement.
    """

    leading: float
    first_order: float
    second_order: float
    scale_first: float
    scale_second: float


def _t1_i_targets(r: int, x: float) -> tuple[float, float]:
    lam = gumbel(x)
    ex = math.exp(x)
    fact = math.factorial(r - 1)
    t1 = lam * math.exp(-(r + 1.0) * x) * ((r - 1.0) * ex - 1.0) / (2.0 * fact)
    poly = ((-3.0 * r**3 + 10.0 * r**2 - 9.0 * r + 2.0) * ex * ex
            + (9.0 * r**2 - 11.0 * r + 2.0) * ex
            + 3.0 / ex - 9.0 * r + 1.0)
    t2 = lam * math.exp(-(r + 2.0) * x) * poly / (24.0 * fact)
    return t1, t2


def _t1_ii_targets(p: float, r: int, x: float) -> tuple[float, float]:
    lam = gumbel(x)
    fact = math.factorial(r - 1)
    t1 = (1.0 - p) * x * x * math.exp(-r * x) * lam / (2.0 * fact)
    bracket = (4.0 * (1.0 - 2.0 * p) - 3.0 * (1.0 - p) * r * x
               + 3.0 * (1.0 - p) * x * math.exp(-x))
    t2 = (1.0 - p) * x**3 * math.exp(-r * x) * bracket * lam / (24.0 * fact)
    return t1, t2


def _t1_iii_targets(v: float, r: int, x: float) -> tuple[float, float]:
    lam = gumbel(x)
    fact = math.factorial(r - 1)
    vi = 1.0 / v
    t1 = (1.0 - vi) ** 3 * math.exp(-r * x) * lam / (2.0 * fact)
    t2 = (-(1.0 - vi) ** 2 * (1.0 - math.log(2.0) - log_gamma(vi) + x)
          * math.exp(-r * x) * lam / fact)
    return t1, t2


def theorem_expansion(params: GedParams, case: TheoremCase, r: int,
                      n: int | float | None, x: float, *,
                      log_n: float | None = None,
                      q_variant: str = DEFAULT_Q_VARIANT) -> ExpansionEval:
    """Leading term, correction terms, and scale factors at one grid point.

    The scale factors are the divergent multipliers attached to each order:
    (n, n^2) for t1_i; (log(n/2), log n log(n/2)) for t1_ii;
    (log n/(loglog n)^2, log n/loglog n) for t1_iii -- the second multiplier
    follows the statement literally, i.e. loglog n applied to the residual;
    (b^v, b^2v) for t2_i and (b^2v, b^3v) for t2_ii.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    expected = classify_case(case.v, case.p,
                             theorem=1 if case.tag.startswith("t1") else 2)
    if expected.tag != case.tag:
        raise ValueError(
            f"case mismatch: (v={case.v}, p={case.p}) belongs to "
            f"{expected.tag!r}, not {case.tag!r}"
        )
    ln = resolve_log_n(n, log_n, min_n=3)
    leading = gumbel_r(r, x)
    v, p = case.v, case.p

    if case.tag == "t1_i":
        if ln > 700.0:
            raise ValueError("t1_i scales need a representable n; log_n too large")
        nn = float(n) if n is not None else math.exp(ln)
        s1, s2 = nn, nn * nn
        t1, t2 = _t1_i_targets(r, x)
    elif case.tag == "t1_ii":
        s1 = ln - math.log(2.0)
        s2 = ln * s1
        t1, t2 = _t1_ii_targets(p, r, x)
    elif case.tag == "t1_iii":
        ll = math.log(ln)
        s1 = ln / (ll * ll)
        s2 = s1 * ll
        t1, t2 = _t1_iii_targets(v, r, x)
    else:
        bv = solve_bn(params, log_n=ln).b_n ** v
        lam = gumbel(x)
        pref = math.exp(-(r - 1.0) * x) / math.factorial(r - 1) * lam
        h = correction_h(v, p, x)
        if case.tag == "t2_i":
            s1, s2 = bv, bv * bv
            t1 = h * pref
            q = correction_q(v, p, x, variant=q_variant)
            t2 = (q + (1.0 - (r - 1.0) * math.exp(x)) * h * h / 2.0) * pref
        else:
            s1, s2 = bv * bv, bv**3
            t1 = correction_s(v, x) * pref
            t2 = correction_b(v, x) * pref

    return ExpansionEval(
        leading=leading,
        first_order=t1 / s1,
        second_order=t2 / s2,
        scale_first=s1,
        scale_second=s2,
    )
