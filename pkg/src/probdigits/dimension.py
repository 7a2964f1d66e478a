"""Hausdorff dimension computations for digit-defined sets.

Two kinds of quantities are computed:

* the root d of the Moran equation  sum_{i in D} pmf(i)**d = 1  for a
  finite digit set D, which is the dimension of the set of reals using
  only digits from D, and
* the entropy ratio  H(q) / E(I_p(q))  for a frequency target q, which is
  the dimension of the set of reals whose digit frequencies equal q.

The Moran root is found by bisection on [0, 1]. The left side is strictly
decreasing in d with f(0) = |D| and f(1) = sum of the digit masses < 1,
so every iterate keeps a certified bracket: f(lo) >= 1 >= f(hi).

Entropy-style series over infinite-support targets are summed with
certified tail bounds derived from the target's family (or supplied by
the caller for rule-given targets); a divergent series raises instead of
returning a truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distributions import Distribution, Family, FrequencyTarget, zeta_constant
from .errors import ConvergenceError, DivergentSeriesError, PrecisionExhaustionError

DEFAULT_TOL = 1e-13
SERIES_TOL = 1e-12
_SERIES_MAX_TERMS = 1_000_000


@dataclass(frozen=True)
class DimensionResult:
    """A computed dimension with its certificate.

    ``bracket`` contains ``value``; for Moran roots f(bracket[0]) >= 1 >=
    f(bracket[1]) and ``residual`` is |f(value) - 1|, while for entropy
    ratios the bracket covers the series tail uncertainty and ``residual``
    is its width. ``iterations`` counts bisection steps or series terms.
    """

    value: float
    bracket: tuple[float, float]
    iterations: int
    residual: float


def _solve_moran(f, tol: float, max_iter: int = 200) -> DimensionResult:
    # f strictly decreasing on [0, 1] with f(0) > 1 (ensured by callers)
    f_hi = f(1.0)
    if f_hi >= 1.0:
        # total digit mass rounds to >= 1: the root is 1 within resolution
        return DimensionResult(1.0, (1.0, 1.0), 0, abs(f_hi - 1.0))
    lo, hi = 0.0, 1.0
    iterations = 0
    while hi - lo > tol and iterations < max_iter:
        mid = 0.5 * (lo + hi)
        if f(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    if hi - lo > tol:
        raise ConvergenceError(
            f"Moran bisection did not reach tol={tol} in {max_iter} iterations")
    value = 0.5 * (lo + hi)
    return DimensionResult(value, (lo, hi), iterations, abs(f(value) - 1.0))


def moran_dimension(dist: Distribution, digit_set, tol: float = DEFAULT_TOL) -> DimensionResult:
    """Dimension of the reals whose digits all lie in ``digit_set``.

    Solves sum_{i in D} pmf(i)**d = 1 for d in [0, 1]. A singleton digit
    set has dimension 0 exactly.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    digits = sorted(set(int(i) for i in digit_set))
    if not digits:
        raise ValueError("digit set must be non-empty")
    if digits[0] < 1:
        raise ValueError(f"digits must be >= 1, got {digits[0]}")
    if len(digits) == 1:
        return DimensionResult(0.0, (0.0, 0.0), 0, 0.0)
    logs = [math.log(dist.pmf(i)) for i in digits]

    def f(d: float) -> float:
        if d == 0.0:
            return float(len(logs))
        return math.fsum(math.exp(d * lp) for lp in logs)

    return _solve_moran(f, tol)


def moran_dimension_family(dist: Distribution, n: int, tol: float = DEFAULT_TOL) -> DimensionResult:
    """Same root as ``moran_dimension(dist, range(1, n+1))`` through the
    family-specific form of the left-hand side.

    Geometric admits a closed form via the geometric series; Poisson and
    zeta are evaluated termwise in log space from exact parameter logs.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if n < 1:
        raise ValueError(f"digit count must be >= 1, got {n}")
    fam = dist.family
    if fam is Family.GEOMETRIC:
        log_p = math.log(dist.p)
        log_1p = math.log(1.0 - dist.p)

        def f(d: float) -> float:
            if d == 0.0:
                return float(n)
            return (-math.expm1(d * n * log_p)) * math.exp(d * log_1p) / (-math.expm1(d * log_p))
    elif fam is Family.POISSON:
        lam = dist.lam
        log_lam = math.log(lam)
        exponents = [-lam + (i - 1) * log_lam - math.lgamma(i) for i in range(1, n + 1)]

        def f(d: float) -> float:
            return math.fsum(math.exp(d * e) for e in exponents)
    elif fam is Family.ZETA:
        s = dist.s
        log_zeta = math.log(zeta_constant(s))
        log_i = [math.log(i) for i in range(1, n + 1)]

        def f(d: float) -> float:
            return math.fsum(math.exp(-d * (s * li + log_zeta)) for li in log_i)
    else:
        raise ValueError("family form requires a geometric, poisson, or zeta "
                         "distribution")
    if n == 1:
        return DimensionResult(0.0, (0.0, 0.0), 0, 0.0)
    return _solve_moran(f, tol)


def bounded_digit_dimension_profile(dist: Distribution, k_max: int,
                                    tol: float = DEFAULT_TOL) -> list[tuple[int, DimensionResult]]:
    """Dimensions of the digit sets {1..k} for k = 1 .. k_max.

    The values increase strictly toward 1, the dimension of the set of
    all reals with bounded digits.
    """
    if k_max < 2:
        raise ValueError(f"k_max must be >= 2, got {k_max}")
    return [(k, moran_dimension(dist, range(1, k + 1), tol)) for k in range(1, k_max + 1)]


# ---- entropy-style series ----
#
# Both series have the shape  sum_i q_i * g(i)  with nonnegative terms,
# where g(i) = -log(pmf(i)) decomposes per family as
#
#     g(i) = alpha + beta * (i - 1) + gamma * log(i) + delta * lgamma(i)
#
# so a certified tail bound only needs, per target family, upper bounds on
# the weighted tails of the four features.

def _neg_log_pmf_coeffs(dist: Distribution):
    fam = dist.family
    if fam is Family.GEOMETRIC:
        return (-math.log(1.0 - dist.p), -math.log(dist.p), 0.0, 0.0)
    if fam is Family.POISSON:
        return (dist.lam, -math.log(dist.lam), 0.0, 1.0)
    if fam is Family.ZETA:
        return (math.log(zeta_constant(dist.s)), 0.0, dist.s, 0.0)
    return None


def _geometric_tail_features(p: float, n: int):
    # exact tails of sum_{i>n} q_i * {1, i-1, (i-1)^2} for q_i = (1-p) p^(i-1)
    pn = p ** n
    s0 = pn
    s1 = pn * (n * (1.0 - p) + p) / (1.0 - p)
    s2 = pn * (n * n * (1.0 - p) ** 2 + p * (2.0 * n * (1.0 - p) + 1.0 + p)) / (1.0 - p) ** 2
    return s0, s1, s2


def _feature_tails(dist: Distribution, n: int):
    """Upper bounds on sum_{i>n} q_i * g for g in {1, i-1, log i, lgamma i}.

    Returns math.inf entries where the weighted feature series diverges.
    lgamma(i) <= (i-1) * log(i-1) is bounded through (i-1)**2 for light
    tails and through a dedicated integral for zeta targets.
    """
    fam = dist.family
    if fam is Family.GEOMETRIC:
        s0, s1, s2 = _geometric_tail_features(dist.p, n)
        return s0, s1, s1, s2
    if fam is Family.POISSON:
        lam = dist.lam
        if n < 2.0 * lam + 2.0:
            return math.inf, math.inf, math.inf, math.inf
        r = lam / (n + 1.0)          # q ratio beyond n is <= r <= 1/2
        try:
            q_next = dist.pmf(n + 1)
        except PrecisionExhaustionError:
            # remaining mass is below binary64 resolution entirely
            return 0.0, 0.0, 0.0, 0.0
        geo = 1.0 / (1.0 - r)
        k1 = r / (1.0 - r) ** 2      # sum k r^k
        k2 = r * (1.0 + r) / (1.0 - r) ** 3
        s0 = q_next * geo
        s1 = q_next * (n * geo + k1)
        s2 = q_next * (n * n * geo + 2.0 * n * k1 + k2)
        return s0, s1, s1, s2
    if fam is Family.ZETA:
        s = dist.s
        z = zeta_constant(s)
        m = max(float(n), 3.0)
        s0 = m ** (1.0 - s) / ((s - 1.0) * z)
        s1 = m ** (2.0 - s) / ((s - 2.0) * z) if s > 2.0 else math.inf
        slog = m ** (1.0 - s) * (math.log(m) / (s - 1.0) + 1.0 / (s - 1.0) ** 2) / z
        slg = (m ** (2.0 - s) * (math.log(m) / (s - 2.0) + 1.0 / (s - 2.0) ** 2) / z
               if s > 2.0 else math.inf)
        return s0, s1, slog, slg
    raise ValueError("no family tail bounds for custom distributions")


def _series_tail_bound(q: FrequencyTarget, coeffs, n: int) -> tuple[float, bool]:
    """Tail bound beyond n, plus whether an infinite bound is permanent.

    A Poisson target reports an infinite bound while n is inside its
    ratio-domination warm-up window (n < 2 lambda + 2); that recovers with
    more terms. A zeta target's infinite bound marks a feature series with
    too little decay, which no amount of summing fixes.
    """
    alpha, beta, gamma, delta = coeffs
    s0, s1, slog, slg = _feature_tails(q.source, n)
    bound = abs(alpha) * s0
    if beta:
        bound += abs(beta) * s1
    if gamma:
        bound += abs(gamma) * slog
    if delta:
        bound += abs(delta) * slg
    if math.isinf(bound):
        return bound, q.source.family is Family.ZETA
    return bound, True


def _sum_information_series(q: FrequencyTarget, g, tail_at, tol: float,
                            what: str) -> tuple[float, float, int]:
    """Sum q_i * g(i) adaptively until the tail bound drops below tol.

    ``tail_at(n)`` returns (bound, permanent). Returns (partial sum, final
    tail bound, terms used); raises DivergentSeriesError on a permanent
    infinite bound and ConvergenceError when the term budget runs out.
    """
    terms: list[float] = []
    checkpoint = 64
    i = 0
    while i < _SERIES_MAX_TERMS:
        i += 1
        qi = q.q(i)
        if qi:
            terms.append(qi * g(i))
        if i == checkpoint:
            bound, permanent = tail_at(i)
            if bound < tol:
                return math.fsum(terms), bound, i
            if math.isinf(bound) and permanent:
                raise DivergentSeriesError(
                    f"{what} diverges: its tail is unbounded beyond {i} terms")
            checkpoint *= 2
    raise ConvergenceError(
        f"{what} did not converge within {_SERIES_MAX_TERMS} terms")


def _information_series(p_for_g: Distribution, q: FrequencyTarget,
                        tol: float, what: str) -> tuple[float, float, int]:
    # finite support: exact sum, no tail machinery
    if q.is_finite:
        total = []
        for i, qi in enumerate(q.weights, start=1):
            if qi == 0.0:
                continue
            total.append(-qi * math.log(p_for_g.pmf(i)))
        return math.fsum(total), 0.0, len(q.weights)
    coeffs = _neg_log_pmf_coeffs(p_for_g)
    if coeffs is None or q.source is None or q.source.family is Family.CUSTOM:
        raise ValueError(
            f"{what} over an infinite-support target requires a family-backed "
            f"target or a caller-supplied tail bound")
    alpha, beta, gamma, delta = coeffs

    def g(i: int) -> float:
        v = alpha
        if beta:
            v += beta * (i - 1)
        if gamma:
            v += gamma * math.log(i)
        if delta:
            v += delta * math.lgamma(i)
        return v

    return _sum_information_series(
        q, g, lambda n: _series_tail_bound(q, coeffs, n), tol, what)


def _entropy_with_bound(q: FrequencyTarget, tol: float) -> tuple[float, float, int]:
    if q.is_finite:
        return (math.fsum(-w * math.log(w) for w in q.weights if w > 0.0),
                0.0, len(q.weights))
    if q.source is not None and q.source.family is not Family.CUSTOM:
        return _information_series(q.source, q, tol, "entropy series")
    if q.entropy_tail is None:
        raise ValueError("entropy of an infinite-support target requires an "
                         "entropy_tail bound")
    return _sum_information_series(
        q, lambda i: -math.log(q.q(i)),
        lambda n: (float(q.entropy_tail(n)), True), tol, "entropy series")


def _information_with_bound(p: Distribution, q: FrequencyTarget,
                            tol: float) -> tuple[float, float, int]:
    if q.is_finite or (q.source is not None and q.source.family is not Family.CUSTOM
                       and _neg_log_pmf_coeffs(p) is not None):
        return _information_series(p, q, tol, "information series")
    if q.info_tail is None:
        raise ValueError("expected information over an infinite-support target "
                         "requires a family-backed pair or an info_tail bound")
    return _sum_information_series(
        q, lambda i: -math.log(p.pmf(i)),
        lambda n: (float(q.info_tail(n, p)), True), tol, "information series")


def entropy(q: FrequencyTarget, tol: float = SERIES_TOL) -> float:
    """Shannon entropy H(q) = -sum q_i log q_i in natural log units.

    Zero frequencies contribute nothing (0 log 0 = 0). Infinite-support
    targets are summed until their tail bound certifies ``tol``; a target
    with neither a family source nor an ``entropy_tail`` is rejected.
    """
    return _entropy_with_bound(q, tol)[0]


def expected_information(p: Distribution, q: FrequencyTarget,
                         tol: float = SERIES_TOL) -> float:
    """Expected information E(I_p(q)) = -sum q_i log p_i.

    This is the cross entropy of the target q against the distribution p;
    it equals H(q) when q is p itself.
    """
    return _information_with_bound(p, q, tol)[0]


def frequency_set_dimension(p: Distribution, q: FrequencyTarget,
                            tol: float = SERIES_TOL) -> DimensionResult:
    """Dimension H(q) / E(I_p(q)) of the set with digit frequencies q.

    Equals 1 exactly when q is p itself and 0 when q is a point mass.
    Divergence of either series raises DivergentSeriesError.
    """
    if q.source is not None and q.source == p:
        return DimensionResult(1.0, (1.0, 1.0), 0, 0.0)
    h, h_tail, h_terms = _entropy_with_bound(q, tol)
    if h == 0.0:
        return DimensionResult(0.0, (0.0, 0.0), h_terms, 0.0)
    e, e_tail, e_terms = _information_with_bound(p, q, tol)
    value = h / e
    if h_tail == 0.0 and e_tail == 0.0:
        slack = 4.0 * math.ulp(value)
        return DimensionResult(value, (value - slack, value + slack),
                               h_terms, 2.0 * slack)
    lo = h / (e + e_tail)
    hi = min((h + h_tail) / e, 1.0)
    return DimensionResult(min(value, 1.0), (lo, hi), h_terms + e_terms, hi - lo)


def equidistribution_dimension(dist: Distribution, n: int) -> float:
    """Dimension of the set whose digits 1..n occur with frequency 1/n each.

    This is H(q)/E(I_p(q)) for q uniform on {1..n}: the entropy is log n
    and the expected information is the mean of -log pmf(i) over i <= n,
    computed directly from the pmf values.
    """
    if n < 2:
        raise ValueError(f"equidistribution needs n >= 2, got {n}")
    mean_info = math.fsum(-math.log(dist.pmf(i)) for i in range(1, n + 1)) / n
    return math.log(n) / mean_info
