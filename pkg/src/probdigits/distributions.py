"""Probability distributions supported by the positive integers.

A distribution here is a sequence p_1, p_2, ... with every p_i in (0, 1)
and total mass 1. Built-in families (geometric, Poisson, zeta) are exact
by construction; custom distributions are validated. Each instance
memoizes its pmf values and prefix sums

    prefix(n) = p_1 + ... + p_{n-1},   prefix(1) = 0,

extended on demand through a single summation path: prefix(n+1) is always
the binary64 sum prefix(n) + pmf(n), never recomputed from a closed form.
A Neumaier compensation term is carried alongside as a drift tracker so
the accumulated rounding of the stored sums can be queried and validated.
"""

from __future__ import annotations

import bisect
import enum
import functools
import json
import math
import threading
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import PrecisionExhaustionError, TailExhaustionError, ValidationError

DEFAULT_N_MAX = 10 ** 6
SUM_TOLERANCE = 1e-12


class Family(enum.Enum):
    GEOMETRIC = "geometric"
    POISSON = "poisson"
    ZETA = "zeta"
    CUSTOM = "custom"


def zeta_with_error(s: float, terms: int = 10_000) -> tuple[float, float]:
    """Evaluate the Riemann zeta function with a certified error bound.

    Direct summation of i**-s up to ``terms`` plus the integral tail
    M**(1-s)/(s-1) refined with Euler-Maclaurin corrections. Returns
    ``(value, bound)`` where ``bound`` covers both the truncation of the
    correction series and the floating-point summation.

    Parameters
    ----------
    s : float
        Exponent, must be > 1 (the series diverges otherwise).
    terms : int
        Number of directly summed terms.

    Returns
    -------
    (float, float)
        The value and an upper bound on its absolute error. For s close
        to 1 the value itself is large and the bound is dominated by the
        representation ulp.
    """
    if not s > 1.0:
        raise ValueError(f"zeta(s) requires s > 1, got {s}")
    m = float(terms)
    partial = math.fsum(i ** -s for i in range(1, terms + 1))
    tail = m ** (1.0 - s) / (s - 1.0) - 0.5 * m ** -s
    c1 = s * m ** (-s - 1.0) / 12.0
    c2 = -s * (s + 1.0) * (s + 2.0) * m ** (-s - 3.0) / 720.0
    c3 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * m ** (-s - 5.0) / 30240.0
    value = partial + tail + c1 + c2 + c3
    truncation = abs(
        s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * (s + 5.0) * (s + 6.0)
    ) * m ** (-s - 7.0) / 1209600.0
    # float budget: correctly rounded partial, power/division roundings in
    # the tail terms, and the final additions
    float_slack = 16.0 * math.ulp(max(value, partial, abs(tail)))
    return value, truncation + float_slack


@functools.lru_cache(maxsize=None)
def zeta_constant(s: float) -> float:
    """Riemann zeta constant, cached per exponent."""
    return zeta_with_error(s)[0]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a successful validation run."""

    family: Family
    checks: tuple[str, ...]
    horizon: int
    drift: float
    tail_gap: float | None


class Distribution:
    """A probability distribution on {1, 2, 3, ...}.

    Built with the family constructors ``geometric``, ``poisson``,
    ``zeta``, ``custom`` or ``from_json``. Instances are immutable apart
    from internal memo caches; cache extension is serialized by a lock and
    already-written entries are never mutated, so concurrent readers see
    identical values.

    Parameters are validated eagerly at construction.
    """

    __slots__ = (
        "family", "p", "lam", "s", "support", "rule", "tail_bound", "n_max",
        "_zeta_value", "_prefix", "_pmf_cache", "_logfact", "_comp", "_lock",
    )

    def __init__(self, family: Family, *, p: float | None = None,
                 lam: float | None = None, s: float | None = None,
                 support: Sequence[float] | None = None,
                 rule: Callable[[int], float] | None = None,
                 tail_bound: Callable[[int], float] | None = None,
                 n_max: int = DEFAULT_N_MAX):
        self.family = family
        self.p = p
        self.lam = lam
        self.s = s
        self.support = tuple(support) if support is not None else None
        self.rule = rule
        self.tail_bound = tail_bound
        self.n_max = int(n_max)
        self._zeta_value = None
        self._check_params()
        if family is Family.ZETA:
            self._zeta_value = zeta_constant(s)
        self._prefix = [0.0]     # _prefix[j] == prefix(j + 1)
        self._pmf_cache: list[float] = []
        self._logfact = [0.0]    # _logfact[j] == log(j!)
        self._comp = 0.0         # Neumaier drift tracker, never folded in
        self._lock = threading.RLock()

    # ---- constructors ----
    @classmethod
    def geometric(cls, p: float, n_max: int = DEFAULT_N_MAX) -> "Distribution":
        """Geometric family: pmf(i) = (1 - p) * p**(i - 1), p in (0, 1)."""
        return cls(Family.GEOMETRIC, p=float(p), n_max=n_max)

    @classmethod
    def poisson(cls, lam: float, n_max: int = DEFAULT_N_MAX) -> "Distribution":
        """Poisson family shifted to start at 1: pmf(i) = e**-lam * lam**(i-1) / (i-1)!."""
        return cls(Family.POISSON, lam=float(lam), n_max=n_max)

    @classmethod
    def zeta(cls, s: float, n_max: int = DEFAULT_N_MAX) -> "Distribution":
        """Zeta family: pmf(i) = i**-s / zeta(s), s > 1."""
        return cls(Family.ZETA, s=float(s), n_max=n_max)

    @classmethod
    def custom(cls, support: Sequence[float] | None = None,
               rule: Callable[[int], float] | None = None,
               tail_bound: Callable[[int], float] | None = None,
               n_max: int = DEFAULT_N_MAX) -> "Distribution":
        """Custom distribution from a finite weight list or a pmf rule.

        A rule-given distribution must come with ``tail_bound(n)``, an upper
        bound on the mass beyond index n, so that total mass 1 is checkable.
        """
        return cls(Family.CUSTOM, support=support, rule=rule,
                   tail_bound=tail_bound, n_max=n_max)

    @classmethod
    def from_json(cls, text: str, n_max: int = DEFAULT_N_MAX) -> "Distribution":
        """Load a finite custom distribution from ``{"support": [p1, ...]}``."""
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON document: {exc}", check="json") from exc
        if not isinstance(doc, dict) or "support" not in doc:
            raise ValidationError('JSON document must contain a "support" array',
                                  check="json")
        weights = doc["support"]
        if not isinstance(weights, list) or not all(
                isinstance(w, (int, float)) and not isinstance(w, bool) for w in weights):
            raise ValidationError('"support" must be an array of numbers', check="json")
        return cls.custom(support=[float(w) for w in weights], n_max=n_max)

    # ---- parameter validation ----
    def _check_params(self) -> None:
        fam = self.family
        if fam is Family.GEOMETRIC:
            if not (isinstance(self.p, float) and 0.0 < self.p < 1.0):
                raise ValidationError(
                    f"geometric parameter p must lie in (0, 1), got {self.p}",
                    check="parameter")
        elif fam is Family.POISSON:
            if not (isinstance(self.lam, float) and self.lam > 0.0
                    and math.isfinite(self.lam)):
                raise ValidationError(
                    f"poisson parameter lambda must be positive, got {self.lam}",
                    check="parameter")
        elif fam is Family.ZETA:
            if not (isinstance(self.s, float) and self.s > 1.0
                    and math.isfinite(self.s)):
                raise ValidationError(
                    f"zeta parameter s must exceed 1, got {self.s}",
                    check="parameter")
        elif fam is Family.CUSTOM:
            if (self.support is None) == (self.rule is None):
                raise ValidationError(
                    "custom distribution needs exactly one of a finite support "
                    "or a pmf rule", check="parameter")
            if self.support is not None:
                self._check_finite_support()
            elif self.tail_bound is None:
                raise ValidationError(
                    "rule-given custom distribution requires a tail_bound "
                    "function certifying the mass beyond any index",
                    check="parameter")
        if self.n_max < 1:
            raise ValidationError(f"n_max must be positive, got {self.n_max}",
                                  check="parameter")

    def _check_finite_support(self) -> None:
        weights = self.support
        if not weights:
            raise ValidationError("finite support must be non-empty",
                                  check="support", index=0)
        total = 0.0
        for idx, w in enumerate(weights, start=1):
            if not (0.0 < w < 1.0):
                raise ValidationError(
                    f"pmf value at index {idx} must lie in (0, 1), got {w}",
                    check="pmf-range", index=idx)
            total += w
            if total >= 1.0 + SUM_TOLERANCE:
                raise ValidationError(
                    f"prefix sum exceeds 1 at index {idx}",
                    check="prefix-bound", index=idx)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValidationError(
                f"finite support sums to {total!r}, not 1 within {SUM_TOLERANCE}",
                check="total-mass", index=len(weights))

    # ---- pmf / prefix ----
    def _pmf_value(self, i: int) -> float:
        fam = self.family
        if fam is Family.GEOMETRIC:
            return (1.0 - self.p) * self.p ** (i - 1)
        if fam is Family.POISSON:
            return math.exp(-self.lam + (i - 1) * math.log(self.lam)
                            - self._log_factorial(i - 1))
        if fam is Family.ZETA:
            return i ** (-self.s) / self._zeta_value
        if self.support is not None:
            if i > len(self.support):
                raise ValueError(
                    f"index {i} is outside the finite support of size "
                    f"{len(self.support)}")
            return self.support[i - 1]
        v = self.rule(i)
        if not (isinstance(v, float) and 0.0 < v < 1.0):
            raise ValidationError(
                f"custom pmf rule returned {v!r} at index {i}; values must "
                f"be floats in (0, 1)", check="pmf-range", index=i)
        return v

    def _log_factorial(self, n: int) -> float:
        # running accumulator: log(n!) extended one term at a time
        table = self._logfact
        if n < len(table):
            return table[n]
        with self._lock:
            while len(table) <= n:
                j = len(table)
                table.append(table[j - 1] + math.log(j))
        return table[n]

    def pmf(self, i: int) -> float:
        """Probability of digit ``i`` (1-indexed), always positive.

        Raises PrecisionExhaustionError if the value underflows binary64.
        """
        if i < 1:
            raise ValueError(f"digit index must be >= 1, got {i}")
        cache = self._pmf_cache
        if i <= len(cache):
            return cache[i - 1]
        v = self._pmf_value(i)
        if v <= 0.0:
            raise PrecisionExhaustionError(
                f"pmf underflows binary64 at index {i}")
        return v

    def prefix(self, n: int) -> float:
        """Prefix sum p_1 + ... + p_{n-1}; prefix(1) == 0."""
        if n < 1:
            raise ValueError(f"prefix index must be >= 1, got {n}")
        if n <= len(self._prefix):
            return self._prefix[n - 1]
        with self._lock:
            while len(self._prefix) < n:
                if not self._extend_one():
                    # finite support exhausted: prefix is constant beyond
                    return self._prefix[-1]
        return self._prefix[n - 1]

    def _extend_one(self) -> bool:
        # caller holds the lock; appends prefix(j+1) = prefix(j) + pmf(j)
        j = len(self._prefix)
        if self.support is not None and j > len(self.support):
            return False
        p = self._pmf_value(j)
        if p <= 0.0:
            # tail below binary64 resolution: prefix stalls here
            return False
        if j > len(self._pmf_cache):
            self._pmf_cache.append(p)
        s = self._prefix[-1]
        t = s + p
        if abs(s) >= p:
            self._comp += (s - t) + p
        else:
            self._comp += (p - t) + s
        self._prefix.append(t)
        return True

    def summation_drift(self) -> float:
        """Tracked rounding drift of the stored prefix sums.

        The true sum of the cached pmf values is prefix(top) + drift up to
        O(ulp) of the tracker itself.
        """
        return self._comp

    def locate(self, x: float) -> int:
        """Digit ``n`` whose cell [prefix(n), prefix(n+1)) contains ``x``.

        Extends the prefix cache until it exceeds ``x``; if that does not
        happen within ``n_max`` entries (or the finite support is spent),
        raises TailExhaustionError.
        """
        if isinstance(x, int) and not isinstance(x, bool):
            x = float(x)
        if not (isinstance(x, float) and 0.0 <= x < 1.0):
            raise ValueError(f"x must be a float in [0, 1), got {x!r}")
        pre = self._prefix
        if pre[-1] <= x:
            with self._lock:
                while pre[-1] <= x:
                    if len(pre) > self.n_max or not self._extend_one():
                        raise TailExhaustionError(
                            f"cannot resolve x={x!r}: prefix sums reach "
                            f"{pre[-1]!r} after {len(pre) - 1} terms "
                            f"(n_max={self.n_max})",
                            n_max=self.n_max, x=x)
        return bisect.bisect_right(pre, x)

    # ---- validation ----
    def validate(self, tol: float = SUM_TOLERANCE, horizon: int = 10_000) -> ValidationReport:
        """Check structural invariants; raise ValidationError on violation.

        Built-in families validate parameter ranges only (their formulas
        guarantee the pointwise invariants). Custom distributions check
        every pmf value, prefix monotonicity, and that the tail bound or
        finite support certifies total mass 1 within ``tol``.
        """
        if tol <= 0.0:
            raise ValueError(f"tol must be positive, got {tol}")
        self._check_params()
        checks = ["parameter-ranges"]
        tail_gap = None
        if self.family is Family.CUSTOM:
            if self.support is not None:
                self._check_finite_support()
                top = len(self.support)
                checks += ["pmf-range", "prefix-monotone", "total-mass"]
                tail_gap = abs(1.0 - self.prefix(top + 1))
            else:
                last = 0.0
                for i in range(1, horizon + 1):
                    self._pmf_value(i)   # raises on out-of-range values
                    nxt = self.prefix(i + 1)
                    # positive masses can only plateau once increments sink
                    # below the ulp of the running sum; a drop is impossible
                    # unless the rule misbehaves, and genuine overweight
                    # shows up as clearing 1 by more than rounding can
                    if nxt < last:
                        raise ValidationError(
                            f"prefix sum decreased at index {i}",
                            check="prefix-monotone", index=i)
                    if nxt > 1.0 + tol:
                        raise ValidationError(
                            f"prefix sum exceeds 1 at index {i}",
                            check="prefix-bound", index=i)
                    last = nxt
                tb = float(self.tail_bound(horizon))
                if tb < 0.0:
                    raise ValidationError(
                        f"tail bound at {horizon} is negative: {tb}",
                        check="tail-bound", index=horizon)
                tail_gap = 1.0 - self.prefix(horizon + 1)
                if not tail_gap <= tb + tol:
                    raise ValidationError(
                        f"mass 1 - prefix({horizon + 1}) = {tail_gap!r} is not "
                        f"certified by tail bound {tb!r} within {tol}",
                        check="total-mass", index=horizon)
                checks += ["pmf-range", "prefix-monotone", "tail-bound"]
        return ValidationReport(family=self.family, checks=tuple(checks),
                                horizon=horizon, drift=self._comp,
                                tail_gap=tail_gap)

    # ---- misc ----
    @property
    def params(self) -> dict:
        if self.family is Family.GEOMETRIC:
            return {"p": self.p}
        if self.family is Family.POISSON:
            return {"lam": self.lam}
        if self.family is Family.ZETA:
            return {"s": self.s}
        return {"support": self.support, "rule": self.rule}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Distribution):
            return NotImplemented
        if self.family is not other.family:
            return False
        if self.family is Family.CUSTOM:
            return self.support == other.support and self.rule is other.rule
        return (self.p, self.lam, self.s) == (other.p, other.lam, other.s)

    def __hash__(self) -> int:
        return hash((self.family, self.p, self.lam, self.s, self.support,
                     id(self.rule) if self.rule else None))

    def __repr__(self) -> str:
        if self.family is Family.CUSTOM:
            kind = f"support={list(self.support)}" if self.support else "rule"
            return f"Distribution.custom({kind})"
        (key, val), = self.params.items()
        return f"Distribution.{self.family.value}({key}={val})"


class FrequencyTarget:
    """A prescribed digit-frequency vector q with q_i in [0, 1], sum 1.

    Unlike a Distribution, zero entries are allowed (digits may be banned)
    and a point mass is legal. Finite targets are plain weight tuples;
    infinite targets wrap a Distribution or a pmf rule. Rule-given targets
    must supply tail bounds for the entropy-style series summed over them:
    ``entropy_tail(n)`` bounds the entropy mass beyond n, and
    ``info_tail(n, dist)`` bounds the information content of ``dist``
    beyond n under this target.
    """

    __slots__ = ("weights", "rule", "entropy_tail", "info_tail", "source")

    def __init__(self, weights=None, rule=None, entropy_tail=None,
                 info_tail=None, source=None):
        self.weights = tuple(weights) if weights is not None else None
        self.rule = rule
        self.entropy_tail = entropy_tail
        self.info_tail = info_tail
        self.source = source
        if (self.weights is None) and (self.rule is None) and (self.source is None):
            raise ValidationError("frequency target needs weights, a rule, "
                                  "or a source distribution", check="parameter")
        if self.weights is not None:
            total = 0.0
            for idx, w in enumerate(self.weights, start=1):
                if not (0.0 <= w <= 1.0):
                    raise ValidationError(
                        f"frequency at index {idx} must lie in [0, 1], got {w}",
                        check="frequency-range", index=idx)
                total += w
            if abs(total - 1.0) > SUM_TOLERANCE:
                raise ValidationError(
                    f"frequencies sum to {total!r}, not 1 within {SUM_TOLERANCE}",
                    check="total-mass", index=len(self.weights))

    @classmethod
    def from_weights(cls, weights: Sequence[float]) -> "FrequencyTarget":
        return cls(weights=[float(w) for w in weights])

    @classmethod
    def uniform(cls, n: int) -> "FrequencyTarget":
        """Equidistribution on digits {1, ..., n}."""
        if n < 1:
            raise ValueError(f"uniform target needs n >= 1, got {n}")
        return cls(weights=[1.0 / n] * n)

    @classmethod
    def point_mass(cls, i: int) -> "FrequencyTarget":
        """All frequency on a single digit."""
        if i < 1:
            raise ValueError(f"digit must be >= 1, got {i}")
        return cls(weights=[0.0] * (i - 1) + [1.0])

    @classmethod
    def from_distribution(cls, dist: Distribution) -> "FrequencyTarget":
        """Use a distribution's pmf as the target frequencies.

        Finite custom distributions collapse to finite weight targets.
        """
        if dist.family is Family.CUSTOM and dist.support is not None:
            return cls(weights=dist.support, source=dist)
        return cls(source=dist)

    @property
    def is_finite(self) -> bool:
        return self.weights is not None

    def q(self, i: int) -> float:
        """Frequency of digit i (0.0 beyond a finite support).

        Zero entries are legal for a target, so source mass too small for
        binary64 reads as frequency 0.
        """
        if i < 1:
            raise ValueError(f"digit index must be >= 1, got {i}")
        if self.weights is not None:
            return self.weights[i - 1] if i <= len(self.weights) else 0.0
        if self.source is not None:
            try:
                return self.source.pmf(i)
            except PrecisionExhaustionError:
                return 0.0
        return self.rule(i)

    def __repr__(self) -> str:
        if self.weights is not None:
            return f"FrequencyTarget(weights={list(self.weights)})"
        if self.source is not None:
            return f"FrequencyTarget(source={self.source!r})"
        return "FrequencyTarget(rule)"
