"""Monte Carlo machinery for digit-frequency experiments.

Randomness comes from SplitMix64, a deterministic generator with 64 bits
of state; uniforms are drawn as 53-bit dyadics. Every sample of an
experiment gets its own stream derived from (seed, sample index), so
results are reproducible bit for bit and independent of any scheduling.
"""

from __future__ import annotations

import bisect
import io
import itertools
from dataclasses import dataclass

from .codec import DigitWord, encode
from .distributions import Distribution, FrequencyTarget
from .errors import TailExhaustionError

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64: 64-bit state, golden-ratio increment, avalanche output."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def uniform(self) -> float:
        """53-bit uniform in [0, 1)."""
        return (self.next_uint64() >> 11) * 2.0 ** -53


def sample_stream(seed: int, index: int) -> SplitMix64:
    """Independent generator for one sample, derived from (seed, index)."""
    return SplitMix64(_mix64((seed + (index + 1) * _GOLDEN) & _MASK64))


def _draw_digit(q, u: float, cumulative=None) -> int:
    if isinstance(q, Distribution):
        return q.locate(u)
    if cumulative is not None:
        d = bisect.bisect_right(cumulative, u) + 1
        if d > len(cumulative):
            # float shortfall of the last cumulative; use the top positive cell
            for i in range(len(q.weights), 0, -1):
                if q.weights[i - 1] > 0.0:
                    return i
        return d
    # rule-given target: scan the cumulative mass
    total = 0.0
    for i in range(1, 10 ** 6 + 1):
        total += q.q(i)
        if total > u:
            return i
    raise ValueError("target has insufficient mass on the reachable horizon "
                     "to invert the CDF")


def sample_word(q, k: int, seed: int) -> DigitWord:
    """Draw ``k`` digits i.i.d. from ``q`` by inverse CDF over its prefix sums.

    ``q`` may be a FrequencyTarget or a Distribution. Deterministic given
    the seed.
    """
    if k < 1:
        raise ValueError(f"word length must be >= 1, got {k}")
    cumulative = None
    if isinstance(q, FrequencyTarget) and q.is_finite:
        cumulative = list(itertools.accumulate(q.weights))
    rng = SplitMix64(seed)
    return DigitWord(tuple(_draw_digit(q, rng.uniform(), cumulative)
                           for _ in range(k)))


def empirical_frequency(word: DigitWord, n: int) -> float:
    """Fraction of positions of ``word`` holding digit ``n``."""
    if len(word) == 0:
        raise ValueError("empirical frequency of an empty word is undefined")
    if n < 1:
        raise ValueError(f"digit must be >= 1, got {n}")
    return sum(1 for d in word if d == n) / len(word)


@dataclass(frozen=True)
class FrequencyReport:
    """Aggregated digit frequencies of encoded uniform samples.

    ``counts[n-1]`` is the number of occurrences of digit n <= horizon
    across all orbits; ``out_of_horizon`` collects the rest, so the counts
    sum to ``total_digits`` exactly. Orbits shorter than requested (by
    precision or tail exhaustion) contribute their actual lengths.
    """

    samples: int
    k: int
    digit_horizon: int
    seed: int
    counts: tuple[int, ...]
    out_of_horizon: int
    total_digits: int
    max_digit: int
    targets: tuple[float, ...]
    truncated_orbits: int
    exhausted_orbits: int

    @property
    def frequencies(self) -> tuple[float, ...]:
        return tuple(c / self.total_digits for c in self.counts)

    @property
    def abs_deviations(self) -> tuple[float, ...]:
        return tuple(abs(f - t) for f, t in zip(self.frequencies, self.targets))

    @property
    def mean_abs_deviation(self) -> float:
        return sum(self.abs_deviations) / self.digit_horizon

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("digit,target_p,empirical,abs_deviation\n")
        for n, (t, f) in enumerate(zip(self.targets, self.frequencies), start=1):
            out.write(f"{n},{t!r},{f!r},{abs(f - t)!r}\n")
        return out.getvalue()


def frequency_experiment(dist: Distribution, samples: int, k: int,
                         digit_horizon: int = 10, seed: int = 0) -> FrequencyReport:
    """Encode uniform samples and compare digit frequencies with the pmf.

    Each sample draws x uniformly, encodes its first ``k`` digits, and the
    per-digit counts are pooled. Orbits cut short by precision exhaustion
    or an unresolvable tail point are kept at their actual length.
    """
    if samples < 1 or k < 1 or digit_horizon < 1:
        raise ValueError("samples, k and digit_horizon must be >= 1")
    counts = [0] * digit_horizon
    out_of_horizon = 0
    total = 0
    max_digit = 0
    truncated = 0
    exhausted = 0
    for idx in range(samples):
        x = sample_stream(seed, idx).uniform()
        try:
            word = encode(dist, x, k)
        except TailExhaustionError as exc:
            word = exc.partial_word
            exhausted += 1
        if len(word) < k:
            truncated += 1
        for d in word:
            if d <= digit_horizon:
                counts[d - 1] += 1
            else:
                out_of_horizon += 1
            if d > max_digit:
                max_digit = d
        total += len(word)
    if total == 0:
        raise ValueError("no digits were produced; samples are unresolvable")
    targets = tuple(dist.pmf(n) for n in range(1, digit_horizon + 1))
    return FrequencyReport(samples=samples, k=k, digit_horizon=digit_horizon,
                           seed=seed, counts=tuple(counts),
                           out_of_horizon=out_of_horizon, total_digits=total,
                           max_digit=max_digit, targets=targets,
                           truncated_orbits=truncated, exhausted_orbits=exhausted)


@dataclass(frozen=True)
class MaxDigitGrowthCurve:
    """Share of samples whose running max digit exceeds each threshold.

    ``fractions[t][j-1]`` is the fraction of samples whose largest digit
    within their first j digits exceeds threshold t; each curve is
    non-decreasing in j. Orbits shorter than j keep their final max.
    """

    samples: int
    k: int
    seed: int
    thresholds: tuple[int, ...]
    fractions: dict[int, tuple[float, ...]]


def unboundedness_probe(dist: Distribution, samples: int, k: int, seed: int,
                        thresholds: tuple[int, ...] = (2, 5, 10)) -> MaxDigitGrowthCurve:
    """Watch the maximum digit grow along orbit prefixes.

    Almost every real has unbounded digits; the curves quantify how fast
    the running maximum escapes each threshold.
    """
    if samples < 1 or k < 1:
        raise ValueError("samples and k must be >= 1")
    exceed = {t: [0] * k for t in thresholds}
    for idx in range(samples):
        x = sample_stream(seed, idx).uniform()
        try:
            word = encode(dist, x, k)
        except TailExhaustionError as exc:
            word = exc.partial_word
        running = 0
        for j in range(k):
            if j < len(word):
                d = word[j]
                if d > running:
                    running = d
            for t in thresholds:
                if running > t:
                    exceed[t][j] += 1
    fractions = {t: tuple(c / samples for c in exceed[t]) for t in thresholds}
    return MaxDigitGrowthCurve(samples=samples, k=k, seed=seed,
                               thresholds=tuple(thresholds), fractions=fractions)
