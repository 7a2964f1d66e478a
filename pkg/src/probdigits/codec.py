"""Digit encoding and decoding through the contractions T_n.

The n-th contraction maps [0, 1) onto the cell [prefix(n), prefix(n+1)):

    T_n(x) = pmf(n) * x + prefix(n)

A digit word selects a nested chain of such cells; its cylinder interval
is the image of [0, 1) under the composed contractions.

Cylinder endpoints are computed in exact integer (dyadic) arithmetic over
the cached prefix values and rounded once at the end. Binary64 floats are
dyadic rationals, so the cell boundaries prefix(n) are exact inputs; a
word's lower endpoint and width are then exact products and sums. Both
endpoints are rounded upward, which makes sibling cylinders round to the
same shared boundary: decoded intervals abut exactly, never overlap, and
contain every float of the exact real interval. The width is rounded to
nearest separately so it stays within half an ulp of the true cell
product. For words deep enough that the width sinks below the spacing of
floats near ``lo``, ``lo + width`` would collapse; the interval therefore
stores its rounded upper endpoint and membership tests use it.

Encoding walks the exact subdivision: each digit is the cell of the
current cylinder that contains x, decided by exact comparisons, so the
decoded cylinder of an encoded word always contains x. Digits stop being
meaningful once the cylinder is narrower than the resolution of the input
float; encode truncates there (width below 2**-52) and the short word is
the precision-exhaustion flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .distributions import Distribution
from .errors import PrecisionExhaustionError, TailExhaustionError

#: cylinders narrower than this cannot be pinned down by a binary64 input
RELIABLE_WIDTH = 2.0 ** -52


@dataclass(frozen=True)
class DigitWord:
    """A finite sequence of digits (positive integers).

    The empty word is legal and denotes the whole interval [0, 1).
    Text form is comma-separated digits, e.g. ``"2,1,1,1"``.
    """

    digits: tuple[int, ...] = ()

    def __post_init__(self):
        for d in self.digits:
            if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                raise ValueError(f"digits must be integers >= 1, got {d!r}")

    @classmethod
    def parse(cls, text: str) -> "DigitWord":
        text = text.strip()
        if not text:
            return cls(())
        try:
            return cls(tuple(int(part) for part in text.split(",")))
        except ValueError as exc:
            raise ValueError(f"malformed digit word {text!r}: {exc}") from None

    def __str__(self) -> str:
        return ",".join(str(d) for d in self.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, idx):
        return self.digits[idx]


@dataclass(frozen=True)
class CylinderInterval:
    """Half-open interval [lo, lo + width) of reals sharing a digit prefix.

    ``width`` is the product of the word's cell widths to within half an
    ulp. ``upper`` is the upward-rounded float image of the exact upper
    endpoint; it is stored because ``lo + width`` evaluated in binary64
    collapses once ``width`` drops below the float spacing at ``lo``.
    """

    lo: float
    width: float
    upper: float
    word: DigitWord

    def contains(self, x: float) -> bool:
        return self.lo <= x < self.upper


# ---- exact dyadic arithmetic on pairs (num, shift): value = num * 2**-shift ----

def _dy(x: float) -> tuple[int, int]:
    m, e = math.frexp(x)
    return int(m * (1 << 53)), 53 - e


def _dy_align(a, b):
    (n1, s1), (n2, s2) = a, b
    if s1 < s2:
        n1 <<= s2 - s1
        s1 = s2
    elif s2 < s1:
        n2 <<= s1 - s2
    return n1, n2, s1


def _dy_add(a, b):
    n1, n2, s = _dy_align(a, b)
    return n1 + n2, s


def _dy_sub(a, b):
    n1, n2, s = _dy_align(a, b)
    return n1 - n2, s


def _dy_mul(a, b):
    return a[0] * b[0], a[1] + b[1]


def _dy_sign_minus(a, b) -> int:
    n1, n2, _ = _dy_align(a, b)
    return (n1 > n2) - (n1 < n2)


def _dy_float_nearest(a) -> float:
    n, s = a
    if n == 0:
        return 0.0
    # big-int true division rounds correctly to nearest
    return n / (1 << s) if s >= 0 else float(n << -s)


def _dy_float_up(a) -> float:
    f = _dy_float_nearest(a)
    if _dy_sign_minus(a, _dy(f)) > 0:
        return math.nextafter(f, math.inf)
    return f


def _cell(dist: Distribution, d: int):
    """Exact dyadic cell [prefix(d), prefix(d+1)) boundaries and width."""
    if dist.support is not None and d > len(dist.support):
        raise ValueError(
            f"digit {d} is outside the finite support of size {len(dist.support)}")
    lo = _dy(dist.prefix(d))
    hi = _dy(dist.prefix(d + 1))
    cell = _dy_sub(hi, lo)
    if cell[0] <= 0:
        raise PrecisionExhaustionError(
            f"digit {d} has no representable cell width (prefix sums have "
            f"stalled at this resolution)")
    return lo, cell


# ---- operations ----

def apply_contraction(dist: Distribution, n: int, x: float) -> float:
    """T_n(x) = pmf(n) * x + prefix(n), kept inside the digit-n cell."""
    if not (0.0 <= x < 1.0):
        raise ValueError(f"x must lie in [0, 1), got {x!r}")
    lo = dist.prefix(n)
    y = dist.pmf(n) * x + lo
    hi = dist.prefix(n + 1)
    if y >= hi:
        y = math.nextafter(hi, 0.0)
    if y < lo:
        y = lo
    return y


def shift(dist: Distribution, x: float) -> tuple[int, float]:
    """One step of the expanding map: strip the leading digit of x.

    Returns ``(digit, y)`` with ``digit = locate(x)`` and
    ``y = (x - prefix(digit)) / pmf(digit)`` clamped into [0, 1).
    The float division drifts; iterating shift loses roughly the digit's
    cell entropy in input precision per step (see ``encode``).
    """
    n = dist.locate(x)
    y = (x - dist.prefix(n)) / dist.pmf(n)
    if y >= 1.0:
        y = math.nextafter(1.0, 0.0)
    elif y < 0.0:
        y = 0.0
    return n, y


def decode(dist: Distribution, word: DigitWord | Iterable[int]) -> CylinderInterval:
    """Cylinder interval of a digit word.

    The lower endpoint equals the composed contraction image
    T_{n_1}(T_{n_2}(...T_{n_k}(0))) of the cached cell boundaries,
    evaluated exactly and rounded once.
    """
    if not isinstance(word, DigitWord):
        word = DigitWord(tuple(word))
    lo = (0, 0)
    w = (1, 0)
    for d in word:
        cell_lo, cell = _cell(dist, d)
        lo = _dy_add(lo, _dy_mul(w, cell_lo))
        w = _dy_mul(w, cell)
    width = _dy_float_nearest(w)
    if width <= 0.0:
        raise PrecisionExhaustionError(
            f"cylinder width of a {len(word)}-digit word underflows binary64")
    return CylinderInterval(lo=_dy_float_up(lo), width=width,
                            upper=_dy_float_up(_dy_add(lo, w)), word=word)


def encode(dist: Distribution, x: float, k: int) -> DigitWord:
    """First ``k`` digits of the representation of ``x``.

    Digits are chosen by exact subdivision, so the decoded cylinder of the
    result always contains ``x``. The word is truncated at the last
    reliable digit: once the cylinder is narrower than ``RELIABLE_WIDTH``
    the input float carries no further digit information, and a shorter
    word than requested is returned as the precision-exhaustion flag.

    Raises TailExhaustionError (with the partial word attached) if some
    digit cannot be resolved within the distribution's ``n_max``.
    """
    if isinstance(x, int) and not isinstance(x, bool):
        x = float(x)
    if not (isinstance(x, float) and 0.0 <= x < 1.0):
        raise ValueError(f"x must be a float in [0, 1), got {x!r}")
    if k < 1:
        raise ValueError(f"word length must be >= 1, got {k}")
    reliable = _dy(RELIABLE_WIDTH)
    xd = _dy(x)
    lo = (0, 0)
    w = (1, 0)
    digits: list[int] = []
    pre = dist._prefix
    for _ in range(k):
        if _dy_sign_minus(w, reliable) < 0:
            break
        rem = _dy_sub(xd, lo)

        def at_or_below(j: int) -> bool:
            # does the boundary lo + w * prefix(j+1) sit at or below x?
            return _dy_sign_minus(_dy_mul(w, _dy(pre[j])), rem) <= 0

        # rightmost cached boundary index still at or below x; extend the
        # cache geometrically and retry while x sits at/above the top entry
        while True:
            top = len(pre) - 1
            if not at_or_below(top):
                if top == 1 or not at_or_below(1):
                    j = 0
                else:
                    lo_i, hi_i = 1, top - 1
                    while lo_i < hi_i:
                        mid = (lo_i + hi_i + 1) >> 1
                        if at_or_below(mid):
                            lo_i = mid
                        else:
                            hi_i = mid - 1
                    j = lo_i
                break
            grown = len(pre)
            if grown <= dist.n_max:
                dist.prefix(min(2 * grown, dist.n_max + 1))
            if len(pre) == grown:   # cap hit, stalled, or support spent
                raise TailExhaustionError(
                    f"cannot resolve digit {len(digits) + 1} of x={x!r} "
                    f"within n_max={dist.n_max}",
                    n_max=dist.n_max, x=x,
                    partial_word=DigitWord(tuple(digits)))
        d = j + 1
        cell_lo, cell = _cell(dist, d)
        lo = _dy_add(lo, _dy_mul(w, cell_lo))
        w = _dy_mul(w, cell)
        digits.append(d)
    return DigitWord(tuple(digits))
