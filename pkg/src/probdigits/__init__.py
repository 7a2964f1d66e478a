"""Digit representations of reals in [0, 1) induced by probability
distributions on the positive integers.

A distribution p on {1, 2, ...} splits the unit interval into cells of
width p_n; reading off the cell of a point, rescaling, and repeating
yields a digit expansion generalizing base-b representations to
non-uniform cell widths. The package computes these expansions, the
Hausdorff dimensions of digit-restricted and frequency-prescribed sets,
and Monte Carlo checks of the almost-sure digit frequencies.
"""

from .codec import (
    RELIABLE_WIDTH,
    CylinderInterval,
    DigitWord,
    apply_contraction,
    decode,
    encode,
    shift,
)
from .dimension import (
    DimensionResult,
    bounded_digit_dimension_profile,
    entropy,
    equidistribution_dimension,
    expected_information,
    frequency_set_dimension,
    moran_dimension,
    moran_dimension_family,
)
from .distributions import (
    Distribution,
    Family,
    FrequencyTarget,
    ValidationReport,
    zeta_constant,
    zeta_with_error,
)
from .errors import (
    ConvergenceError,
    DivergentSeriesError,
    PrecisionExhaustionError,
    ProbdigitsError,
    TailExhaustionError,
    ValidationError,
)
from .stochastic import (
    FrequencyReport,
    MaxDigitGrowthCurve,
    SplitMix64,
    empirical_frequency,
    frequency_experiment,
    sample_stream,
    sample_word,
    unboundedness_probe,
)

__version__ = "0.1.0"

__all__ = [
    "CylinderInterval",
    "ConvergenceError",
    "DigitWord",
    "DimensionResult",
    "Distribution",
    "DivergentSeriesError",
    "Family",
    "FrequencyReport",
    "FrequencyTarget",
    "MaxDigitGrowthCurve",
    "PrecisionExhaustionError",
    "ProbdigitsError",
    "RELIABLE_WIDTH",
    "SplitMix64",
    "TailExhaustionError",
    "ValidationError",
    "ValidationReport",
    "apply_contraction",
    "bounded_digit_dimension_profile",
    "decode",
    "empirical_frequency",
    "encode",
    "entropy",
    "equidistribution_dimension",
    "expected_information",
    "frequency_experiment",
    "frequency_set_dimension",
    "moran_dimension",
    "moran_dimension_family",
    "sample_stream",
    "sample_word",
    "shift",
    "unboundedness_probe",
    "zeta_constant",
    "zeta_with_error",
]
