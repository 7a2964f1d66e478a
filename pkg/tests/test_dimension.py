import math

import pytest

from probdigits import (
    ConvergenceError,
    Distribution,
    DivergentSeriesError,
    FrequencyTarget,
    SplitMix64,
    bounded_digit_dimension_profile,
    entropy,
    equidistribution_dimension,
    expected_information,
    frequency_set_dimension,
    moran_dimension,
    moran_dimension_family,
    zeta_constant,
)
from probdigits.dimension import _feature_tails

LN2 = math.log(2.0)
# root of t + t^2 = 1 with t = 0.5^d gives d = log2((sqrt(5) + 1) / 2)
GOLDEN_DIM = math.log((math.sqrt(5.0) + 1.0) / 2.0) / LN2


# ---- Moran solver ----

def test_singleton_digit_set_dimension_zero(family_dist):
    r = moran_dimension(family_dist, {1})
    assert r.value == 0.0 and r.bracket == (0.0, 0.0) and r.residual == 0.0


def test_two_digit_geometric_root_has_closed_form(geo):
    r = moran_dimension(geo, {1, 2})
    assert abs(r.value - GOLDEN_DIM) < 1e-12


def test_poisson_two_digit_root_is_ln2(poi):
    # p_1 = p_2 = e^-1, so 2 e^-d = 1 at d = ln 2
    r = moran_dimension_family(poi, 2)
    assert abs(r.value - LN2) < 1e-12


def test_moran_rejects_bad_input(geo):
    with pytest.raises(ValueError):
        moran_dimension(geo, [])
    with pytest.raises(ValueError):
        moran_dimension(geo, [0, 2])
    with pytest.raises(ValueError):
        moran_dimension(geo, {1, 2}, tol=0.0)


def test_moran_certificate(family_dist):
    d = family_dist
    rng = SplitMix64(99)
    for _ in range(25):
        size = 2 + rng.next_uint64() % 8
        digits = set()
        while len(digits) < size:
            digits.add(1 + rng.next_uint64() % 25)
        r = moran_dimension(d, digits)
        lo, hi = r.bracket
        f_lo = math.fsum(d.pmf(i) ** lo for i in digits)
        f_hi = math.fsum(d.pmf(i) ** hi for i in digits)
        assert f_lo >= 1.0 >= f_hi
        assert hi - lo <= 1e-12
        assert lo <= r.value <= hi


def test_moran_monotone_in_digit_set(family_dist):
    d = family_dist
    rng = SplitMix64(123)
    for _ in range(20):
        size = 2 + rng.next_uint64() % 6
        digits = set()
        while len(digits) < size:
            digits.add(1 + rng.next_uint64() % 20)
        extra = set(digits)
        while len(extra) < size + 2:
            extra.add(1 + rng.next_uint64() % 20)
        assert moran_dimension(d, digits).value <= moran_dimension(d, extra).value + 1e-12


def test_family_and_generic_paths_agree():
    grids = [
        (Distribution.geometric, (0.1, 0.25, 0.5, 0.75, 0.9)),
        (Distribution.poisson, (0.25, 0.5, 1.0, 2.0, 4.0)),
        (Distribution.zeta, (1.5, 2.0, 3.0, 4.0, 5.0)),
    ]
    tol = 1e-13
    for ctor, params in grids:
        for param in params:
            d = ctor(param)
            for n in range(2, 7):
                a = moran_dimension(d, range(1, n + 1), tol).value
                b = moran_dimension_family(d, n, tol).value
                assert abs(a - b) <= 10.0 * tol, (d, n)


def test_family_path_rejects_custom():
    d = Distribution.custom(support=[0.5, 0.5])
    with pytest.raises(ValueError):
        moran_dimension_family(d, 2)


def test_geometric_dimension_spans_unit_interval():
    # for two digits the dimension sweeps (0, 1) as p does; near p = 1 the
    # root behaves like ln 2 / ln(1/(1-p)), e.g. 0.1504... at p = 0.99
    values = []
    for i in range(1, 100):
        p = i / 100.0
        values.append(moran_dimension_family(Distribution.geometric(p), 2).value)
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[0] > 0.99
    assert values[-1] == pytest.approx(0.15035099659, abs=1e-9)
    assert moran_dimension_family(Distribution.geometric(0.9999), 2).value < 0.1


def test_profile_increases_to_one(geo):
    profile = bounded_digit_dimension_profile(geo, 12)
    assert profile[0] == (1, profile[0][1])
    assert profile[0][1].value == 0.0
    vals = [r.value for _, r in profile[1:]]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 0.999


def test_profile_rejects_small_k(geo):
    with pytest.raises(ValueError):
        bounded_digit_dimension_profile(geo, 1)


# ---- entropy and expected information ----

def test_entropy_fair_coin():
    assert entropy(FrequencyTarget.from_weights([0.5, 0.5])) == pytest.approx(LN2, abs=1e-15)


def test_entropy_point_mass_zero():
    assert entropy(FrequencyTarget.point_mass(1)) == 0.0
    assert entropy(FrequencyTarget.from_weights([0.0, 1.0, 0.0])) == 0.0


def test_entropy_uniform_is_log_n():
    for n in (2, 3, 5, 8):
        assert entropy(FrequencyTarget.uniform(n)) == pytest.approx(math.log(n), abs=1e-12)


def test_entropy_geometric_closed_form():
    # H = -log(1-p) - p log(p) / (1-p)
    p = 0.5
    q = FrequencyTarget.from_distribution(Distribution.geometric(p))
    closed = -math.log(1.0 - p) - p * math.log(p) / (1.0 - p)
    brute = math.fsum(-(1 - p) * p ** (i - 1) * math.log((1 - p) * p ** (i - 1))
                      for i in range(1, 200))
    h = entropy(q)
    assert h == pytest.approx(closed, abs=1e-11)
    assert h == pytest.approx(brute, abs=1e-11)


def test_entropy_poisson_matches_brute_force(poi):
    # the pmf keeps representable terms up to ~i=178; beyond, the true
    # contribution is below 1e-300
    q = FrequencyTarget.from_distribution(poi)
    brute = math.fsum(-poi.pmf(i) * math.log(poi.pmf(i)) for i in range(1, 170))
    assert entropy(q) == pytest.approx(brute, abs=1e-10)


def test_entropy_zeta_needs_relaxed_tolerance(zet):
    # the zeta entropy tail decays like 2 log n / n: certifying 1e-12 would
    # take ~1e13 terms, so the default tolerance reports non-convergence
    q = FrequencyTarget.from_distribution(zet)
    with pytest.raises(ConvergenceError):
        entropy(q)
    brute = math.fsum(-zet.pmf(i) * math.log(zet.pmf(i))
                      for i in range(1, 200_000))
    h = entropy(q, tol=1e-4)
    assert h == pytest.approx(brute, abs=3e-4)
    assert h >= brute  # the partial sum only grows with more terms


def test_entropy_rule_target_needs_tail_bound():
    q = FrequencyTarget(rule=lambda i: 0.5 ** i)
    with pytest.raises(ValueError):
        entropy(q)


def test_entropy_rule_target_with_tail_bound():
    # same law as geometric(0.5); tail of -sum q log q is (i+2)/2^i summed
    q = FrequencyTarget(rule=lambda i: 0.5 ** i,
                        entropy_tail=lambda n: (n + 4.0) * 0.5 ** n)
    assert entropy(q) == pytest.approx(2.0 * LN2, abs=1e-10)


def test_expected_information_self_is_entropy(geo):
    q = FrequencyTarget.from_distribution(geo)
    assert expected_information(geo, q) == pytest.approx(2.0 * LN2, rel=1e-13)
    assert expected_information(geo, q) == pytest.approx(entropy(q), rel=1e-13)


def test_expected_information_point_mass(family_dist):
    q = FrequencyTarget.point_mass(1)
    assert expected_information(family_dist, q) == pytest.approx(
        -math.log(family_dist.pmf(1)), rel=1e-14)


def test_expected_information_two_cell_hand_value(geo):
    # q uniform on {1,2}: (ln 2 + ln 4) / 2 = 1.5 ln 2
    q = FrequencyTarget.uniform(2)
    assert expected_information(geo, q) == pytest.approx(1.5 * LN2, rel=1e-14)


def test_cross_family_information_matches_brute_force():
    q_geo = FrequencyTarget.from_distribution(Distribution.geometric(0.5))
    for p in (Distribution.poisson(1.0), Distribution.zeta(2.0)):
        brute = math.fsum(-0.5 ** i * math.log(p.pmf(i)) for i in range(1, 160))
        assert expected_information(p, q_geo) == pytest.approx(brute, rel=1e-10)


def test_divergent_information_is_reported():
    # zeta(1.5) has no first moment, so the geometric information diverges
    q = FrequencyTarget.from_distribution(Distribution.zeta(1.5))
    with pytest.raises(DivergentSeriesError):
        expected_information(Distribution.geometric(0.5), q)
    # against poisson the log-factorial term diverges for zeta(2)
    q2 = FrequencyTarget.from_distribution(Distribution.zeta(2.0))
    with pytest.raises(DivergentSeriesError):
        expected_information(Distribution.poisson(1.0), q2)


def test_feature_tail_bounds_dominate_brute_tails():
    cases = [Distribution.geometric(0.5), Distribution.poisson(1.0),
             Distribution.zeta(3.0)]
    features = [lambda i: 1.0, lambda i: float(i - 1),
                lambda i: math.log(i), lambda i: math.lgamma(i)]

    def pmf_or_zero(dist, i):
        try:
            return dist.pmf(i)
        except Exception:
            return 0.0   # below binary64: contributes nothing to the tail

    for dist in cases:
        for n in (8, 16, 64):
            bounds = _feature_tails(dist, n)
            for g, bound in zip(features, bounds):
                if math.isinf(bound):
                    continue
                brute = math.fsum(pmf_or_zero(dist, i) * g(i)
                                  for i in range(n + 1, n + 4000))
                assert brute <= bound * (1.0 + 1e-9) + 1e-15


# ---- frequency-set dimension ----

def test_self_target_dimension_exactly_one(family_dist):
    q = FrequencyTarget.from_distribution(family_dist)
    r = frequency_set_dimension(family_dist, q)
    assert r.value == 1.0 and r.bracket == (1.0, 1.0)


def test_uniform_two_thirds(geo):
    r = frequency_set_dimension(geo, FrequencyTarget.uniform(2))
    assert r.value == pytest.approx(2.0 / 3.0, rel=1e-14)


def test_point_mass_dimension_zero(family_dist):
    r = frequency_set_dimension(family_dist, FrequencyTarget.point_mass(1))
    assert r.value == 0.0


def test_dimension_never_exceeds_one(family_dist):
    rng = SplitMix64(314)
    for _ in range(30):
        size = 1 + rng.next_uint64() % 6
        raw = [rng.uniform() + 1e-3 for _ in range(size)]
        total = math.fsum(raw)
        q = FrequencyTarget.from_weights([w / total for w in raw])
        r = frequency_set_dimension(family_dist, q)
        assert r.value <= 1.0 + 1e-12


def test_bracket_contains_value_with_series_tails(geo):
    q = FrequencyTarget.from_distribution(Distribution.geometric(0.3))
    r = frequency_set_dimension(geo, q)
    lo, hi = r.bracket
    assert lo <= r.value <= hi
    assert r.residual == hi - lo
    assert r.residual < 1e-10


# ---- equidistribution ----

def test_equidistribution_matches_frequency_set_dimension(family_dist):
    for n in range(2, 7):
        direct = equidistribution_dimension(family_dist, n)
        ratio = frequency_set_dimension(family_dist, FrequencyTarget.uniform(n))
        assert abs(direct - ratio.value) < 1e-12


def test_equidistribution_geometric_two_thirds(geo):
    assert equidistribution_dimension(geo, 2) == pytest.approx(2.0 / 3.0, rel=1e-14)


def test_equidistribution_poisson_unit_mean_information(poi):
    # p_1 = p_2 = e^-1 gives mean information 1, so the value is ln 2
    assert equidistribution_dimension(poi, 2) == pytest.approx(LN2, rel=1e-12)


def test_equidistribution_zeta_closed_form():
    for s in (1.5, 2.0, 3.0):
        dist = Distribution.zeta(s)
        for n in range(2, 7):
            closed = math.log(n) / (
                math.log(zeta_constant(s))
                + s * math.fsum(math.log(i) for i in range(1, n + 1)) / n)
            assert abs(equidistribution_dimension(dist, n) - closed) < 1e-12


def test_equidistribution_rejects_small_n(geo):
    with pytest.raises(ValueError):
        equidistribution_dimension(geo, 1)


def test_large_lambda_poisson_target_entropy_converges():
    # the ratio-domination tail bound is only valid beyond 2 lambda; the
    # warm-up window must read as "keep summing", not as divergence, and
    # source mass below binary64 resolution reads as frequency zero
    q = FrequencyTarget.from_distribution(Distribution.poisson(300.0))
    h = entropy(q)
    normal_approx = 0.5 * math.log(2.0 * math.pi * math.e * 300.0)
    assert abs(h - normal_approx) < 0.01


def test_profile_matches_published_half_column(geo):
    # five-decimal reference values for geometric(0.5), digit sets {1..k}
    published = {2: 0.69424, 3: 0.87914, 4: 0.94677, 5: 0.97522, 6: 0.98810}
    for k, result in bounded_digit_dimension_profile(geo, 6):
        if k == 1:
            continue
        truncated = math.floor(result.value * 1e5) / 1e5
        assert truncated == pytest.approx(published[k], abs=1e-9)
