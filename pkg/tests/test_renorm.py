from __future__ import annotations

import math
from fractions import Fraction

import pytest

from anharm.errors import ConfigError, NoRootError
from anharm.model import PotentialSpec, QuantumState
from anharm.renorm import (MINIMAL_DIFFERENCE, MINIMAL_SENSITIVITY,
                           RenormConfig, RootCandidate,
                           default_search_interval, optimize_omega0,
                           optimize_sequence, partial_sum_function)
from anharm.scalars import ScalarConfig

WEAK = PotentialSpec(omega=1, coefficients=(Fraction(1, 100), Fraction(1, 100)))
GROUND = QuantumState(0, 0)


@pytest.mark.parametrize("kwargs", [
    {"scheme": "steepest"},
    {"search_interval": (2.0, 1.0)},
    {"search_interval": (0.0, 1.0)},
    {"grid_points": 5},
    {"tolerance": 0.0},
])
def test_renorm_config_validation(kwargs):
    with pytest.raises(ConfigError):
        RenormConfig(**kwargs)


def test_default_search_interval_brackets_the_scale():
    lo, hi = default_search_interval(PotentialSpec(omega=2, coefficients=(1,)))
    assert lo == pytest.approx(0.2)
    assert hi >= 20.0


def test_candidate_metric_by_scheme():
    cand = RootCandidate(omega0=1.0, partial_sum=1.5, correction=0.1,
                         slope=0.0, curvature=-0.25, correction_slope=2.0)
    assert cand.metric(MINIMAL_SENSITIVITY) == 0.25
    assert cand.metric(MINIMAL_DIFFERENCE) == 2.0
    broken = RootCandidate(omega0=1.0, partial_sum=math.nan, correction=0.1,
                           slope=0.0, curvature=math.nan,
                           correction_slope=math.inf)
    assert broken.metric(MINIMAL_SENSITIVITY) == math.inf
    assert broken.metric(MINIMAL_DIFFERENCE) == math.inf


def test_optimize_rejects_exact_backend():
    with pytest.raises(ConfigError, match="float backend"):
        optimize_omega0(WEAK, GROUND, 2,
                        scalar=ScalarConfig(backend="exact-rational"))


def test_harmonic_fixed_point():
    pot = PotentialSpec(mass=1, omega=2)
    result = optimize_omega0(pot, QuantumState(1, 1), 3)
    assert float(result.omega0) == pytest.approx(2.0, abs=1e-4)
    # value insensitivity: S_N equals the exact level far beyond the
    # omega0 localization accuracy
    assert float(result.partial_sum) == pytest.approx(2 * (2 + 1 + 1.5),
                                                      abs=1e-12)


def test_weak_coupling_matches_reported_sum():
    result = optimize_omega0(WEAK, GROUND, 2)
    assert float(result.partial_sum) == pytest.approx(1.535791, abs=5e-6)


def test_minimal_difference_zeroes_last_correction():
    config = RenormConfig(scheme=MINIMAL_DIFFERENCE)
    result = optimize_omega0(WEAK, GROUND, 3, config)
    assert abs(float(result.corrections[-1])) < 1e-20
    assert float(result.partial_sum) == pytest.approx(1.6, abs=0.1)


def test_roots_sorted_and_inside_interval():
    pot = PotentialSpec(omega=0, coefficients=(0, 1))
    config = RenormConfig(search_interval=(0.5, 12.0))
    result = optimize_omega0(pot, GROUND, 8, config)
    assert result.frequency_extension
    roots = [r for r, _ in result.all_roots]
    assert roots == sorted(roots)
    assert all(0.5 <= r <= 12.0 for r in roots)
    assert len(roots) >= 2
    # flattest root wins: no candidate has smaller curvature magnitude
    curvatures = dict(result.all_roots)
    winner = min(curvatures, key=lambda r: abs(r - float(result.omega0)))
    assert curvatures[winner] == min(curvatures.values())


def test_no_root_error_reports_interval():
    config = RenormConfig(search_interval=(9.5, 10.0))
    with pytest.raises(NoRootError) as info:
        optimize_omega0(WEAK, GROUND, 4, config)
    assert info.value.interval == (9.5, 10.0)
    assert "[9.5, 10]" in str(info.value)
    assert info.value.endpoint_values[0] is not None


def test_sequence_orders_ascending_and_warm_started():
    results = optimize_sequence(WEAK, GROUND, (5, 2, 3))
    assert [r.order for r in results] == [2, 3, 5]
    sums = [float(r.partial_sum) for r in results]
    # successive sums approach the converged value 1.621690
    gaps = [abs(s - 1.621690) for s in sums]
    assert gaps[0] > gaps[-1]


def test_partial_sum_function_backends_agree():
    fn40 = partial_sum_function(WEAK, GROUND, 4,
                                scalar=ScalarConfig(backend="float", digits=40))
    fn64 = partial_sum_function(WEAK, GROUND, 4, scalar=None)
    d40 = fn40(1.3)
    d64 = fn64(1.3)
    assert float(d40.value) == pytest.approx(d64.value, rel=1e-12)
    assert float(d40.first) == pytest.approx(d64.first, rel=1e-10)
    assert float(d40.second) == pytest.approx(d64.second, rel=1e-8)


def test_partial_sum_function_rejects_bad_order():
    with pytest.raises(ConfigError):
        partial_sum_function(WEAK, GROUND, 0)
