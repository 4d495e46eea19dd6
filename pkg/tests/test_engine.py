from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp

from anharm.engine import (build_table, classical_coefficients,
                           energy_corrections, raw_energy)
from anharm.errors import ConfigError, SingularFrequencyError
from anharm.model import PotentialSpec, QuantumState
from anharm.renorm import renorm_corrections
from anharm.scalars import ScalarConfig

EXACT = ScalarConfig(backend="exact-rational")


def _sympy_classical_row(mass, omega0, coefficients, count):
    """Series coefficients of -m*w0*r*sqrt(1 + (2/(m*w0^2)) sum c_i x^i),
    x = r^2, computed independently with sympy."""
    x = sp.symbols("x")
    inner = sp.Integer(1)
    for i, c in enumerate(coefficients, start=1):
        inner += 2 * sp.Rational(c) / (sp.Rational(mass) * sp.Rational(omega0) ** 2) * x**i
    series = sp.sqrt(inner).series(x, 0, count).removeO()
    out = []
    for i in range(count):
        value = -sp.Rational(mass) * sp.Rational(omega0) * series.coeff(x, i)
        value = sp.nsimplify(value)
        out.append(Fraction(int(value.p), int(value.q)))
    return tuple(out)


def test_classical_row_matches_sympy_sqrt_series():
    pot = PotentialSpec(mass=2, omega=3, coefficients=(Fraction(5, 7),
                                                       Fraction(1, 3)))
    got = classical_coefficients(pot, 6, scalar=EXACT)
    want = _sympy_classical_row(2, 3, pot.coefficients, 6)
    assert got == want


def test_classical_row_with_trial_frequency():
    pot = PotentialSpec(mass=1, omega=1, coefficients=(Fraction(1, 10),))
    got = classical_coefficients(pot, 5, scalar=EXACT, omega0=Fraction(7, 2))
    want = _sympy_classical_row(1, Fraction(7, 2), pot.coefficients, 5)
    assert got == want


def test_classical_row_leading_entry_is_minus_m_omega():
    pot = PotentialSpec(mass=3, omega=Fraction(5, 2), coefficients=(1,))
    assert classical_coefficients(pot, 1, scalar=EXACT)[0] == Fraction(-15, 2)


def test_classical_row_needs_some_frequency():
    pot = PotentialSpec(mass=1, omega=0, coefficients=(1,))
    with pytest.raises(SingularFrequencyError):
        classical_coefficients(pot, 3, scalar=EXACT)
    got = classical_coefficients(pot, 3, scalar=EXACT, omega0=2)
    assert got == _sympy_classical_row(1, 2, (1,), 3)


def test_quantization_condition_rows():
    pot = PotentialSpec(coefficients=(1, 1))
    state = QuantumState(2, 1)
    table = build_table(pot, state, 6, scalar=EXACT)
    assert table.quantization_entry(1) == state.zeros == 6
    for k in range(2, 7):
        assert table.quantization_entry(k) == 0


def test_corrections_independent_of_table_width():
    pot = PotentialSpec(omega=1, coefficients=(Fraction(1, 3), Fraction(2, 5)))
    state = QuantumState(1, 2)
    short = raw_energy(pot, state, 4, scalar=EXACT)
    long = raw_energy(pot, state, 9, scalar=EXACT)
    assert short.corrections == long.corrections[:4]


def test_harmonic_series_is_first_order_exact():
    pot = PotentialSpec(mass=1, omega=Fraction(3, 2))
    series = raw_energy(pot, QuantumState(1, 2), 6, scalar=EXACT)
    assert series.correction(1) == Fraction(3, 2) * (2 + 2 + Fraction(3, 2))
    assert all(series.correction(k) == 0 for k in range(2, 7))
    assert series.value == series.correction(1)


def test_energy_series_accessors():
    pot = PotentialSpec(coefficients=(1,))
    series = raw_energy(pot, QuantumState(), 3, scalar=EXACT)
    assert series.order == 3
    assert series.partial_sum(3) == sum(series.corrections)
    with pytest.raises(ConfigError):
        energy_corrections(build_table(pot, QuantumState(), 3, scalar=EXACT), 4)


def test_raw_expansion_rejects_zero_frequency():
    pot = PotentialSpec(omega=0, coefficients=(1,))
    with pytest.raises(SingularFrequencyError):
        raw_energy(pot, QuantumState(), 3, scalar=EXACT)


def test_trial_frequency_reduces_to_raw_at_omega():
    pot = PotentialSpec(omega=2, coefficients=(Fraction(1, 4),))
    state = QuantumState(0, 2)
    raw = raw_energy(pot, state, 7, scalar=EXACT)
    ren = renorm_corrections(pot, state, 7, Fraction(2), scalar=EXACT)
    assert raw.corrections == ren.corrections


def _binomial_half_partial(x: Fraction, terms: int) -> Fraction:
    """sum_{j<terms} binom(1/2, j) x^j."""
    total = Fraction(0)
    term = Fraction(1)
    for j in range(terms):
        total += term
        term *= (Fraction(1, 2) - j) / (j + 1) * x
    return total


@pytest.mark.parametrize("omega0", [Fraction(2), Fraction(1, 2), Fraction(7, 3)])
@pytest.mark.parametrize("order", [1, 3, 6])
def test_renormalized_harmonic_sums_are_sqrt_taylor_partials(omega0, order):
    # S_N at trial frequency w0 is (2n+l+3/2) * w0 * T_N(d/w0^2) with
    # T_N the N-term Taylor partial of sqrt(1+x) and d = w^2 - w0^2
    pot = PotentialSpec(mass=1, omega=1)
    state = QuantumState(0, 1)
    x = (1 - omega0**2) / omega0**2
    want = Fraction(5, 2) * omega0 * _binomial_half_partial(x, order)
    series = renorm_corrections(pot, state, order, omega0, scalar=EXACT)
    assert series.partial_sum(order) == want


def test_float_backend_agrees_with_exact():
    pot = PotentialSpec(omega=1, coefficients=(Fraction(1, 10), Fraction(1, 100)))
    state = QuantumState(1, 1)
    exact = raw_energy(pot, state, 8, scalar=EXACT)
    approx = raw_energy(pot, state, 8, scalar=ScalarConfig(backend="float",
                                                           digits=40))
    for k in range(1, 9):
        got = float(approx.correction(k))
        want = float(exact.correction(k))
        assert got == pytest.approx(want, rel=1e-13, abs=1e-30)
