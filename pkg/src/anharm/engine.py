"""Recursion engine for the semiclassical expansion of bound-state energies.

The logarithmic derivative of the reduced radial wavefunction is expanded
order by order; at each order it is a terminating Laurent series in r, so
the expansion reduces to a triangular recursion on the table of Laurent
coefficients rows[k][i].  Row 0 carries the classical momentum expansion;
each later row k contributes the energy correction E_k.  Bound states
enter through a single quantization entry per row: rows[1][0] equals the
zero count 2n + l + 1 and rows[k][k-1] vanishes for k >= 2.

An optional trial frequency omega0 replaces the true omega in row 0, and
the difference omega**2 - omega0**2 re-enters the recursion as a level-1
perturbation.  The expansion then reorganizes around the trial oscillator,
which is what the renormalization module optimizes over.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from anharm.errors import ConfigError, SingularFrequencyError
from anharm.model import PotentialSpec, QuantumState
from anharm.scalars import ScalarConfig


def _convolve_at(row_a, row_b, i):
    """sum_{p=0..i} row_a[p] * row_b[i-p]."""
    total = row_a[0] * row_b[i]
    for p in range(1, i + 1):
        total = total + row_a[p] * row_b[i - p]
    return total


def _classical_row(mass, omega0, potential: PotentialSpec, width: int, convert):
    """Laurent coefficients of the classical momentum -sqrt(2mV) around omega0.

    Entry i multiplies r**(2i + 1); entry 0 is -m*omega0.  Scalars are
    whatever `convert` produces (mass and omega0 are already converted).
    """
    two_m_omega = 2 * mass * omega0
    row = [-mass * omega0]
    for i in range(1, width):
        acc = -2 * mass * convert(potential.coefficient(i)) if i <= potential.degree else 0
        for p in range(1, i):
            acc = acc + row[p] * row[i - p]
        row.append(acc / two_m_omega)
    return row


def _build_rows(potential: PotentialSpec, state: QuantumState, order: int,
                convert, trial_omega0=None):
    """All Laurent rows 0..order, each of width `order`.

    trial_omega0, if given, must already be a working scalar (it may carry
    dual-number parts); row 0 is then built on it and the frequency shift
    term enters row 1.  Returns (rows, mass_scalar).
    """
    if order < 1:
        raise ConfigError("expansion order must be >= 1")
    width = order
    mass = convert(potential.mass)
    if trial_omega0 is None:
        omega0 = convert(potential.omega)
        shift = None
    else:
        omega0 = trial_omega0
        omega = convert(potential.omega)
        shift = mass * mass * (omega * omega - omega0 * omega0)

    c0 = _classical_row(mass, omega0, potential, width, convert)
    rows = [c0]
    scale = -1 / (2 * c0[0])  # recursion divides the bracket by -2*C0_0
    centrifugal = state.centrifugal
    zeros = state.zeros

    for k in range(1, order + 1):
        prev = rows[-1]
        row = []
        for i in range(width):
            if i == k - 1:
                # quantization condition pins this slot
                row.append(zeros if k == 1 else 0)
                continue
            acc = (3 - 2 * k + 2 * i) * prev[i]
            for j in range(1, (k - 1) // 2 + 1):
                t = _convolve_at(rows[j], rows[k - j], i)
                acc = acc + t + t
            if k >= 2 and k % 2 == 0:
                acc = acc + _convolve_at(rows[k // 2], rows[k // 2], i)
            if i >= 1:
                t = c0[1] * row[i - 1]
                for p in range(2, i + 1):
                    t = t + c0[p] * row[i - p]
                acc = acc + t + t
            if k == 2 and i == 0 and centrifugal:
                acc = acc - centrifugal
            if shift is not None and k == 1 and i == 1:
                acc = acc - shift
            row.append(scale * acc)
        rows.append(row)
    return rows, mass


def _energy_term(rows, k, two_mass):
    """E_k from rows 0..k: quadratic readout at Laurent index k-1."""
    i = k - 1
    total = rows[k - 1][i]
    for j in range((k - 1) // 2 + 1):
        t = _convolve_at(rows[j], rows[k - j], i)
        total = total + t + t
    if k % 2 == 0:
        total = total + _convolve_at(rows[k // 2], rows[k // 2], i)
    return -total / two_mass


def classical_coefficients(potential: PotentialSpec, count: int, *,
                           scalar: ScalarConfig = ScalarConfig(),
                           omega0=None) -> tuple:
    """First `count` Laurent coefficients of the classical momentum row.

    Expansion is around the potential's frequency unless a trial omega0
    is given.
    """
    if count < 1:
        raise ConfigError("count must be >= 1")
    with scalar.context():
        convert = scalar.converter()
        if omega0 is None:
            if potential.omega == 0:
                raise SingularFrequencyError(
                    "the classical row needs omega > 0 or an explicit omega0")
            w0 = convert(potential.omega)
        else:
            w0 = convert(omega0)
        return tuple(_classical_row(convert(potential.mass), w0, potential,
                                    count, convert))


@dataclass(frozen=True)
class EnergySeries:
    """Corrections E_1..E_K and their running partial sums."""

    corrections: tuple
    partial_sums: tuple

    @property
    def order(self) -> int:
        return len(self.corrections)

    def correction(self, k: int):
        """E_k, 1-based."""
        return self.corrections[k - 1]

    def partial_sum(self, k: int):
        """S_k = E_1 + ... + E_k, 1-based."""
        return self.partial_sums[k - 1]

    @property
    def value(self):
        """Highest-order partial sum."""
        return self.partial_sums[-1]


def _series_from_rows(rows, mass, order) -> EnergySeries:
    two_mass = 2 * mass
    corrections = []
    partial_sums = []
    running = 0
    for k in range(1, order + 1):
        e_k = _energy_term(rows, k, two_mass)
        running = running + e_k
        corrections.append(e_k)
        partial_sums.append(running)
    return EnergySeries(tuple(corrections), tuple(partial_sums))


@dataclass(frozen=True)
class LaurentTable:
    """Computed Laurent rows plus everything needed to read energies off them."""

    potential: PotentialSpec
    state: QuantumState
    order: int
    rows: tuple
    mass_scalar: object = field(repr=False)
    omega0: object = None

    def coeff(self, k: int, i: int):
        """Laurent entry of row k at index i (coefficient of r**(1 - 2k + 2i))."""
        return self.rows[k][i]

    def quantization_entry(self, k: int):
        """The pinned slot of row k; 2n + l + 1 at k = 1, zero above."""
        return self.rows[k][k - 1]


def build_table(potential: PotentialSpec, state: QuantumState, order: int, *,
                scalar: ScalarConfig = ScalarConfig(), omega0=None) -> LaurentTable:
    """Run the recursion and return the full table of Laurent rows.

    With omega0=None the expansion is around the potential's own frequency,
    which must be positive.  With omega0 given, row 0 uses the trial
    frequency instead; omega = 0 is then allowed.
    """
    with scalar.context():
        convert = scalar.converter()
        if omega0 is None:
            if potential.omega == 0:
                raise SingularFrequencyError(
                    "the plain expansion needs omega > 0; pass a trial "
                    "frequency to expand a pure anharmonic well"
                )
            trial = None
        else:
            trial = convert(omega0)
            if trial <= 0:
                raise ConfigError("trial frequency omega0 must be positive")
        rows, mass = _build_rows(potential, state, order, convert, trial)
    return LaurentTable(
        potential=potential,
        state=state,
        order=order,
        rows=tuple(tuple(r) for r in rows),
        mass_scalar=mass,
        omega0=None if omega0 is None else trial,
    )


def energy_corrections(table: LaurentTable, order: int | None = None) -> EnergySeries:
    """Energy corrections read off a computed table, up to the given order."""
    top = table.order if order is None else order
    if not 1 <= top <= table.order:
        raise ConfigError(f"order must be in 1..{table.order}")
    return _series_from_rows(table.rows, table.mass_scalar, top)


def raw_energy(potential: PotentialSpec, state: QuantumState, order: int, *,
               scalar: ScalarConfig = ScalarConfig()) -> EnergySeries:
    """Corrections and partial sums of the plain expansion around omega."""
    table = build_table(potential, state, order, scalar=scalar)
    return energy_corrections(table)
