"""Bound states of the spherical anharmonic oscillator.

Computes perturbation corrections to the energy eigenvalues of
V(r) = m omega^2 r^2 / 2 + sum_i v_i r^(2i+2) through a recursion on the
Laurent coefficients of the wavefunction's logarithmic derivative, resums
the (divergent) series with a renormalized trial frequency, and checks
everything against closed forms and an independent Numerov solver.
"""

from anharm.errors import (
    AnharmError,
    BracketError,
    ConfigError,
    ConvergenceError,
    NoRootError,
    SingularFrequencyError,
)
from anharm.model import (
    PotentialSpec,
    QuantumState,
    ScalarConfig,
    load_config,
    parse_config,
    parse_potential,
)
from anharm.engine import (
    EnergySeries,
    LaurentTable,
    build_table,
    classical_coefficients,
    energy_corrections,
    raw_energy,
)
from anharm.renorm import (
    RenormConfig,
    RenormResult,
    RootCandidate,
    optimize_omega0,
    optimize_sequence,
    partial_sum_function,
    renorm_corrections,
)
from anharm.numerov import GridConfig, count_nodes, solve_eigenvalue

__version__ = "0.1.0"

__all__ = [
    "AnharmError",
    "BracketError",
    "ConfigError",
    "ConvergenceError",
    "EnergySeries",
    "GridConfig",
    "LaurentTable",
    "NoRootError",
    "PotentialSpec",
    "QuantumState",
    "RenormConfig",
    "RenormResult",
    "RootCandidate",
    "ScalarConfig",
    "SingularFrequencyError",
    "build_table",
    "classical_coefficients",
    "count_nodes",
    "energy_corrections",
    "load_config",
    "optimize_omega0",
    "optimize_sequence",
    "parse_config",
    "parse_potential",
    "partial_sum_function",
    "raw_energy",
    "renorm_corrections",
    "solve_eigenvalue",
]
