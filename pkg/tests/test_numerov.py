from __future__ import annotations

import math

import pytest

from anharm.errors import BracketError, ConfigError
from anharm.model import PotentialSpec, QuantumState
from anharm.numerov import GridConfig, auto_grid, count_nodes, solve_eigenvalue

HARMONIC = PotentialSpec(mass=1, omega=1)


@pytest.mark.parametrize("kwargs", [
    {"r_max": 0.0, "bracket": (0, 2)},
    {"r_max": 10.0, "bracket": (0, 2), "step": 11.0},
    {"r_max": 10.0, "bracket": (0, 2), "step": -0.1},
    {"r_max": 10.0, "bracket": (2, 2)},
    {"r_max": 10.0, "bracket": (0, 2), "match_fraction": 1.0},
    {"r_max": 10.0, "bracket": (0, 2), "tolerance": 0.0},
])
def test_grid_config_validation(kwargs):
    with pytest.raises(ConfigError):
        GridConfig(**kwargs)


def test_grid_default_step():
    grid = GridConfig(r_max=10.0, bracket=(0, 2))
    assert grid.step == pytest.approx(10.0 / 20000)
    assert grid.points == 20000


@pytest.mark.parametrize("n,l", [(0, 0), (1, 0), (0, 2), (2, 1), (3, 3)])
def test_harmonic_levels(n, l):
    energy = solve_eigenvalue(HARMONIC, QuantumState(n, l))
    assert energy == pytest.approx(2 * n + l + 1.5, abs=1e-8)


def test_harmonic_levels_scale_with_omega():
    pot = PotentialSpec(mass=1, omega=2)
    energy = solve_eigenvalue(pot, QuantumState(1, 1))
    assert energy == pytest.approx(2 * (2 + 1 + 1.5), abs=1e-8)


def test_mass_enters_through_the_action():
    # for V = m w^2 r^2 / 2 the spectrum is independent of m at fixed w
    pot = PotentialSpec(mass=4, omega=1)
    energy = solve_eigenvalue(pot, QuantumState(0, 1))
    assert energy == pytest.approx(2.5, abs=1e-8)


def test_node_counts_step_at_eigenvalues():
    grid = GridConfig(r_max=12.0, bracket=(0.1, 9.0))
    # l = 0 levels sit at 1.5, 3.5, 5.5, ...
    assert count_nodes(HARMONIC, QuantumState(0, 0), 1.0, grid) == 0
    assert count_nodes(HARMONIC, QuantumState(0, 0), 2.5, grid) == 1
    assert count_nodes(HARMONIC, QuantumState(0, 0), 6.0, grid) == 3


def test_bracket_error_names_the_counts():
    grid = GridConfig(r_max=12.0, bracket=(5.0, 9.0))
    with pytest.raises(BracketError) as info:
        solve_eigenvalue(HARMONIC, QuantumState(0, 0), grid)
    assert info.value.nodes_low == 2
    assert info.value.nodes_high == 4
    assert "does not isolate" in str(info.value)


def test_stiff_grid_rejected():
    grid = GridConfig(r_max=40.0, bracket=(0.5, 2.5), step=2.0)
    with pytest.raises(ConfigError, match="grid too coarse"):
        solve_eigenvalue(HARMONIC, QuantumState(0, 0), grid)


def test_auto_grid_encloses_the_level():
    pot = PotentialSpec(omega=1, coefficients=(1,))
    state = QuantumState(2, 1)
    grid = auto_grid(pot, state)
    assert 6.0 <= grid.r_max <= 50.0
    lo, hi = grid.bracket
    energy = solve_eigenvalue(pot, state, grid)
    assert lo < energy < hi


def test_fourth_order_convergence_pair():
    exact = 4.5  # harmonic (1,1)
    errors = []
    for step in (0.08, 0.04):
        grid = GridConfig(r_max=14.0, bracket=(3.6, 5.4), step=step,
                          tolerance=1e-13)
        errors.append(abs(solve_eigenvalue(HARMONIC, QuantumState(1, 1), grid)
                          - exact))
    order = math.log2(errors[0] / errors[1])
    assert 3.5 <= order <= 4.5


def test_pure_sextic_ground_state_value():
    # no closed form; regression against an independent fine-grid run
    pot = PotentialSpec(omega=0, coefficients=(0, 1))
    energy = solve_eigenvalue(pot, QuantumState(0, 0))
    fine = GridConfig(r_max=8.0, bracket=(1.0, 4.0), step=8.0 / 40000,
                      tolerance=1e-12)
    assert energy == pytest.approx(solve_eigenvalue(pot, QuantumState(0, 0),
                                                    fine), abs=1e-7)
