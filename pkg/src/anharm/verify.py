"""Cross-oracle consistency checks.

Each check pits two independent implementations against each other: the
recursion engine against hand-transcribed closed forms, dual-number
derivatives against finite differences, the optimizer against the exact
harmonic answer, and the whole series machinery against the Numerov
solver.  The CLI's verify command runs these and reports pass/fail; the
quick subset stays inside a few seconds for use as a smoke test.

Checks call their oracles through module attributes (closedforms.…,
numerov.…) so a test can deliberately perturb one side and watch the
matching check fail by name.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from anharm import closedforms, numerov
from anharm.engine import build_table, energy_corrections
from anharm.model import PotentialSpec, QuantumState
from anharm.renorm import partial_sum_function, renorm_corrections
from anharm.scalars import ScalarConfig, exact_sqrt

EXACT = ScalarConfig(backend="exact-rational")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def check_closed_forms(quick: bool):
    """Engine corrections E_1..E_5 equal the transcribed forms exactly."""
    cases = [(1, Fraction(1, 10), Fraction(1, 100))]
    states = [(0, 0), (1, 1)]
    if not quick:
        cases += [(1, 2, 3), (2, 1, 1)]
        states += [(0, 2), (2, 0), (3, 3)]
    for omega, lam, mu in cases:
        potential = PotentialSpec(mass=1, omega=omega, coefficients=(lam, mu))
        for n, l in states:
            state = QuantumState(n, l)
            series = energy_corrections(build_table(potential, state, 5,
                                                    scalar=EXACT))
            want = closedforms.low_order_corrections(omega, lam, mu, state)
            for k, (got, ref) in enumerate(zip(series.corrections, want), 1):
                if got != ref:
                    return False, (f"order {k} at omega={omega}, lam={lam}, "
                                   f"mu={mu}, state=({n},{l}): {got} != {ref}")
    return True, "engine equals the transcribed low-order corrections exactly"


def check_quasi_exact(quick: bool):
    """Engine corrections for a r^2 + (b/3) r^4 + (c/9) r^6 at (0,1) equal
    the transcribed sextic forms E_1..E_6 exactly."""
    cases = [(Fraction(1, 2), Fraction(2), Fraction(3))]
    if not quick:
        cases += [(Fraction(2), Fraction(1, 5), Fraction(7)),
                  (Fraction(9, 2), Fraction(4), Fraction(1, 3))]
    state = QuantumState(0, 1)
    for a, b, c in cases:
        omega = exact_sqrt(2 * a)
        if omega is None:
            return False, f"2a must be a perfect square for this check, got a={a}"
        potential = PotentialSpec(mass=1, omega=omega,
                                  coefficients=(b / 3, c / 9))
        series = energy_corrections(build_table(potential, state, 6,
                                                scalar=EXACT))
        want = closedforms.quasi_exact_corrections(a, b, c)
        for k, (got, ref) in enumerate(zip(series.corrections, want), 1):
            if got != ref:
                return False, f"order {k} at a={a}, b={b}, c={c}: {got} != {ref}"
    return True, "engine equals the transcribed sextic corrections exactly"


def check_renorm_reduction(quick: bool):
    """With the trial frequency set to omega itself, the renormalized
    corrections must reduce to the raw ones exactly."""
    potential = PotentialSpec(mass=1, omega=2, coefficients=(1, 1))
    state = QuantumState(1, 0)
    order = 5 if quick else 8
    raw = energy_corrections(build_table(potential, state, order, scalar=EXACT))
    ren = renorm_corrections(potential, state, order, Fraction(2), scalar=EXACT)
    if raw.corrections != ren.corrections:
        return False, "renormalized corrections at omega0=omega differ from raw"
    return True, f"orders 1..{order} reduce exactly at omega0=omega"


def check_solvable_level(quick: bool):
    """Numerov reproduces the closed-form sextic level to 1e-6."""
    pairs = [(Fraction(1, 2), Fraction(1, 2))]
    if not quick:
        pairs.append((Fraction(1, 3), Fraction(1, 2)))
    worst = 0.0
    for a, c in pairs:
        b, energy = closedforms.quasi_exact_level(a, c)
        potential = PotentialSpec(mass=1, omega=math.sqrt(2 * float(a)),
                                  coefficients=(float(b) / 3, float(c) / 9))
        value = numerov.solve_eigenvalue(potential, QuantumState(0, 1))
        worst = max(worst, abs(value - float(energy)))
    if worst > 1e-6:
        return False, f"worst deviation {worst:.2e} exceeds 1e-6"
    return True, f"worst deviation {worst:.2e}"


def check_harmonic_spectrum(quick: bool):
    """Numerov matches (2n + l + 3/2) omega on a grid of states."""
    if quick:
        states = [(0, 0), (1, 1)]
        omegas = [1.0]
    else:
        states = [(n, l) for n in range(4) for l in range(4)]
        omegas = [1.0, 2.0]
    worst = 0.0
    for omega in omegas:
        potential = PotentialSpec(mass=1, omega=omega, coefficients=())
        for n, l in states:
            value = numerov.solve_eigenvalue(potential, QuantumState(n, l))
            worst = max(worst, abs(value - (2 * n + l + 1.5) * omega))
    if worst > 1e-8:
        return False, f"worst deviation {worst:.2e} exceeds 1e-8"
    return True, f"worst deviation {worst:.2e} over {len(states) * len(omegas)} states"


def check_derivatives(quick: bool):
    """Dual-number derivatives of S_N(omega0) agree with central
    differences at step 1e-6 * omega0."""
    potential = PotentialSpec(mass=1, omega=1,
                              coefficients=(Fraction(1, 10), Fraction(1, 10)))
    state = QuantumState(0, 1)
    order = 6 if quick else 12
    scalar = ScalarConfig(backend="float", digits=40)
    fn = partial_sum_function(potential, state, order, scalar=scalar)
    points = [0.7, 1.4, 2.9] if quick else [0.5 + 0.45 * i for i in range(10)]
    worst_first = worst_second = 0.0
    for omega0 in points:
        dual = fn(omega0)
        h = 1e-6 * omega0
        up, down = fn(omega0 + h), fn(omega0 - h)
        # difference at working precision; float64 differencing would lose
        # ~eps/h^2 to cancellation in the second derivative
        with scalar.context():
            num_first = up.value - down.value
            num_second = up.value + down.value - 2 * dual.value
        fd_first = float(num_first) / (2 * h)
        fd_second = float(num_second) / (h * h)
        worst_first = max(worst_first,
                          abs(float(dual.first) - fd_first)
                          / max(1.0, abs(fd_first)))
        worst_second = max(worst_second,
                           abs(float(dual.second) - fd_second)
                           / max(1.0, abs(fd_second)))
    if worst_first > 1e-6 or worst_second > 1e-4:
        return False, (f"first {worst_first:.2e} (limit 1e-6), "
                       f"second {worst_second:.2e} (limit 1e-4)")
    return True, f"first {worst_first:.2e}, second {worst_second:.2e}"


def check_table_cells(quick: bool):
    """Early rows of one benchmark column land on the reported values."""
    from anharm import table as table_mod
    column = table_mod.compute_column(0, 0, "0.01", orders=(2, 5))
    from anharm.benchmarks import REFERENCE_PARTIAL_SUMS
    refs = REFERENCE_PARTIAL_SUMS[(0, 0, "0.01")][:2]
    worst = max(abs(got - want) / abs(want)
                for got, want in zip(column.partial_sums, refs))
    if worst > 1e-2:
        return False, f"worst relative deviation {worst:.2e} exceeds 1e-2"
    return True, f"worst relative deviation {worst:.2e}"


# (name, callable, included in --quick)
CHECKS = (
    ("closed-form corrections", check_closed_forms, True),
    ("quasi-exact sextic corrections", check_quasi_exact, True),
    ("renormalized series reduction", check_renorm_reduction, True),
    ("solvable sextic vs radial solver", check_solvable_level, True),
    ("harmonic spectrum", check_harmonic_spectrum, True),
    ("trial-frequency derivatives", check_derivatives, True),
    ("benchmark table cells", check_table_cells, False),
)


def run_checks(quick: bool = False) -> list[CheckResult]:
    results = []
    for name, fn, in_quick in CHECKS:
        if quick and not in_quick:
            continue
        start = time.perf_counter()
        try:
            passed, detail = fn(quick)
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name, passed, detail,
                                   time.perf_counter() - start))
    return results
