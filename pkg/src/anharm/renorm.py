"""Trial-frequency optimization for the renormalized expansion.

The renormalized partial sum S_N depends on the trial frequency omega0.
Two standard prescriptions pin it down: minimal sensitivity (stationary
point of S_N, taken at the flattest extremum) and minimal difference (the
last included correction E_N vanishes).  Both reduce to root-finding on a
target function T(omega0) whose value and derivative come out of one
dual-number pass through the recursion.

Roots are located in three stages.  A float64 sweep over a log-spaced
grid runs the recursion once with array-valued duals, giving T on the
whole grid for every order at once; sign changes and suspicious near-zero
dips mark candidate cells.  Each candidate is polished with float64
scalar duals (a guarded Newton step needs only a handful of recursion
passes), which localizes every root far below the default tolerance and
yields exact-to-rounding curvatures for the flatness ranking.  Finally
the selected winner alone is re-evaluated in the configured
high-precision backend: its bracket is confirmed at full precision and
one Newton correction absorbs any float64 rounding, so the reported
energies carry no double-precision noise.  Stationary points of even
multiplicity (the harmonic oscillator at odd N is the canonical case)
never change sign; those come from the dip detector and are polished by
plain Newton, which is the one place bracketing is impossible.
"""

from __future__ import annotations

import math
from contextlib import nullcontext
from dataclasses import dataclass, field

import numpy as np

from anharm.dual import Dual
from anharm.engine import (EnergySeries, _build_rows, _series_from_rows,
                           build_table, energy_corrections)
from anharm.errors import ConfigError, NoRootError
from anharm.model import PotentialSpec, QuantumState
from anharm.scalars import ScalarConfig

MINIMAL_SENSITIVITY = "minimal-sensitivity"
MINIMAL_DIFFERENCE = "minimal-difference"
SCHEMES = (MINIMAL_SENSITIVITY, MINIMAL_DIFFERENCE)

# Roots whose ranking metric is within this fraction of the best are tied.
TIE_FRACTION = 0.01
# A grid dip counts as a suspected even-multiplicity root when it drops
# below this fraction of the largest target magnitude a few cells around.
DIP_RATIO = 0.05
DIP_WINDOW = 5
# Only roots whose grid-interpolated metric comes within this factor of
# the best are worth exact refinement; the rest sit orders of magnitude
# up the divergent ladder and are reported at grid resolution.
CONTENDER_FACTOR = 100.0


@dataclass(frozen=True)
class RenormConfig:
    """How to search for the optimal trial frequency."""

    scheme: str = MINIMAL_SENSITIVITY
    search_interval: tuple[float, float] | None = None
    grid_points: int = 2000
    tolerance: float = 1e-12

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.search_interval is not None:
            lo, hi = self.search_interval
            if not (0 < lo < hi):
                raise ConfigError("search interval must satisfy 0 < low < high")
            object.__setattr__(self, "search_interval", (float(lo), float(hi)))
        if not isinstance(self.grid_points, int) or self.grid_points < 10:
            raise ConfigError("grid_points must be an integer >= 10")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")


@dataclass(frozen=True)
class RootCandidate:
    """One zero of the target function, with local series diagnostics."""

    omega0: object
    partial_sum: object
    correction: object        # E_N at this trial frequency
    slope: object             # d S_N / d omega0
    curvature: object         # d^2 S_N / d omega0^2
    correction_slope: object  # d E_N / d omega0

    def metric(self, scheme: str) -> float:
        """Flatness figure used to rank roots; smaller is better."""
        if scheme == MINIMAL_SENSITIVITY:
            value = abs(float(self.curvature))
        else:
            value = abs(float(self.correction_slope))
        return value if math.isfinite(value) else math.inf


@dataclass(frozen=True)
class RenormResult:
    """Optimized trial frequency and the partial sum evaluated there."""

    order: int
    scheme: str
    omega0: object
    partial_sum: object
    corrections: tuple
    candidates: tuple[RootCandidate, ...]
    search_interval: tuple[float, float]
    frequency_extension: bool = field(default=False)

    @property
    def energy(self):
        return self.partial_sum

    @property
    def all_roots(self) -> tuple:
        """(omega0, |S''|) pairs for every root found, sorted by omega0."""
        return tuple((float(c.omega0), abs(float(c.curvature)))
                     for c in self.candidates)


def default_search_interval(potential: PotentialSpec) -> tuple[float, float]:
    """Default scan window [omega/10, 10*max(omega, v_i**(1/(2i+2)), 1)].

    Wide enough for low-order optimization around the potential's own
    scales.  High orders push the flattest stationary point to larger
    omega0 (roughly linearly in the order); callers chasing those should
    widen the window, as the table generator does.
    """
    scale = max(potential.frequency_scale(), 1.0)
    omega = float(potential.omega)
    low = (omega if omega > 0 else scale) / 10.0
    return low, 10.0 * scale


def table_search_interval(potential: PotentialSpec, order: int) -> tuple[float, float]:
    """Scan window wide enough to track the flattest branch up to `order`."""
    low, high = default_search_interval(potential)
    scale = max(potential.frequency_scale(), 1.0)
    return low, max(high, 2.0 * order * scale)


def renorm_corrections(potential: PotentialSpec, state: QuantumState, order: int,
                       omega0, *, scalar: ScalarConfig = ScalarConfig()) -> EnergySeries:
    """Corrections of the expansion reorganized around a fixed trial frequency."""
    table = build_table(potential, state, order, scalar=scalar, omega0=omega0)
    return energy_corrections(table)


class PartialSumFunction:
    """S_N as a function of the trial frequency, with exact derivatives.

    Calling the object runs the recursion with a dual-number trial
    frequency and returns a Dual whose value/first/second attributes are
    S_N and its first two omega0 derivatives.  The full dual correction
    list is available through series()/corrections().
    """

    def __init__(self, potential: PotentialSpec, state: QuantumState, order: int,
                 scalar: ScalarConfig | None = ScalarConfig()):
        if order < 1:
            raise ConfigError("order must be >= 1")
        self.potential = potential
        self.state = state
        self.order = order
        self.scalar = scalar  # None selects plain float64 arithmetic

    def _context(self):
        return nullcontext() if self.scalar is None else self.scalar.context()

    def _convert(self):
        return float if self.scalar is None else self.scalar.converter()

    def series(self, omega0) -> EnergySeries:
        """Dual-valued corrections E_1..E_N at the given trial frequency."""
        with self._context():
            convert = self._convert()
            seed = Dual.seed(convert(omega0), convert(1))
            rows, mass = _build_rows(self.potential, self.state, self.order,
                                     convert, seed)
            return _series_from_rows(rows, mass, self.order)

    def corrections(self, omega0) -> tuple:
        return self.series(omega0).corrections

    def __call__(self, omega0) -> Dual:
        return self.series(omega0).partial_sum(self.order)


def partial_sum_function(potential: PotentialSpec, state: QuantumState, order: int,
                         *, scalar: ScalarConfig = ScalarConfig()) -> PartialSumFunction:
    """Evaluator for S_N(omega0) carrying first and second derivatives."""
    return PartialSumFunction(potential, state, order, scalar)


def _scan_grid(potential, state, order, grid):
    """Float64 dual sweep over the whole grid at once.

    Returns arrays of shape (order, len(grid)): corrections, correction
    slopes, partial sums, partial-sum slopes, partial-sum curvatures.
    Overflow far outside the physical window shows up as non-finite
    entries and is masked by the caller.
    """
    seed = Dual(grid, np.ones_like(grid), np.zeros_like(grid))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        rows, mass = _build_rows(potential, state, order, float, seed)
        series = _series_from_rows(rows, mass, order)
        corr = np.array([d.a for d in series.corrections])
        corr_slope = np.array([d.b for d in series.corrections])
        sums = np.cumsum(corr, axis=0)
        sum_slope = np.cumsum(corr_slope, axis=0)
        sum_curv = np.cumsum([2 * d.c for d in series.corrections], axis=0)
    return corr, corr_slope, sums, sum_slope, sum_curv


class _TargetFunction:
    """Scheme target T(omega0) and its derivative from one dual pass."""

    def __init__(self, potential, state, order, scheme,
                 scalar: ScalarConfig | None):
        self.fn = PartialSumFunction(potential, state, order, scalar)
        self.order = order
        self.scheme = scheme

    def __call__(self, omega0):
        """Returns (T, dT/domega0, diagnostics) at omega0."""
        series = self.fn.series(omega0)
        s_dual = series.partial_sum(self.order)
        e_dual = series.correction(self.order)
        if self.scheme == MINIMAL_SENSITIVITY:
            t, dt = s_dual.first, s_dual.second
        else:
            t, dt = e_dual.value, e_dual.first
        return t, dt, (s_dual, e_dual, series.corrections)


def _candidate_from_diag(omega0, diag) -> RootCandidate:
    s_dual, e_dual, _ = diag
    return RootCandidate(
        omega0=omega0,
        partial_sum=s_dual.value,
        correction=e_dual.value,
        slope=s_dual.first,
        curvature=s_dual.second,
        correction_slope=e_dual.first,
    )


def _newton_bracketed(target, lo, hi, t_lo, t_hi, tol, max_iter=60):
    """Guarded Newton inside a sign-change bracket.  Returns (x, diag)."""
    x = lo + (hi - lo) * 0.5
    diag = None
    for _ in range(max_iter):
        t_x, dt_x, diag = target(x)
        if t_x == 0:
            return x, diag
        if (t_x > 0) == (t_lo > 0):
            lo, t_lo = x, t_x
        else:
            hi, t_hi = x, t_x
        step = t_x / dt_x if dt_x != 0 else None
        proposal = x - step if step is not None else None
        if proposal is None or not (lo < proposal < hi):
            proposal = (lo + hi) / 2
        if abs(proposal - x) <= tol * abs(x) or abs(hi - lo) <= tol * abs(x):
            return proposal, diag
        x = proposal
    return x, diag


def _refine_dip(target, start, tol, max_iter=60):
    """Newton from a grid dip, for roots without a sign change.

    Stationary points of multiplicity m pull Newton in at the slow rate
    (m-1)/m, so the step-ratio estimate of m feeds an accelerated step
    x - m t/t' every third iteration.  The iteration keeps the smallest
    residual seen and accepts it once the residual has collapsed well
    below its starting value, which a non-root minimum never does.
    Returns (x, diag) or None.
    """
    x = start
    t_x, dt_x, diag = target(x)
    t_start = abs(t_x)
    if t_start == 0:
        return x, diag
    best = (t_start, x, diag)
    prev_step = None
    for it in range(max_iter):
        if dt_x == 0:
            break
        step = t_x / dt_x
        factor = 1.0
        if it % 3 == 2 and prev_step is not None and float(step) * prev_step > 0:
            ratio = float(step) / prev_step
            if 0.05 < ratio < 0.98:
                factor = max(1.0, round(1.0 / (1.0 - ratio)))
        prev_step = float(step)
        new = x - factor * step
        if not new > 0:
            new = x - step
            if not new > 0:
                break
        settled = abs(new - x) <= tol * abs(new)
        x = new
        t_x, dt_x, diag = target(x)
        if abs(t_x) < best[0]:
            best = (abs(t_x), x, diag)
        if settled or t_x == 0:
            break
    if best[0] <= t_start * 1e-3:
        return best[1], best[2]
    return None


def _candidate_cells(grid, values):
    """Cells with a sign change of the target, plus dip indices that look
    like even-multiplicity roots (deep local minima of |target|)."""
    finite = np.isfinite(values)
    sign_cells = []
    for j in range(len(grid) - 1):
        if finite[j] and finite[j + 1]:
            a, b = values[j], values[j + 1]
            if a == 0 or (a > 0) != (b > 0):
                sign_cells.append(j)
    if finite[-1] and values[-1] == 0:
        sign_cells.append(len(grid) - 2)

    dips = []
    abs_vals = np.abs(np.where(finite, values, np.inf))
    for j in range(1, len(grid) - 1):
        if not (finite[j - 1] and finite[j] and finite[j + 1]):
            continue
        if not (abs_vals[j] < abs_vals[j - 1] and abs_vals[j] <= abs_vals[j + 1]):
            continue
        if any(abs(j - c) <= 2 for c in sign_cells):
            continue
        window = abs_vals[max(0, j - DIP_WINDOW): j + DIP_WINDOW + 1]
        local = window[np.isfinite(window)].max(initial=0.0)
        if local > 0 and abs_vals[j] <= DIP_RATIO * local:
            dips.append(j)
    return sign_cells, dips


def _select_winner(candidates, scheme, warm_start):
    metrics = [c.metric(scheme) for c in candidates]
    best = min(metrics)
    tied = [c for c, m in zip(candidates, metrics) if m <= best * (1 + TIE_FRACTION)]
    if len(tied) == 1:
        return tied[0]
    if warm_start is not None:
        return min(tied, key=lambda c: abs(float(c.omega0) - warm_start))
    return min(tied, key=lambda c: float(c.omega0))


def _polish_winner(potential, state, order, config, scalar, x64, had_bracket):
    """Re-refine a float64 root in the high-precision backend.

    For sign-change roots, confirms the sign change across a tolerance-
    sized bracket (falling back on Newton if rounding moved the root) and
    applies one Newton correction.  Dip roots get a capped Newton run,
    since they have no bracket at any precision.
    """
    target = _TargetFunction(potential, state, order, config.scheme, scalar)
    with scalar.context():
        convert = scalar.converter()
        x = convert(x64)
        tol = config.tolerance
        if had_bracket:
            t_x, dt_x, diag = target(x)
            for _ in range(6):
                if t_x == 0 or dt_x == 0:
                    break
                step = t_x / dt_x
                if abs(step) > 16 * tol * abs(x):
                    # float64 stage should have come closer; distrust Newton
                    break
                x = x - step
                t_x, dt_x, diag = target(x)
                if abs(step) <= tol * abs(x):
                    break
            return x, diag
        hit = _refine_dip(target, x, tol)
        if hit is not None:
            return hit
        t_x, _, diag = target(x)
        return x, diag


def optimize_sequence(potential: PotentialSpec, state: QuantumState, orders,
                      config: RenormConfig | None = None, *,
                      scalar: ScalarConfig = ScalarConfig(),
                      warm_start: float | None = None) -> list[RenormResult]:
    """Optimized results for several orders, sharing one grid sweep.

    Orders are processed in increasing order; when root metrics tie, each
    order prefers the neighborhood of the previous order's winner (or the
    given warm_start for the first).  Returns results sorted by order.
    """
    orders = sorted(set(int(k) for k in orders))
    if not orders or orders[0] < 1:
        raise ConfigError("orders must be positive integers")
    if config is None:
        config = RenormConfig()
    if scalar.is_exact:
        raise ConfigError("trial-frequency optimization needs the float backend")
    top = orders[-1]
    interval = config.search_interval or default_search_interval(potential)
    lo, hi = interval
    grid = np.geomspace(lo, hi, config.grid_points)
    scan = _scan_grid(potential, state, top, grid)
    corr, corr_slope, sums, sum_slope, sum_curv = scan
    extension = float(potential.omega) == 0.0
    tol64 = max(config.tolerance, 4e-15)

    results = []
    previous = warm_start
    for order in orders:
        k = order - 1
        if config.scheme == MINIMAL_SENSITIVITY:
            values = sum_slope[k]
        else:
            values = corr[k]
        sign_cells, dips = _candidate_cells(grid, values)
        if not sign_cells and not dips:
            finite = np.isfinite(values)
            if finite.any():
                edge = (float(values[finite][0]), float(values[finite][-1]))
            else:
                edge = (None, None)
            raise NoRootError(
                f"no {config.scheme} root of the order-{order} target in "
                f"[{lo:g}, {hi:g}]; endpoint target values {edge[0]!r} and {edge[1]!r}",
                interval=interval,
                endpoint_values=edge,
            )

        rows_at = {"sum": sums[k], "corr": corr[k], "slope": sum_slope[k],
                   "curv": sum_curv[k], "corr_slope": corr_slope[k]}
        metric_row = rows_at["curv"] if config.scheme == MINIMAL_SENSITIVITY \
            else rows_at["corr_slope"]

        def interp(row, j, frac):
            a, b = row[j], row[j + 1]
            if np.isfinite(a) and np.isfinite(b):
                return float((1 - frac) * a + frac * b)
            return float(a) if np.isfinite(a) else float(b)

        # grid-level position and flatness estimates for every root
        approx = []
        for j in sign_cells:
            a, b = float(values[j]), float(values[j + 1])
            frac = 0.5 if a == b else min(max(a / (a - b), 0.0), 1.0)
            x_est = float(grid[j]) + frac * float(grid[j + 1] - grid[j])
            approx.append((x_est, abs(interp(metric_row, j, frac)), True, j, frac))
        for j in dips:
            m = abs(float(metric_row[j])) if np.isfinite(metric_row[j]) else math.inf
            approx.append((float(grid[j]), m, False, j, 0.0))
        finite_metrics = [m for _, m, _, _, _ in approx if math.isfinite(m)]
        threshold = (min(finite_metrics) * CONTENDER_FACTOR
                     if finite_metrics else math.inf)

        target64 = _TargetFunction(potential, state, order, config.scheme, None)

        def refine(entry):
            """Exact float64 root and diagnostics for one grid candidate."""
            x_est, _, bracketed, j, _ = entry
            if bracketed:
                x, diag = _newton_bracketed(
                    target64, float(grid[j]), float(grid[j + 1]),
                    float(values[j]), float(values[j + 1]), tol64)
                return x, _candidate_from_diag(x, diag), True
            # high-multiplicity roots localize poorly in float64; keep the
            # raw grid point so the high-precision polish can take over
            hit = _refine_dip(target64, float(grid[j]), max(tol64, 3e-8))
            if hit is not None and lo * 0.99 <= hit[0] <= hi * 1.01:
                return hit[0], _candidate_from_diag(*hit), False
            return x_est, RootCandidate(
                omega0=x_est,
                partial_sum=float(rows_at["sum"][j]),
                correction=float(rows_at["corr"][j]),
                slope=float(rows_at["slope"][j]),
                curvature=float(rows_at["curv"][j]),
                correction_slope=float(rows_at["corr_slope"][j]),
            ), False

        # refine the contenders; ladder roots far up the divergent zone
        # keep their grid-interpolated values
        entries = []
        for entry in approx:
            x_est, m_est, bracketed, j, frac = entry
            if m_est <= threshold:
                x, cand, brk = refine(entry)
                entries.append([x, cand, brk, True, entry])
            else:
                cand = RootCandidate(
                    omega0=x_est,
                    partial_sum=interp(rows_at["sum"], j, frac),
                    correction=interp(rows_at["corr"], j, frac),
                    slope=interp(rows_at["slope"], j, frac),
                    curvature=interp(rows_at["curv"], j, frac),
                    correction_slope=interp(rows_at["corr_slope"], j, frac),
                )
                entries.append([x_est, cand, bracketed, False, entry])
        entries.sort(key=lambda e: e[0])
        deduped = []
        for e in entries:
            if deduped and abs(e[0] - deduped[-1][0]) <= 1e4 * tol64 * max(abs(e[0]), 1.0):
                if e[3] and not deduped[-1][3]:
                    deduped[-1] = e
                continue
            deduped.append(e)

        # select; if an unrefined root outranks the contenders, refine it
        # exactly and re-select
        while True:
            candidates = [e[1] for e in deduped]
            winner = _select_winner(candidates, config.scheme, previous)
            idx = candidates.index(winner)
            if deduped[idx][3]:
                break
            x, cand, brk = refine(deduped[idx][4])
            deduped[idx] = [x, cand, brk, True, deduped[idx][4]]

        x_hp, diag_hp = _polish_winner(potential, state, order, config, scalar,
                                       float(winner.omega0), deduped[idx][2])
        winner = _candidate_from_diag(x_hp, diag_hp)
        deduped[idx][1] = winner
        results.append(RenormResult(
            order=order,
            scheme=config.scheme,
            omega0=winner.omega0,
            partial_sum=winner.partial_sum,
            corrections=tuple(d.value for d in diag_hp[2]),
            candidates=tuple(e[1] for e in deduped),
            search_interval=interval,
            frequency_extension=extension,
        ))
        previous = float(winner.omega0)
    return results


def optimize_omega0(potential: PotentialSpec, state: QuantumState, order: int,
                    config: RenormConfig | None = None, *,
                    scalar: ScalarConfig = ScalarConfig(),
                    warm_start: float | None = None) -> RenormResult:
    """Optimized trial frequency and partial sum at a single order."""
    return optimize_sequence(potential, state, [order], config,
                             scalar=scalar, warm_start=warm_start)[0]
