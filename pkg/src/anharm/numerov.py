"""Radial Schrodinger eigenvalues by Numerov shooting.

Solves u'' = f u with f = l(l+1)/r^2 + 2m(V - E) on a uniform grid.
Outward integration starts from the r^(l+1) power behavior at the origin,
inward integration from exponential decay at r_max.  The n-th level is
isolated by bisection on the interior node count of the outward solution,
then polished by secant iteration on the matching defect
W = u_out' u_in - u_out u_in' evaluated at the match point, which vanishes
exactly at eigenvalues.  Everything here runs in 64-bit floats; the grid
solver only needs to certify the series results to ~1e-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from anharm.errors import BracketError, ConfigError, ConvergenceError
from anharm.model import PotentialSpec, QuantumState

# Rescale the running pair whenever it exceeds this, so deep forbidden
# regions cannot overflow.  Positive factors preserve signs and ratios.
_BIG = 1e250
# Largest h^2 f / 12 tolerated anywhere on the grid.  Beyond g <= 0 the
# three-term scheme turns oscillatory and fabricates nodes.
_STIFFNESS_LIMIT = 0.5


@dataclass(frozen=True)
class GridConfig:
    """Uniform radial grid and energy bracket for the shooting solver."""

    r_max: float
    bracket: tuple[float, float]
    step: float | None = None  # default r_max / 20000
    match_fraction: float = 0.5
    tolerance: float = 1e-10

    def __post_init__(self):
        if not self.r_max > 0:
            raise ConfigError("r_max must be positive")
        step = self.step if self.step is not None else self.r_max / 20000.0
        if not 0 < step < self.r_max:
            raise ConfigError("step must satisfy 0 < step < r_max")
        object.__setattr__(self, "step", float(step))
        lo, hi = self.bracket
        if not lo < hi:
            raise ConfigError("energy bracket must satisfy E_lo < E_hi")
        object.__setattr__(self, "bracket", (float(lo), float(hi)))
        if not 0 < self.match_fraction < 1:
            raise ConfigError("match_fraction must lie in (0, 1)")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")

    @property
    def points(self) -> int:
        return int(round(self.r_max / self.step))


def _radii(grid: GridConfig) -> np.ndarray:
    return np.arange(grid.points + 1) * grid.step


def _f_base(potential: PotentialSpec, state: QuantumState, radii: np.ndarray):
    """l(l+1)/r^2 + 2 m V(r); the energy enters as a constant shift."""
    mass = float(potential.mass)
    base = 2.0 * mass * potential.evaluate(radii)
    if state.l > 0:
        with np.errstate(divide="ignore"):
            base = base + state.l * (state.l + 1) / (radii * radii)
    base[0] = 0.0  # never used; the recurrence starts two points in
    return base, mass


def _seed_values(potential: PotentialSpec, state: QuantumState, energy: float,
                 h: float) -> tuple[float, float]:
    """u at h and 2h from u ~ r^(l+1)(1 + c1 r^2 + c2 r^4)."""
    mass = float(potential.mass)
    omega = float(potential.omega)
    l = state.l
    c1 = -2.0 * mass * energy / (4 * l + 6)
    c2 = (mass * mass * omega * omega - 2.0 * mass * energy * c1) / (8 * l + 20)
    def u(r):
        return r ** (l + 1) * (1.0 + c1 * r * r + c2 * r ** 4)
    return u(h), u(2 * h)


def _check_stiffness(g: np.ndarray, state: QuantumState):
    # the centrifugal spike l(l+1)/r^2 at the first few points is covered
    # by the r^(l+1) series seeds, where u is vanishingly small; the guard
    # watches the outer region, where a coarse step fabricates oscillations
    first = max(1, math.ceil(math.sqrt(state.centrifugal
                                       / (6.0 * _STIFFNESS_LIMIT))))
    if first >= len(g) - 1:
        raise ConfigError("grid cannot resolve the centrifugal barrier; "
                          "decrease the step")
    worst = float(np.max(1.0 - g[first:]))
    if worst > _STIFFNESS_LIMIT:
        raise ConfigError(
            f"grid too coarse: h^2 f / 12 reaches {worst:.3g} inside the "
            "forbidden region; shrink r_max or the step")


def _outward(g: np.ndarray, seeds: tuple[float, float], stop: int,
             count_stop: int | None = None):
    """Integrate u'' = f u from the origin up to index `stop`.

    Returns (nodes in (0, r_stop_for_counting), last five values).  The
    running pair is rescaled against overflow; the returned window is
    internally consistent because rescaling is suppressed once inside it.
    """
    u_prev, u_curr = seeds
    nodes = 1 if (u_prev > 0) != (u_curr > 0) and u_prev != 0 else 0
    if count_stop is None:
        count_stop = stop
    window = [0.0] * 5
    if stop >= 1:
        window[-2], window[-1] = u_prev, u_curr
    for i in range(2, stop):
        u_next = ((12.0 - 10.0 * g[i]) * u_curr - g[i - 1] * u_prev) / g[i + 1]
        if i + 1 <= count_stop and (u_next > 0) != (u_curr > 0) and u_curr != 0:
            nodes += 1
        u_prev, u_curr = u_curr, u_next
        scale = abs(u_curr)
        if scale > _BIG and i + 1 < stop - 4:
            u_prev /= scale
            u_curr /= scale
        if i + 1 >= stop - 4:
            window.pop(0)
            window.append(u_curr)
    return nodes, window


def _inward(g: np.ndarray, kappa_h: float, start: int, stop: int):
    """Integrate from r_max down to index `stop`; return values at
    stop..stop+4 (same orientation as the outward window)."""
    u_next = 1e-20
    u_curr = u_next * math.exp(min(kappa_h, 300.0))
    window = [u_curr, u_next, 0.0, 0.0, 0.0]
    for i in range(start - 1, stop, -1):
        u_prev = ((12.0 - 10.0 * g[i]) * u_curr - g[i + 1] * u_next) / g[i - 1]
        u_next, u_curr = u_curr, u_prev
        scale = abs(u_curr)
        if scale > _BIG and i - 1 > stop + 4:
            u_next /= scale
            u_curr /= scale
        if i - 1 <= stop + 4:
            window.pop()
            window.insert(0, u_curr)
    return window


def count_nodes(potential: PotentialSpec, state: QuantumState, energy: float,
                grid: GridConfig) -> int:
    """Interior nodes of the outward solution at the given energy."""
    radii = _radii(grid)
    base, mass = _f_base(potential, state, radii)
    h = grid.step
    g = 1.0 - (h * h / 12.0) * (base - 2.0 * mass * energy)
    _check_stiffness(g, state)
    seeds = _seed_values(potential, state, energy, h)
    last = grid.points
    nodes, _ = _outward(g, seeds, last, count_stop=last - 1)
    return nodes


def _five_point_derivative(window, h):
    return (window[0] - 8.0 * window[1] + 8.0 * window[3] - window[4]) / (12.0 * h)


class _Shooter:
    """Caches the energy-independent pieces for one (potential, state, grid)."""

    def __init__(self, potential, state, grid):
        self.grid = grid
        self.radii = _radii(grid)
        self.base, self.mass = _f_base(potential, state, self.radii)
        self.potential = potential
        self.state = state
        self.h = grid.step
        self.match = int(round(grid.match_fraction * grid.points))
        if not 4 <= self.match <= grid.points - 4:
            raise ConfigError("match point too close to a grid edge")

    def _g(self, energy):
        g = 1.0 - (self.h * self.h / 12.0) * (self.base - 2.0 * self.mass * energy)
        _check_stiffness(g, self.state)
        return g

    def nodes(self, energy) -> int:
        g = self._g(energy)
        seeds = _seed_values(self.potential, self.state, energy, self.h)
        n, _ = _outward(g, seeds, self.grid.points,
                        count_stop=self.grid.points - 1)
        return n

    def defect(self, energy) -> float:
        """Scaled Wronskian of outward and inward solutions at the match
        point; zero exactly when the logarithmic derivatives agree."""
        g = self._g(energy)
        seeds = _seed_values(self.potential, self.state, energy, self.h)
        m = self.match
        _, w_out = _outward(g, seeds, m + 2)
        f_edge = (self.base[-1] - 2.0 * self.mass * energy)
        kappa_h = math.sqrt(max(f_edge, 0.0)) * self.h
        w_in = _inward(g, kappa_h, self.grid.points, m - 2)
        s_out = max(abs(v) for v in w_out) or 1.0
        s_in = max(abs(v) for v in w_in) or 1.0
        w_out = [v / s_out for v in w_out]
        w_in = [v / s_in for v in w_in]
        d_out = _five_point_derivative(w_out, self.h)
        d_in = _five_point_derivative(w_in, self.h)
        return d_out * w_in[2] - w_out[2] * d_in


def solve_eigenvalue(potential: PotentialSpec, state: QuantumState,
                     grid: GridConfig | None = None) -> float:
    """Energy of the n-th level in the l-channel by shooting.

    With grid=None a grid is sized automatically: bracket grown by node
    counting from a harmonic estimate, r_max at 1.5x the classical turning
    point clamped to [6, 50] and extended until V(r_max) >= 2 E_hi.
    """
    if grid is None:
        grid = auto_grid(potential, state)
    shooter = _Shooter(potential, state, grid)
    e_lo, e_hi = grid.bracket
    n_lo = shooter.nodes(e_lo)
    n_hi = shooter.nodes(e_hi)
    n = state.n
    if n_lo > n or n_hi <= n:
        raise BracketError(
            f"bracket [{e_lo:g}, {e_hi:g}] does not isolate the level with "
            f"{n} nodes: counts are {n_lo} and {n_hi}",
            nodes_low=n_lo, nodes_high=n_hi)

    # Bisection on the integer node count pins the transition n -> n+1.
    width_goal = max(64.0 * grid.tolerance, 1e-7 * max(1.0, abs(e_hi)))
    while e_hi - e_lo > width_goal:
        mid = 0.5 * (e_lo + e_hi)
        if shooter.nodes(mid) > n:
            e_hi = mid
        else:
            e_lo = mid

    # Secant on the matching defect, guarded by the sign bracket when one
    # exists.  The defect is smooth and simple-rooted this close in.
    a, b = e_lo, e_hi
    w_a, w_b = shooter.defect(a), shooter.defect(b)
    bracketed = (w_a > 0) != (w_b > 0)
    for _ in range(80):
        if w_b == w_a:
            x = 0.5 * (a + b)
        else:
            x = b - w_b * (b - a) / (w_b - w_a)
            if bracketed and not (min(a, b) < x < max(a, b)):
                x = 0.5 * (a + b)
        if abs(x - b) <= grid.tolerance:
            return x
        w_x = shooter.defect(x)
        if bracketed:
            if (w_x > 0) != (w_a > 0):
                b, w_b = x, w_x
            else:
                a, w_a = x, w_x
        else:
            a, w_a, b, w_b = b, w_b, x, w_x
    raise ConvergenceError(
        f"matching defect did not converge within [{e_lo:g}, {e_hi:g}]")


def _turning_radius(potential: PotentialSpec, energy: float) -> float:
    """Classical turning point estimate: smallest single-term radius."""
    mass = float(potential.mass)
    omega = float(potential.omega)
    candidates = []
    if omega > 0:
        candidates.append(math.sqrt(2.0 * energy / (mass * omega * omega)))
    for i, coeff in enumerate(potential.coefficients, start=1):
        c = float(coeff)
        if c > 0:
            candidates.append((energy / c) ** (1.0 / (2 * i + 2)))
    return min(candidates)


def _auto_r_max(potential: PotentialSpec, e_hi: float) -> float:
    r_max = min(max(1.5 * _turning_radius(potential, e_hi), 6.0), 50.0)
    while potential.evaluate(r_max) < 2.0 * e_hi:
        r_max *= 1.25
    return r_max


def auto_grid(potential: PotentialSpec, state: QuantumState, *,
              tolerance: float = 1e-10) -> GridConfig:
    """Grid sized from the potential's own scales, bracket grown by node
    counting until it encloses the requested level."""
    omega = float(potential.omega)
    scale = max(omega, potential.frequency_scale(), 1.0)
    big_n = 2 * state.n + state.l + 1
    e_hi = max((big_n + 0.5) * scale, 1.0)
    sample = np.linspace(0.0, _auto_r_max(potential, e_hi), 512)
    e_lo = min(0.0, float(np.min(potential.evaluate(sample))))

    for _ in range(60):
        grid = GridConfig(r_max=_auto_r_max(potential, e_hi),
                          bracket=(e_lo, e_hi), tolerance=tolerance)
        if count_nodes(potential, state, e_hi, grid) > state.n:
            return grid
        e_hi *= 2.0
    raise BracketError(
        f"could not find an upper energy enclosing the level with "
        f"{state.n} nodes (reached E_hi={e_hi:g})",
        nodes_low=0, nodes_high=state.n)
