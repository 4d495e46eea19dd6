"""Hard-coded closed forms used as independent oracles for the engine.

Two families are provided: the first five corrections for the general
r**2 + r**4 + r**6 well at unit mass, and the first six corrections for
the quasi-exactly-solvable sextic family whose lowest l = 1 level is
known in closed form on a one-parameter surface.  Everything here is
plain algebra on the inputs, deliberately independent of the recursion
code it is used to test.
"""

from __future__ import annotations

import math
from fractions import Fraction

from anharm.model import QuantumState
from anharm.scalars import exact_sqrt


def _sqrt(value):
    """Exact square root for rationals when possible, float otherwise."""
    if isinstance(value, (int, Fraction)):
        root = exact_sqrt(Fraction(value))
        if root is not None:
            return root if isinstance(value, Fraction) else root
        return math.sqrt(float(value))
    return math.sqrt(value)


def low_order_corrections(omega, lam, mu, state: QuantumState) -> list:
    """Corrections E_1..E_5 for V = omega**2*r**2/2 + lam*r**4 + mu*r**6.

    Unit mass.  Output scalars follow the input types: rational inputs give
    rational corrections.
    """
    N = state.zeros
    L = state.centrifugal
    eta = N * (N + 1)
    w2 = omega * omega

    e1 = Fraction(1 + 2 * N, 2) * omega

    e2 = Fraction(3 - 2 * L + 6 * eta, 4) * lam / w2

    e3 = (
        Fraction(1 + 2 * N, 8)
        * ((-21 + 9 * L - 17 * eta) * lam * lam + (15 - 6 * L + 10 * eta) * w2 * mu)
        / (w2 * w2 * omega)
    )

    e4 = (
        Fraction(1, 16)
        * (
            (333 + 11 * L * L - 3 * L * (67 + 86 * eta) + 3 * eta * (347 + 125 * eta))
            * lam ** 3
            - 6
            * (60 + 3 * (-13 + L) * L + 175 * eta - 42 * L * eta + 55 * eta * eta)
            * w2 * lam * mu
        )
        / w2 ** 4
    )

    e5 = (
        -Fraction(1 + 2 * N, 128)
        * (
            (
                30885
                + 909 * L * L
                - 27 * L * (613 + 330 * eta)
                + eta * (49927 + 10689 * eta)
            )
            * lam ** 4
            - 4
            * (
                11220
                + 393 * L * L
                - 6 * L * (1011 + 475 * eta)
                + eta * (16342 + 3129 * eta)
            )
            * w2 * lam * lam * mu
            + 2
            * (3495 + 138 * L * L + 4538 * eta + 786 * eta * eta - 30 * L * (63 + 26 * eta))
            * w2 * w2 * mu * mu
        )
        / (w2 ** 5 * omega)
    )

    return [e1, e2, e3, e4, e5]


def quasi_exact_corrections(a, b, c) -> list:
    """Corrections E_1..E_6 of the n=0, l=1 level of a*r**2 + b*r**4/3 + c*r**6/9.

    Unit mass.  The square root of 2a is taken exactly when it is rational.
    """
    s = _sqrt(2 * a)
    a2 = a * a

    e1 = Fraction(5, 2) * s
    e2 = Fraction(35, 24) * b / a
    e3 = Fraction(35, 96) * (-5 * b * b + 6 * a * c) / (a2 * s)
    e4 = Fraction(35, 6912) * (475 * b ** 3 - 864 * a * b * c) / (a2 * a2)
    e5 = (
        -Fraction(35, 110592)
        * (27565 * b ** 4 - 67488 * a * b * b * c + 17688 * a2 * c * c)
        / (a2 * a2 * a * s)
    )
    e6 = (
        Fraction(35, 2654208)
        * (1451815 * b ** 5 - 4482360 * a * b ** 3 * c + 2489328 * a2 * b * c * c)
        / (a2 * a2 * a2 * a)
    )

    return [e1, e2, e3, e4, e5, e6]


def quasi_exact_level(a, c) -> tuple:
    """Coupling b and exact E for the solvable n=0, l=1 level of the sextic well.

    For V = a*r**2 + b*r**4/3 + c*r**6/9 the level is exact when
    b = sqrt(2c) * sqrt(2a + (7/3)*sqrt(2c)), where it equals
    (5/2) * sqrt(2a + (7/3)*sqrt(2c)).  Returns (b, energy).
    """
    s2c = _sqrt(2 * c)
    base = 2 * a + Fraction(7, 3) * s2c
    root = _sqrt(base)
    return s2c * root, Fraction(5, 2) * root
