"""Reference values for the standard benchmark table.

The table covers V = r**2/2 + lam*(r**4 + r**6) at unit mass for two
couplings and three low-lying states, listing previously reported
renormalized partial sums S_N at orders N = 2..40 together with a
numerically exact eigenvalue for each column.  These are the comparison
baselines for the table command and the regression tests.
"""

from __future__ import annotations

from fractions import Fraction

TABLE_ORDERS = (2, 5, 10, 15, 20, 25, 30, 35, 40)

# (n, l, coupling) in printed column order; coupling keys are exact strings.
TABLE_COLUMNS = (
    (0, 0, "0.01"),
    (0, 0, "10"),
    (1, 0, "0.01"),
    (1, 0, "10"),
    (1, 1, "0.01"),
    (1, 1, "10"),
)

COUPLINGS = {"0.01": Fraction(1, 100), "10": Fraction(10)}

# Partial sums S_N, one tuple per column, aligned with TABLE_ORDERS.
REFERENCE_PARTIAL_SUMS = {
    (0, 0, "0.01"): (
        1.535791, 1.616383, 1.620603, 1.621682, 1.621688,
        1.621689, 1.621690, 1.621690, 1.621690,
    ),
    (0, 0, "10"): (
        5.382133, 6.042488, 6.097330, 6.125723, 6.126339,
        6.126361, 6.126367, 6.126369, 6.126370,
    ),
    (1, 0, "0.01"): (
        3.670797, 4.144668, 4.184985, 4.193532, 4.223470,
        4.223784, 4.223822, 4.223840, 4.223842,
    ),
    (1, 0, "10"): (
        15.99931, 18.75063, 19.07378, 19.15066, 19.57157,
        19.57557, 19.57838, 19.57880, 19.57928,
    ),
    (1, 1, "0.01"): (
        4.765971, 5.545735, 5.614234, 5.629195, 5.683960,
        5.684735, 5.685455, 5.685520, 5.685545,
    ),
    (1, 1, "10"): (
        22.01213, 26.18935, 26.67913, 26.79595, 26.84757,
        26.87657, 27.40164, 27.39683, 27.39740,
    ),
}

# Numerically exact eigenvalues reported alongside each column.
REFERENCE_NUMERIC = {
    (0, 0, "0.01"): 1.621690,
    (0, 0, "10"): 6.126371,
    (1, 0, "0.01"): 4.223843,
    (1, 0, "10"): 19.579390,
    (1, 1, "0.01"): 5.685575,
    (1, 1, "10"): 27.398120,
}
