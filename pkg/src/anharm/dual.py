"""Second-order dual numbers for exact first and second derivatives.

A Dual stores the truncated Taylor expansion a + b*eps + c*eps**2 with
eps**3 = 0.  Pushing Dual(x, 1, 0) through an algebraic computation yields
the value together with f'(x) = b and f''(x) = 2*c, with no truncation
error beyond that of the component arithmetic.  Components may be any
ring-like scalars: floats, Fractions, mpfr, or numpy arrays (elementwise).
"""

from __future__ import annotations


class Dual:
    """Truncated second-order Taylor number a + b*eps + c*eps**2."""

    __slots__ = ("a", "b", "c")

    def __init__(self, a, b=0, c=0):
        self.a = a
        self.b = b
        self.c = c

    @classmethod
    def seed(cls, x, one=1):
        """Independent variable: value x, unit first-order part."""
        return cls(x, one, 0)

    @property
    def value(self):
        return self.a

    @property
    def first(self):
        """First derivative with respect to the seeded variable."""
        return self.b

    @property
    def second(self):
        """Second derivative with respect to the seeded variable."""
        return 2 * self.c

    def __repr__(self):
        return f"Dual({self.a!r}, {self.b!r}, {self.c!r})"

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a + other.a, self.b + other.b, self.c + other.c)
        return Dual(self.a + other, self.b, self.c)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Dual):
            return Dual(self.a - other.a, self.b - other.b, self.c - other.c)
        return Dual(self.a - other, self.b, self.c)

    def __rsub__(self, other):
        return Dual(other - self.a, -self.b, -self.c)

    def __neg__(self):
        return Dual(-self.a, -self.b, -self.c)

    def __mul__(self, other):
        if isinstance(other, Dual):
            a, b, c = self.a, self.b, self.c
            oa, ob, oc = other.a, other.b, other.c
            return Dual(a * oa, a * ob + b * oa, a * oc + b * ob + c * oa)
        return Dual(self.a * other, self.b * other, self.c * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            q0 = self.a / other.a
            q1 = (self.b - q0 * other.b) / other.a
            q2 = (self.c - q0 * other.c - q1 * other.b) / other.a
            return Dual(q0, q1, q2)
        return Dual(self.a / other, self.b / other, self.c / other)

    def __rtruediv__(self, other):
        q0 = other / self.a
        q1 = (-q0 * self.b) / self.a
        q2 = (-q0 * self.c - q1 * self.b) / self.a
        return Dual(q0, q1, q2)

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = Dual(1, 0, 0)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result
