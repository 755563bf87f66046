"""Order-3 complex jets: a value and its first three complex derivatives.

Arithmetic propagates derivatives exactly (Leibniz rule for products, Faà di
Bruno for composition). All fields may be numpy arrays of equal shape, so a
whole grid of points is evaluated in one pass.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

ArrayLike = Union[complex, float, np.ndarray]


def _as_complex(value: ArrayLike) -> np.ndarray:
    return np.asarray(value, dtype=complex)


def _principal(value: ArrayLike) -> np.ndarray:
    # -0.0 imaginary parts on the negative axis would select the lower branch
    return _as_complex(value) + 0j


@dataclass(frozen=True)
class Jet3:
    d0: ArrayLike
    d1: ArrayLike = 0j
    d2: ArrayLike = 0j
    d3: ArrayLike = 0j

    @classmethod
    def constant(cls, value: ArrayLike) -> "Jet3":
        return cls(_as_complex(value), 0j, 0j, 0j)

    @classmethod
    def variable(cls, z: ArrayLike) -> "Jet3":
        """The identity jet (z, 1, 0, 0)."""
        return cls(_as_complex(z), 1 + 0j, 0j, 0j)

    @property
    def derivatives(self) -> tuple[ArrayLike, ArrayLike, ArrayLike, ArrayLike]:
        return self.d0, self.d1, self.d2, self.d3

    def is_finite(self) -> np.ndarray:
        """Pointwise flag: all four entries finite."""
        d0, d1, d2, d3 = np.broadcast_arrays(*[_as_complex(d) for d in self.derivatives])
        return np.isfinite(d0) & np.isfinite(d1) & np.isfinite(d2) & np.isfinite(d3)

    def squeeze(self) -> "Jet3":
        """Turn 0-d array entries into Python complex numbers."""
        return Jet3(*[_squeeze(d) for d in self.derivatives])

    def take(self, index) -> "Jet3":
        return Jet3(*[np.broadcast_to(_as_complex(d), np.shape(self.d0))[index] for d in self.derivatives])

    def compose(self, f0: ArrayLike, f1: ArrayLike, f2: ArrayLike, f3: ArrayLike) -> "Jet3":
        """Jet of φ∘self, given φ and its derivatives at self.d0."""
        a1, a2, a3 = self.d1, self.d2, self.d3
        return Jet3(
            f0,
            f1 * a1,
            f2 * a1 * a1 + f1 * a2,
            f3 * a1 * a1 * a1 + 3 * f2 * a1 * a2 + f1 * a3,
        )

    def reciprocal(self) -> "Jet3":
        x = _as_complex(self.d0)
        inv = 1 / x
        return self.compose(inv, -inv * inv, 2 * inv**3, -6 * inv**4)

    def __add__(self, other) -> "Jet3":
        other = _coerce(other)
        return Jet3(self.d0 + other.d0, self.d1 + other.d1, self.d2 + other.d2, self.d3 + other.d3)

    __radd__ = __add__

    def __neg__(self) -> "Jet3":
        return Jet3(-_as_complex(self.d0), -_as_complex(self.d1), -_as_complex(self.d2), -_as_complex(self.d3))

    def __sub__(self, other) -> "Jet3":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Jet3":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Jet3":
        other = _coerce(other)
        f0, f1, f2, f3 = self.derivatives
        g0, g1, g2, g3 = other.derivatives
        return Jet3(
            f0 * g0,
            f1 * g0 + f0 * g1,
            f2 * g0 + 2 * f1 * g1 + f0 * g2,
            f3 * g0 + 3 * f2 * g1 + 3 * f1 * g2 + f0 * g3,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet3":
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "Jet3":
        return _coerce(other) * self.reciprocal()

    def __pow__(self, exponent) -> "Jet3":
        return power(self, exponent)


def _squeeze(value: ArrayLike) -> ArrayLike:
    arr = np.asarray(value)
    return complex(arr) if arr.ndim == 0 else arr


def _coerce(value) -> Jet3:
    if isinstance(value, Jet3):
        return value
    return Jet3.constant(value)


def _is_integer(value: complex) -> bool:
    return value.imag == 0 and float(value.real).is_integer()


def _integer_power(jet: Jet3, n: int) -> Jet3:
    x = _as_complex(jet.d0)
    terms = []
    for k in range(4):
        coefficient = 1
        for j in range(k):
            coefficient *= n - j
        if coefficient == 0:
            terms.append(np.zeros_like(x))
        else:
            terms.append(coefficient * x ** (n - k))
    return jet.compose(*terms)


def power(jet: Jet3, exponent) -> Jet3:
    """Jet of jet**exponent on the principal branch.

    Integer constant exponents are exact (negative ones are singular at 0),
    other constants use x**p = exp(p log x), a jet exponent uses exp(b log a).
    """
    if isinstance(exponent, Jet3):
        return exp(exponent * log(jet))
    p = complex(exponent)
    if _is_integer(p):
        return _integer_power(jet, int(p.real))
    x = _principal(jet.d0)
    logx = np.log(x)
    return jet.compose(
        np.exp(p * logx),
        p * np.exp((p - 1) * logx),
        p * (p - 1) * np.exp((p - 2) * logx),
        p * (p - 1) * (p - 2) * np.exp((p - 3) * logx),
    )


def exp(jet: Jet3) -> Jet3:
    e = np.exp(_as_complex(jet.d0))
    return jet.compose(e, e, e, e)


def log(jet: Jet3) -> Jet3:
    x = _principal(jet.d0)
    inv = 1 / x
    return jet.compose(np.log(x), inv, -inv * inv, 2 * inv**3)


def sqrt(jet: Jet3) -> Jet3:
    x = _principal(jet.d0)
    s = np.sqrt(x)
    return jet.compose(s, 1 / (2 * s), -1 / (4 * s * x), 3 / (8 * s * x * x))


def sin(jet: Jet3) -> Jet3:
    x = _as_complex(jet.d0)
    s, c = np.sin(x), np.cos(x)
    return jet.compose(s, c, -s, -c)


def cos(jet: Jet3) -> Jet3:
    x = _as_complex(jet.d0)
    s, c = np.sin(x), np.cos(x)
    return jet.compose(c, -s, -c, s)


def tan(jet: Jet3) -> Jet3:
    t = np.tan(_as_complex(jet.d0))
    sec2 = 1 + t * t
    return jet.compose(t, sec2, 2 * t * sec2, sec2 * (2 + 6 * t * t))


def sinh(jet: Jet3) -> Jet3:
    x = _as_complex(jet.d0)
    s, c = np.sinh(x), np.cosh(x)
    return jet.compose(s, c, s, c)


def cosh(jet: Jet3) -> Jet3:
    x = _as_complex(jet.d0)
    s, c = np.sinh(x), np.cosh(x)
    return jet.compose(c, s, c, s)


FUNCTIONS = {
    "exp": exp,
    "log": log,
    "sqrt": sqrt,
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "sinh": sinh,
    "cosh": cosh,
}

MULTIVALUED = frozenset({"log", "sqrt"})
