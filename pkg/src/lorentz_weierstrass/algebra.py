"""Lorentz (split-complex) numbers u + sigma*v with sigma**2 = 1.

Values may be Python floats or numpy arrays of a common shape; all
operations broadcast, so a single :class:`LorentzNum` can carry a whole
sampled field.  The idempotents ``e+ = (1+sigma)/2`` and ``e- = (1-sigma)/2``
diagonalise the algebra: in the split representation multiplication is
componentwise, which is what every solver in this package relies on.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

import numpy as np

from .errors import NullDivisor

__all__ = [
    "LorentzNum",
    "SplitRep",
    "SIGMA",
    "ONE",
    "ZERO",
    "E_PLUS",
    "E_MINUS",
    "mul",
    "inverse",
    "hyperbolic",
    "to_split",
    "from_split",
    "as_lorentz",
]


def _is_scalar_like(x) -> bool:
    return isinstance(x, (Real, np.ndarray, np.floating, np.integer))


class LorentzNum:
    """An element ``u + sigma*v`` of the Lorentz numbers.

    Instances are treated as immutable values.  ``u`` and ``v`` may be
    floats or same-shaped arrays.
    """

    __slots__ = ("u", "v")
    # make ndarray * LorentzNum dispatch to __rmul__
    __array_ufunc__ = None

    def __init__(self, u=0.0, v=0.0):
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def __setattr__(self, name, value):
        raise AttributeError("LorentzNum is immutable")

    def __reduce__(self):
        return (LorentzNum, (self.u, self.v))

    # -- construction helpers -------------------------------------------
    @classmethod
    def zeros(cls, shape) -> "LorentzNum":
        return cls(np.zeros(shape), np.zeros(shape))

    @classmethod
    def from_split(cls, plus, minus) -> "LorentzNum":
        return cls(0.5 * (plus + minus), 0.5 * (plus - minus))

    # -- views ----------------------------------------------------------
    @property
    def plus(self):
        """Coefficient of ``e+``, i.e. ``u + v``."""
        return self.u + self.v

    @property
    def minus(self):
        """Coefficient of ``e-``, i.e. ``u - v``."""
        return self.u - self.v

    @property
    def real(self):
        return self.u

    @property
    def imag(self):
        return self.v

    @property
    def shape(self):
        return np.shape(self.u)

    def __getitem__(self, idx) -> "LorentzNum":
        return LorentzNum(np.asarray(self.u)[idx], np.asarray(self.v)[idx])

    # -- algebra --------------------------------------------------------
    def hat(self) -> "LorentzNum":
        """The conjugate ``u - sigma*v``."""
        return LorentzNum(self.u, -self.v)

    def sqnorm(self):
        """``a * hat(a) = u**2 - v**2``; indefinite, zero on the null cone."""
        return self.u * self.u - self.v * self.v

    def inverse(self) -> "LorentzNum":
        n = self.sqnorm()
        if np.any(np.asarray(n) == 0):
            raise NullDivisor(f"{self!r} lies on the null cone")
        return LorentzNum(self.u / n, -self.v / n)

    def __add__(self, other):
        other = as_lorentz(other)
        if other is NotImplemented:
            return NotImplemented
        return LorentzNum(self.u + other.u, self.v + other.v)

    __radd__ = __add__

    def __sub__(self, other):
        other = as_lorentz(other)
        if other is NotImplemented:
            return NotImplemented
        return LorentzNum(self.u - other.u, self.v - other.v)

    def __rsub__(self, other):
        other = as_lorentz(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return LorentzNum(-self.u, -self.v)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if _is_scalar_like(other):
            return LorentzNum(self.u * other, self.v * other)
        if not isinstance(other, LorentzNum):
            return NotImplemented
        return LorentzNum(
            self.u * other.u + self.v * other.v,
            self.u * other.v + self.v * other.u,
        )

    def __rmul__(self, other):
        if _is_scalar_like(other):
            return LorentzNum(other * self.u, other * self.v)
        return NotImplemented

    def __truediv__(self, other):
        if _is_scalar_like(other):
            return LorentzNum(self.u / other, self.v / other)
        if not isinstance(other, LorentzNum):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = as_lorentz(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        # componentwise in the split representation
        return LorentzNum.from_split(self.plus**n, self.minus**n)

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        other = as_lorentz(other)
        if other is NotImplemented:
            return NotImplemented
        return bool(np.array_equal(self.u, other.u) and np.array_equal(self.v, other.v))

    __hash__ = None

    def isclose(self, other, rtol=1e-12, atol=0.0) -> bool:
        other = as_lorentz(other)
        return bool(
            np.allclose(self.u, other.u, rtol=rtol, atol=atol)
            and np.allclose(self.v, other.v, rtol=rtol, atol=atol)
        )

    def __repr__(self):
        if np.ndim(self.u) == 0:
            return f"LorentzNum({float(self.u)!r}, {float(self.v)!r})"
        return f"LorentzNum(<array shape={np.shape(self.u)}>)"


def as_lorentz(x):
    if isinstance(x, LorentzNum):
        return x
    if _is_scalar_like(x):
        return LorentzNum(x, 0.0 * x)
    return NotImplemented


SIGMA = LorentzNum(0.0, 1.0)
ONE = LorentzNum(1.0, 0.0)
ZERO = LorentzNum(0.0, 0.0)
E_PLUS = LorentzNum(0.5, 0.5)
E_MINUS = LorentzNum(0.5, -0.5)


@dataclass(frozen=True)
class SplitRep:
    """Coordinates of a Lorentz number in the idempotent basis (e+, e-)."""

    plus: float
    minus: float

    def __mul__(self, other: "SplitRep") -> "SplitRep":
        return SplitRep(self.plus * other.plus, self.minus * other.minus)

    def __add__(self, other: "SplitRep") -> "SplitRep":
        return SplitRep(self.plus + other.plus, self.minus + other.minus)


def to_split(a: LorentzNum) -> SplitRep:
    return SplitRep(a.plus, a.minus)


def from_split(r: SplitRep) -> LorentzNum:
    return LorentzNum.from_split(r.plus, r.minus)


def mul(a: LorentzNum, b: LorentzNum) -> LorentzNum:
    return a * b


def inverse(a: LorentzNum) -> LorentzNum:
    """``hat(a) / sqnorm(a)``; raises :class:`NullDivisor` on the null cone."""
    return a.inverse()


def hyperbolic(a: LorentzNum) -> tuple[LorentzNum, LorentzNum]:
    """Lorentz-valued ``(cosh(a), sinh(a))``, evaluated per split component."""
    a = as_lorentz(a)
    p, m = a.plus, a.minus
    return (
        LorentzNum.from_split(np.cosh(p), np.cosh(m)),
        LorentzNum.from_split(np.sinh(p), np.sinh(m)),
    )
