"""Cl(2,2) through quaternions with Lorentz-number coefficients.

Even elements live in ``H0 = {p0 + i p1 I + p2 J + i p3 K}`` and odd ones in
``H1 = {i q0 + q1 I + i q2 J + q3 K}``, all ``p_k, q_k`` in the Lorentz
numbers.  Only these two real-closed subspaces are ever needed, so the
products are stored as four small tables computed once from
``I^2 = J^2 = K^2 = -1``, ``IJ = K`` and ``i^2 = -1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import SIGMA, LorentzNum, as_lorentz
from .errors import NotHermitian, NotUnitSpinor

__all__ = [
    "Vec22",
    "H0Elem",
    "H1Elem",
    "Mat2A",
    "scalar22",
    "gamma",
    "gamma_square",
    "bilinear_H",
    "bilinear_H1",
    "spin_to_so",
    "A0",
    "A1",
    "vec_to_herm",
    "herm_to_vec",
    "herm_to_real",
    "real_to_herm",
    "random_unit_spinor",
    "METRIC22",
    "UNIT_TOL",
]

METRIC22 = np.diag([-1.0, 1.0, -1.0, 1.0])
UNIT_TOL = 1e-10


# -- basis tables ------------------------------------------------------------

# quaternion units 1, I, J, K as indices 0..3: _QUAT[k][l] = (sign, m)
_QUAT = [
    [(1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0)],
]
# power of i carried by each basis element
_EPS = {0: (0, 1, 0, 1), 1: (1, 0, 1, 0)}


def _table(left: int, right: int):
    out_kind = (left + right) % 2
    table = {}
    for k in range(4):
        for l in range(4):
            sign, m = _QUAT[k][l]
            power = _EPS[left][k] + _EPS[right][l] - _EPS[out_kind][m]
            if power % 2:
                raise AssertionError("basis product left the expected subspace")
            sign *= (-1) ** (power // 2)
            table[(k, l)] = (m, sign)
    return out_kind, table


_TABLES = {(a, b): _table(a, b) for a in (0, 1) for b in (0, 1)}


def _product(x: "_QuatA", y: "_QuatA"):
    kind, table = _TABLES[(x.KIND, y.KIND)]
    acc = [None] * 4
    for (k, l), (m, sign) in table.items():
        term = x.c[k] * y.c[l]
        term = term if sign > 0 else -term
        acc[m] = term if acc[m] is None else acc[m] + term
    return _KINDS[kind](*acc)


class _QuatA:
    """Shared behaviour of the two coefficient 4-tuples."""

    KIND = -1
    __slots__ = ("c",)

    def __init__(self, c0=0.0, c1=0.0, c2=0.0, c3=0.0):
        self.c = tuple(as_lorentz(x) for x in (c0, c1, c2, c3))

    def conj(self):
        """Quaternionic conjugate: negate the I, J, K parts."""
        c = self.c
        return type(self)(c[0], -c[1], -c[2], -c[3])

    def hat(self):
        return type(self)(*(x.hat() for x in self.c))

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(*(a + b for a, b in zip(self.c, other.c)))

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(*(a - b for a, b in zip(self.c, other.c)))

    def __neg__(self):
        return type(self)(*(-a for a in self.c))

    def __mul__(self, other):
        if isinstance(other, _QuatA):
            return _product(self, other)
        if isinstance(other, LorentzNum) or np.isscalar(other) or isinstance(other, np.ndarray):
            return type(self)(*(a * other for a in self.c))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, LorentzNum) or np.isscalar(other) or isinstance(other, np.ndarray):
            return type(self)(*(other * a for a in self.c))
        return NotImplemented

    def isclose(self, other, atol=1e-12) -> bool:
        return all(a.isclose(b, rtol=0.0, atol=atol) for a, b in zip(self.c, other.c))

    def __repr__(self):
        return f"{type(self).__name__}{self.c!r}"


class H0Elem(_QuatA):
    """``p0 1 + p1 (iI) + p2 J + p3 (iK)``."""

    KIND = 0

    p0 = property(lambda self: self.c[0])
    p1 = property(lambda self: self.c[1])
    p2 = property(lambda self: self.c[2])
    p3 = property(lambda self: self.c[3])

    @classmethod
    def one(cls) -> "H0Elem":
        return cls(1.0, 0.0, 0.0, 0.0)


class H1Elem(_QuatA):
    """``q0 (i1) + q1 I + q2 (iJ) + q3 K``."""

    KIND = 1

    q0 = property(lambda self: self.c[0])
    q1 = property(lambda self: self.c[1])
    q2 = property(lambda self: self.c[2])
    q3 = property(lambda self: self.c[3])


_KINDS = {0: H0Elem, 1: H1Elem}


# -- vectors -----------------------------------------------------------------

@dataclass(frozen=True)
class Vec22:
    x0: float
    x1: float
    x2: float
    x3: float

    @classmethod
    def of(cls, x) -> "Vec22":
        x = np.asarray(x, dtype=float)
        return cls(*(float(v) for v in x))

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3])

    def scalar(self, other: "Vec22") -> float:
        return scalar22(self.as_array(), other.as_array())


def scalar22(x, y):
    """``-x0 y0 + x1 y1 - x2 y2 + x3 y3`` over the last axis."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    return -x[..., 0] * y[..., 0] + x[..., 1] * y[..., 1] - x[..., 2] * y[..., 2] + x[..., 3] * y[..., 3]


def _coords(x):
    return x.as_array() if isinstance(x, Vec22) else np.asarray(x, float)


def gamma(x) -> H1Elem:
    """Upper-right block of the Clifford map: ``sigma i x0 1 + x1 I + i x2 J + x3 K``."""
    x = _coords(x)
    return H1Elem(SIGMA * x[0], x[1], x[2], x[3])


def gamma_square(x) -> tuple[H0Elem, H0Elem]:
    """Diagonal blocks of ``gamma(x)**2``: ``(q hat(q), hat(q) q)``."""
    q = gamma(x)
    return q * q.hat(), q.hat() * q


def _read_vec(q: H1Elem) -> np.ndarray:
    return np.array([float(q.q0.v), float(q.q1.u), float(q.q2.u), float(q.q3.u)])


# -- bilinear forms and the double cover --------------------------------------

def bilinear_H(p: H0Elem, p2: H0Elem) -> LorentzNum:
    """The symmetric form on H0 written in the basis ``(1, iI, J, iK)``."""
    return p.p0 * p2.p0 - p.p1 * p2.p1 + p.p2 * p2.p2 - p.p3 * p2.p3


def bilinear_H1(q: H1Elem, q2: H1Elem) -> LorentzNum:
    """The same form on H1, basis ``(i1, I, iJ, K)``."""
    return -(q.q0 * q2.q0) + q.q1 * q2.q1 - q.q2 * q2.q2 + q.q3 * q2.q3


def spin_to_so(p: H0Elem) -> np.ndarray:
    """Matrix of ``x -> p x hat(p)^{-1}`` acting on coordinates of R^{2,2}.

    For a unit spinor ``hat(p)^{-1} = hat(conj(p))``.
    """
    n = bilinear_H(p, p)
    if abs(float(n.u) - 1.0) > UNIT_TOL or abs(float(n.v)) > UNIT_TOL:
        raise NotUnitSpinor(f"H(p, p) = {n!r}, expected 1")
    right = p.conj().hat()
    cols = [_read_vec(p * gamma(e) * right) for e in np.eye(4)]
    return np.column_stack(cols)


def random_unit_spinor(rng: np.random.Generator, scale: float = 1.0) -> H0Elem:
    """A random element of Spin(2,2).

    Each split component of ``(p0, .., p3)`` is a real point on the quadric
    ``a0^2 - a1^2 + a2^2 - a3^2 = 1``.
    """
    parts = []
    for _ in range(2):
        while True:
            a = rng.normal(scale=scale, size=4)
            n = a[0] ** 2 - a[1] ** 2 + a[2] ** 2 - a[3] ** 2
            if n > 0.05:
                parts.append(a / np.sqrt(n))
                break
    plus, minus = parts
    return H0Elem(*(LorentzNum.from_split(plus[k], minus[k]) for k in range(4)))


# -- 2x2 matrices over the Lorentz numbers -------------------------------------

@dataclass(frozen=True)
class Mat2A:
    a: LorentzNum
    b: LorentzNum
    c: LorentzNum
    d: LorentzNum

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, as_lorentz(getattr(self, name)))

    @classmethod
    def identity(cls) -> "Mat2A":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_split(cls, plus: np.ndarray, minus: np.ndarray) -> "Mat2A":
        """From real ``(..., 2, 2)`` arrays holding the ``e+`` and ``e-`` parts."""
        plus, minus = np.asarray(plus, float), np.asarray(minus, float)
        e = [LorentzNum.from_split(plus[..., i, j], minus[..., i, j]) for i in range(2) for j in range(2)]
        return cls(*e)

    def split(self) -> tuple[np.ndarray, np.ndarray]:
        """Real ``(..., 2, 2)`` arrays of the ``e+`` and ``e-`` parts."""
        def stack(attr):
            e = [np.asarray(getattr(x, attr), float) for x in (self.a, self.b, self.c, self.d)]
            shape = np.broadcast_shapes(*(x.shape for x in e))
            e = [np.broadcast_to(x, shape) for x in e]
            return np.stack([np.stack(e[:2], -1), np.stack(e[2:], -1)], -2)

        return stack("plus"), stack("minus")

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def det(self) -> LorentzNum:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, o: "Mat2A") -> "Mat2A":
        return Mat2A(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    __mul__ = __matmul__

    def scale(self, k) -> "Mat2A":
        return Mat2A(*(x * k for x in self.entries()))

    def __neg__(self) -> "Mat2A":
        return self.scale(-1.0)

    def __add__(self, o: "Mat2A") -> "Mat2A":
        return Mat2A(*(x + y for x, y in zip(self.entries(), o.entries())))

    def __sub__(self, o: "Mat2A") -> "Mat2A":
        return Mat2A(*(x - y for x, y in zip(self.entries(), o.entries())))

    def star(self) -> "Mat2A":
        """Conjugate transpose, conjugation being ``hat``."""
        return Mat2A(self.a.hat(), self.c.hat(), self.b.hat(), self.d.hat())

    def transpose(self) -> "Mat2A":
        return Mat2A(self.a, self.c, self.b, self.d)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return self.isclose(self.star(), tol)

    def isclose(self, o: "Mat2A", atol: float = 1e-12) -> bool:
        return all(x.isclose(y, rtol=0.0, atol=atol) for x, y in zip(self.entries(), o.entries()))

    def max_abs_diff(self, o: "Mat2A") -> float:
        d = self - o
        return float(max(np.max(np.abs(x.u)) + np.max(np.abs(x.v)) for x in d.entries()))


def A0(p: H0Elem) -> Mat2A:
    """Algebra isomorphism from H0 onto 2x2 matrices over the Lorentz numbers."""
    p0, p1, p2, p3 = p.c
    return Mat2A(p0 - SIGMA * p1, p2 - SIGMA * p3, -p2 - SIGMA * p3, p0 + SIGMA * p1)


def A1(q: H1Elem) -> Mat2A:
    """Linear isomorphism from H1 onto 2x2 matrices over the Lorentz numbers."""
    q0, q1, q2, q3 = q.c
    return Mat2A(-q1 - SIGMA * q0, -q3 - SIGMA * q2, -q3 + SIGMA * q2, q1 - SIGMA * q0)


def vec_to_herm(x) -> Mat2A:
    """``A1(gamma(x))``: a Hermitian matrix with ``det = -<x, x>``."""
    x = _coords(x)
    x0, x1, x2, x3 = (x[..., k] for k in range(4))
    return Mat2A(
        LorentzNum(-x0 - x1, 0.0 * x0),
        LorentzNum(-x3, -x2),
        LorentzNum(-x3, x2),
        LorentzNum(x1 - x0, 0.0 * x0),
    )


def herm_to_vec(M: Mat2A, tol: float = 1e-9) -> np.ndarray:
    """Inverse of :func:`vec_to_herm`; coordinates on the last axis."""
    scale = max(1.0, max(float(np.max(np.abs(x.u))) + float(np.max(np.abs(x.v))) for x in M.entries()))
    if not M.is_hermitian(tol * scale):
        raise NotHermitian("matrix is not Hermitian")
    x0 = -0.5 * (M.a.u + M.d.u)
    x1 = 0.5 * (M.d.u - M.a.u)
    x2 = -0.5 * (M.b.v - M.c.v)
    x3 = -0.5 * (M.b.u + M.c.u)
    return np.stack(np.broadcast_arrays(x0, x1, x2, x3), axis=-1)


def herm_to_real(M: Mat2A) -> np.ndarray:
    """The real matrix ``C`` with ``M = e+ C + e- C^t``."""
    return M.split()[0]


def real_to_herm(C) -> Mat2A:
    C = np.asarray(C, float)
    return Mat2A.from_split(C, np.swapaxes(C, -1, -2))
