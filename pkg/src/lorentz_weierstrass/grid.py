"""Rectangular grids in null (characteristic) coordinates and sampled fields.

A point of the parameter domain is ``a = e+ * s + e- * t``, i.e.
``u = (s + t) / 2`` and ``v = (s - t) / 2``.  Arrays are indexed ``[i, j]``
with ``i`` along ``s`` and ``j`` along ``t``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import LorentzNum
from .errors import GridTooSmall

__all__ = [
    "GridSpec",
    "GridField",
    "ConformalityReport",
    "diff",
    "diff2",
    "d_a",
    "d_ahat",
    "d_u",
    "d_v",
    "is_conformal_samples",
]


@dataclass(frozen=True)
class GridSpec:
    s0: float
    s1: float
    t0: float
    t1: float
    Ns: int
    Nt: int

    def __post_init__(self):
        if self.Ns < 3 or self.Nt < 3:
            raise GridTooSmall(f"need at least 3 samples per axis, got {self.Ns}x{self.Nt}")
        if not (self.s1 > self.s0 and self.t1 > self.t0):
            raise ValueError("grid rectangle must have s1 > s0 and t1 > t0")

    @classmethod
    def square(cls, lo: float, hi: float, n: int) -> "GridSpec":
        return cls(lo, hi, lo, hi, n, n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.Ns, self.Nt)

    @property
    def hs(self) -> float:
        return (self.s1 - self.s0) / (self.Ns - 1)

    @property
    def ht(self) -> float:
        return (self.t1 - self.t0) / (self.Nt - 1)

    @property
    def h(self) -> float:
        return max(self.hs, self.ht)

    @property
    def s(self) -> np.ndarray:
        return np.linspace(self.s0, self.s1, self.Ns)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.Nt)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """``(S, T)`` coordinate arrays of shape ``(Ns, Nt)``."""
        return np.meshgrid(self.s, self.t, indexing="ij")

    def uv(self) -> tuple[np.ndarray, np.ndarray]:
        S, T = self.mesh()
        return 0.5 * (S + T), 0.5 * (S - T)

    def a(self) -> LorentzNum:
        """The coordinate ``a = u + sigma*v`` sampled on the grid."""
        S, T = self.mesh()
        return LorentzNum.from_split(S, T)

    def refine(self, levels: int = 1) -> "GridSpec":
        """Dyadic refinement: every old node stays a node."""
        Ns, Nt = self.Ns, self.Nt
        for _ in range(levels):
            Ns, Nt = 2 * Ns - 1, 2 * Nt - 1
        return GridSpec(self.s0, self.s1, self.t0, self.t1, Ns, Nt)


@dataclass(frozen=True)
class GridField:
    """A Lorentz-valued function sampled on a :class:`GridSpec`."""

    spec: GridSpec
    values: LorentzNum

    def __post_init__(self):
        if np.shape(self.values.u) != self.spec.shape or np.shape(self.values.v) != self.spec.shape:
            raise ValueError(
                f"field shape {np.shape(self.values.u)} does not match grid {self.spec.shape}"
            )

    @classmethod
    def from_function(cls, spec: GridSpec, f: Callable[[LorentzNum], LorentzNum]) -> "GridField":
        vals = f(spec.a())
        if not isinstance(vals, LorentzNum):
            vals = LorentzNum(vals, 0.0)
        u = np.broadcast_to(np.asarray(vals.u, dtype=float), spec.shape).copy()
        v = np.broadcast_to(np.asarray(vals.v, dtype=float), spec.shape).copy()
        return cls(spec, LorentzNum(u, v))

    @classmethod
    def constant(cls, spec: GridSpec, c) -> "GridField":
        return cls.from_function(spec, lambda a: a * 0.0 + c)

    @classmethod
    def real(cls, spec: GridSpec, arr) -> "GridField":
        arr = np.broadcast_to(np.asarray(arr, dtype=float), spec.shape).copy()
        return cls(spec, LorentzNum(arr, np.zeros(spec.shape)))

    def hat(self) -> "GridField":
        return GridField(self.spec, self.values.hat())

    def map(self, fn) -> "GridField":
        return GridField(self.spec, fn(self.values))

    def __add__(self, other: "GridField") -> "GridField":
        return GridField(self.spec, self.values + other.values)

    def __sub__(self, other: "GridField") -> "GridField":
        return GridField(self.spec, self.values - other.values)

    def __mul__(self, other) -> "GridField":
        if isinstance(other, GridField):
            other = other.values
        return GridField(self.spec, self.values * other)

    __rmul__ = __mul__

    def __neg__(self) -> "GridField":
        return GridField(self.spec, -self.values)


# -- finite differences ------------------------------------------------------

def diff(arr: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Central first difference, second-order one-sided at the edges."""
    if arr.shape[axis] < 3:
        raise GridTooSmall("finite differences need at least 3 samples")
    return np.gradient(arr, h, axis=axis, edge_order=2)


def diff2(arr: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Three-point second difference; four-point one-sided stencil at the edges."""
    a = np.moveaxis(np.asarray(arr, dtype=float), axis, 0)
    n = a.shape[0]
    if n < 4:
        raise GridTooSmall("second differences need at least 4 samples")
    out = np.empty_like(a)
    out[1:-1] = (a[2:] - 2.0 * a[1:-1] + a[:-2]) / h**2
    out[0] = (2.0 * a[0] - 5.0 * a[1] + 4.0 * a[2] - a[3]) / h**2
    out[-1] = (2.0 * a[-1] - 5.0 * a[-2] + 4.0 * a[-3] - a[-4]) / h**2
    return np.moveaxis(out, 0, axis)


def _check(f: GridField):
    if f.spec.Ns < 3 or f.spec.Nt < 3:
        raise GridTooSmall("need at least 3 samples per axis")


def d_a(f: GridField) -> GridField:
    """``d/da = e+ d/ds + e- d/dt``."""
    _check(f)
    sp = f.spec
    plus = diff(f.values.plus, sp.hs, 0)
    minus = diff(f.values.minus, sp.ht, 1)
    return GridField(sp, LorentzNum.from_split(plus, minus))


def d_ahat(f: GridField) -> GridField:
    """``d/d(hat a) = e+ d/dt + e- d/ds``."""
    _check(f)
    sp = f.spec
    plus = diff(f.values.plus, sp.ht, 1)
    minus = diff(f.values.minus, sp.hs, 0)
    return GridField(sp, LorentzNum.from_split(plus, minus))


def d_u(arr: np.ndarray, spec: GridSpec) -> np.ndarray:
    """``d/du = d/ds + d/dt`` of a real grid array (trailing axes allowed)."""
    return diff(arr, spec.hs, 0) + diff(arr, spec.ht, 1)


def d_v(arr: np.ndarray, spec: GridSpec) -> np.ndarray:
    """``d/dv = d/ds - d/dt`` of a real grid array."""
    return diff(arr, spec.hs, 0) - diff(arr, spec.ht, 1)


def sup_norm(x: LorentzNum, interior: bool = False) -> float:
    """Largest absolute split component; optionally skipping the boundary ring."""
    p, m = np.asarray(x.plus), np.asarray(x.minus)
    if interior:
        p, m = p[1:-1, 1:-1], m[1:-1, 1:-1]
    if p.size == 0:
        return 0.0
    return float(max(np.max(np.abs(p)), np.max(np.abs(m))))


@dataclass(frozen=True)
class ConformalityReport:
    residual: float
    tol: float

    @property
    def conformal(self) -> bool:
        return self.residual < self.tol

    def __bool__(self):
        return self.conformal


def is_conformal_samples(f: GridField, tol: float) -> ConformalityReport:
    """Sampled conformality test ``d_v f = sigma d_u f``.

    The reported residual is ``max |d f / d(hat a)|`` over split components;
    ``d_v f - sigma d_u f = -2 sigma d f/d(hat a)`` so this is half the
    Cauchy-Riemann-type defect.
    """
    r = d_ahat(f)
    return ConformalityReport(sup_norm(r.values), tol)
