"""Spinor data of a Lorentz surface in R^{2,2} and its Dirac system.

The system is

    d phi_alpha / da       = -p psi_alpha
    d psi_alpha / d(hat a) = -q phi_alpha,      alpha = 1, 2,

with ``p, q`` real.  In null coordinates it splits into two real Goursat
problems per alpha:

    (+)  d_s phi+ = -p psi+,   d_t psi+ = -q phi+
    (-)  d_t phi- = -p psi-,   d_s psi- = -q phi-

so ``phi+`` needs data on the line ``s = s0``, ``psi+`` on ``t = t0`` and the
other way round for the ``-`` component.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import LorentzNum
from .errors import InconsistentInitialData
from .grid import GridField, GridSpec, d_a, d_ahat, sup_norm

__all__ = [
    "DiracData",
    "CharacteristicData",
    "DiracResidual",
    "dirac_residual",
    "solve_goursat",
    "nondegeneracy",
    "spinor_determinant",
    "NONDEGENERACY_TOL",
    "residual_tolerance",
]

NONDEGENERACY_TOL = 1e-8


def residual_tolerance(spec: GridSpec, scale: float = 1.0) -> float:
    """Default pass threshold for second-order residuals: ``10 h**2``."""
    return 10.0 * scale * spec.h**2


def _real_field(x, spec: GridSpec) -> np.ndarray:
    if isinstance(x, GridField):
        if np.any(np.asarray(x.values.v) != 0):
            raise ValueError("potential must be real valued")
        x = x.values.u
    return np.broadcast_to(np.asarray(x, dtype=float), spec.shape).copy()


@dataclass(frozen=True)
class DiracData:
    """Spinor components and real potentials ``p, q`` on a common grid."""

    phi1: GridField
    phi2: GridField
    psi1: GridField
    psi2: GridField
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        sp = self.spec
        for f in (self.phi2, self.psi1, self.psi2):
            if f.spec != sp:
                raise ValueError("all spinor fields must share one grid")
        object.__setattr__(self, "p", _real_field(self.p, sp))
        object.__setattr__(self, "q", _real_field(self.q, sp))

    @property
    def spec(self) -> GridSpec:
        return self.phi1.spec

    @classmethod
    def from_functions(cls, spec: GridSpec, phi1, phi2, psi1, psi2, p=0.0, q=0.0) -> "DiracData":
        """Sample Lorentz-valued callables of ``a`` (and real p, q arrays or scalars)."""
        fields = [GridField.from_function(spec, f) for f in (phi1, phi2, psi1, psi2)]
        return cls(*fields, p=p, q=q)


@dataclass(frozen=True)
class CharacteristicData:
    """Goursat data: the spinor fields restricted to the two lines through the base corner.

    ``*_s0`` arrays run along ``t`` on the line ``s = s0`` (length ``Nt``);
    ``*_t0`` arrays run along ``s`` on the line ``t = t0`` (length ``Ns``).
    Index ``[0]`` of both is the corner, where the two must agree.  Only
    the components the system actually needs are read from each line:
    ``phi+`` and ``psi-`` from ``s = s0``, ``phi-`` and ``psi+`` from ``t = t0``.
    """

    spec: GridSpec
    phi_s0: tuple[LorentzNum, LorentzNum]
    phi_t0: tuple[LorentzNum, LorentzNum]
    psi_s0: tuple[LorentzNum, LorentzNum]
    psi_t0: tuple[LorentzNum, LorentzNum]
    corner_tol: float = 1e-12

    def __post_init__(self):
        sp = self.spec
        for name in ("phi_s0", "psi_s0"):
            for f in getattr(self, name):
                if np.shape(f.u) != (sp.Nt,):
                    raise InconsistentInitialData(f"{name} profile must have length Nt={sp.Nt}")
        for name in ("phi_t0", "psi_t0"):
            for f in getattr(self, name):
                if np.shape(f.u) != (sp.Ns,):
                    raise InconsistentInitialData(f"{name} profile must have length Ns={sp.Ns}")
        for label, a_line, b_line in (("phi", self.phi_s0, self.phi_t0), ("psi", self.psi_s0, self.psi_t0)):
            for alpha in range(2):
                a0, b0 = a_line[alpha][0], b_line[alpha][0]
                if abs(a0.u - b0.u) > self.corner_tol or abs(a0.v - b0.v) > self.corner_tol:
                    raise InconsistentInitialData(
                        f"{label}{alpha + 1} differs at the corner: {a0!r} vs {b0!r}"
                    )

    @classmethod
    def from_functions(
        cls,
        spec: GridSpec,
        phi1: Callable,
        phi2: Callable,
        psi1: Callable,
        psi2: Callable,
    ) -> "CharacteristicData":
        """Evaluate Lorentz-valued callables of ``a`` on both characteristic lines."""
        s, t = spec.s, spec.t
        on_s0 = LorentzNum.from_split(np.full_like(t, spec.s0), t)
        on_t0 = LorentzNum.from_split(s, np.full_like(s, spec.t0))

        def line(f, a, n):
            val = f(a)
            if not isinstance(val, LorentzNum):
                val = LorentzNum(val, 0.0)
            return LorentzNum(
                np.broadcast_to(np.asarray(val.u, float), (n,)).copy(),
                np.broadcast_to(np.asarray(val.v, float), (n,)).copy(),
            )

        return cls(
            spec,
            phi_s0=(line(phi1, on_s0, spec.Nt), line(phi2, on_s0, spec.Nt)),
            phi_t0=(line(phi1, on_t0, spec.Ns), line(phi2, on_t0, spec.Ns)),
            psi_s0=(line(psi1, on_s0, spec.Nt), line(psi2, on_s0, spec.Nt)),
            psi_t0=(line(psi1, on_t0, spec.Ns), line(psi2, on_t0, spec.Ns)),
        )


def _march(phi_line, psi_line, p, q, h1, h2):
    """Solve ``d_1 phi = -p psi``, ``d_2 psi = -q phi`` on an ``(N1, N2)`` grid.

    ``phi_line`` is phi on ``x1 = 0`` (length N2), ``psi_line`` is psi on
    ``x2 = 0`` (length N1).  Implicit trapezoidal rule along each
    characteristic; the 2x2 update at every node is solved exactly.  Nodes
    on one anti-diagonal are independent and updated together.
    """
    N1, N2 = p.shape
    phi = np.empty((N1, N2))
    psi = np.empty((N1, N2))
    phi[0, :] = phi_line
    psi[:, 0] = psi_line
    # psi along x1 = 0 and phi along x2 = 0 are explicit quadratures
    for j in range(1, N2):
        psi[0, j] = psi[0, j - 1] - 0.5 * h2 * (q[0, j - 1] * phi[0, j - 1] + q[0, j] * phi[0, j])
    for i in range(1, N1):
        phi[i, 0] = phi[i - 1, 0] - 0.5 * h1 * (p[i - 1, 0] * psi[i - 1, 0] + p[i, 0] * psi[i, 0])
    for k in range(2, N1 + N2 - 1):
        i = np.arange(max(1, k - (N2 - 1)), min(N1 - 1, k - 1) + 1)
        j = k - i
        A = phi[i - 1, j] - 0.5 * h1 * p[i - 1, j] * psi[i - 1, j]
        B = psi[i, j - 1] - 0.5 * h2 * q[i, j - 1] * phi[i, j - 1]
        al = 0.5 * h1 * p[i, j]
        be = 0.5 * h2 * q[i, j]
        f = (A - al * B) / (1.0 - al * be)
        phi[i, j] = f
        psi[i, j] = B - be * f
    return phi, psi


def solve_goursat(p, q, init: CharacteristicData) -> DiracData:
    """Integrate the Dirac system from data on two characteristic lines."""
    sp = init.spec
    p = _real_field(p, sp)
    q = _real_field(q, sp)
    phis, psis = [], []
    for alpha in range(2):
        phi_p, psi_p = _march(
            init.phi_s0[alpha].plus, init.psi_t0[alpha].plus, p, q, sp.hs, sp.ht
        )
        # minus component: roles of s and t exchanged
        phi_m, psi_m = _march(
            init.phi_t0[alpha].minus, init.psi_s0[alpha].minus, p.T, q.T, sp.ht, sp.hs
        )
        phis.append(GridField(sp, LorentzNum.from_split(phi_p, phi_m.T)))
        psis.append(GridField(sp, LorentzNum.from_split(psi_p, psi_m.T)))
    return DiracData(phis[0], phis[1], psis[0], psis[1], p=p, q=q)


@dataclass(frozen=True)
class DiracResidual:
    r_phi: tuple[GridField, GridField]
    r_psi: tuple[GridField, GridField]
    max_norm: float

    def passes(self, tol: float) -> bool:
        return self.max_norm <= tol


def dirac_residual(D: DiracData) -> DiracResidual:
    """``d_a phi + p psi`` and ``d_ahat psi + q phi`` by finite differences.

    ``max_norm`` is the sup of all split components over the whole grid.
    """
    r_phi = tuple(d_a(phi) + psi * D.p for phi, psi in ((D.phi1, D.psi1), (D.phi2, D.psi2)))
    r_psi = tuple(d_ahat(psi) + phi * D.q for phi, psi in ((D.phi1, D.psi1), (D.phi2, D.psi2)))
    m = max(sup_norm(r.values) for r in r_phi + r_psi)
    return DiracResidual(r_phi, r_psi, m)


def spinor_determinant(D: DiracData) -> LorentzNum:
    """``psi2 phi1 - psi1 phi2`` pointwise."""
    return D.psi2.values * D.phi1.values - D.psi1.values * D.phi2.values


def nondegeneracy(D: DiracData, tol: float = NONDEGENERACY_TOL) -> tuple[float, bool]:
    """Minimum of ``|sqnorm(psi2 phi1 - psi1 phi2)|`` and whether it clears ``tol``."""
    m = float(np.min(np.abs(spinor_determinant(D).sqnorm())))
    return m, m > tol
