"""Flat Lorentzian surfaces in the anti-de Sitter space H^{2,1} and in S^{1,2}.

A frame ``B`` with values in Sl_2 over the Lorentz numbers and

    B^{-1} dB = [[0, theta], [omega, 0]],   theta = f da,  omega = k da,

with ``f, k`` conformal, splits in null coordinates into two real ODEs,
``B1`` in ``s`` (driven by ``f+``, ``k+``) and ``B2`` in ``t`` (driven by
``f-``, ``k-``).  ``F = B B*`` then lies in H^{2,1} and
``F = B diag(-1, 1) B*`` in S^{1,2}.  The same split shows that every such
surface in H^{2,1} is the product of two curves in Sl_2(R).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .algebra import LorentzNum
from .clifford import Mat2A, herm_to_real, herm_to_vec, scalar22, vec_to_herm
from .errors import DegenerateImmersion, DetDrift, NotSplit
from .grid import GridField, GridSpec, diff
from .weierstrass import ConformalMap1D, Immersion22

__all__ = [
    "ConformalOneForm",
    "Mat2AField",
    "CurvePair",
    "FlatMetricShape",
    "integrate_frame",
    "ads_immersion",
    "s12_immersion",
    "flat_metric_shape",
    "frame_equation_residual",
    "product_curves_decompose",
    "ads_as_sl2",
    "DET_DRIFT_TOL",
    "DEGENERACY_TOL",
]

DET_DRIFT_TOL = 1e-6
DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class ConformalOneForm:
    """``f da`` for a conformal ``f = e+ f+(s) + e- f-(t)``."""

    coeff: ConformalMap1D

    @classmethod
    def constant(cls, c) -> "ConformalOneForm":
        return cls(ConformalMap1D.constant(c))

    def sample(self, spec: GridSpec) -> GridField:
        return self.coeff.sample(spec)

    def profile(self, which: str, axis: np.ndarray):
        """Callable of one real variable for the ``+`` or ``-`` part.

        Sampled profiles are interpolated with a cubic spline so that the
        ODE integrator can evaluate them between nodes.
        """
        prof = self.coeff.plus if which == "+" else self.coeff.minus
        if callable(prof):
            return lambda x: float(np.asarray(prof(np.asarray(x, float)), float))
        arr = np.asarray(prof, dtype=float)
        if arr.ndim == 0:
            c = float(arr)
            return lambda x: c
        if arr.shape != axis.shape:
            raise ValueError(f"sampled profile has {arr.shape} values, axis has {axis.shape}")
        spline = CubicSpline(axis, arr)
        return lambda x: float(spline(x))

    def closedness_defect(self, spec: GridSpec) -> float:
        """``max |d(f da)|`` by finite differences; zero for conformal ``f``."""
        f = self.sample(spec).values
        P = LorentzNum.from_split(f.plus, 0.0 * f.plus)
        Q = LorentzNum.from_split(0.0 * f.minus, f.minus)
        out = 0.0
        for comp in ("u", "v"):
            curl = diff(getattr(Q, comp), spec.hs, 0) - diff(getattr(P, comp), spec.ht, 1)
            out = max(out, float(np.max(np.abs(curl))))
        return out


@dataclass(frozen=True)
class Mat2AField:
    """A 2x2 matrix over the Lorentz numbers at every grid node.

    ``frames`` holds ``(Ns, Nt)`` arrays in its four entries.  ``theta`` and
    ``omega`` are kept when the field came from :func:`integrate_frame`.
    """

    spec: GridSpec
    frames: Mat2A
    theta: ConformalOneForm | None = None
    omega: ConformalOneForm | None = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    def split(self) -> tuple[np.ndarray, np.ndarray]:
        """``(Ns, Nt, 2, 2)`` arrays of the ``e+`` and ``e-`` parts."""
        plus, minus = self.frames.split()
        shape = self.spec.shape + (2, 2)
        return np.broadcast_to(plus, shape), np.broadcast_to(minus, shape)

    def det(self) -> LorentzNum:
        return self.frames.det()

    def det_defect(self) -> float:
        d = self.det()
        return float(max(np.max(np.abs(d.plus - 1.0)), np.max(np.abs(d.minus - 1.0))))

    @classmethod
    def from_split(cls, spec: GridSpec, plus, minus, **kw) -> "Mat2AField":
        return cls(spec, Mat2A.from_split(plus, minus), **kw)


def _rk4_frame(B0: np.ndarray, top, bottom, x: np.ndarray, substeps: int):
    """Integrate ``dB/dx = B [[0, top(x)], [bottom(x), 0]]`` on the nodes ``x``."""

    def rhs(B, xx):
        return B @ np.array([[0.0, top(xx)], [bottom(xx), 0.0]])

    out = np.empty((len(x), 2, 2))
    B = np.array(B0, dtype=float)
    out[0] = B
    worst = 0.0
    for i in range(1, len(x)):
        xa, xb = x[i - 1], x[i]
        h = (xb - xa) / substeps
        for k in range(substeps):
            x0 = xa + k * h
            k1 = rhs(B, x0)
            k2 = rhs(B + 0.5 * h * k1, x0 + 0.5 * h)
            k3 = rhs(B + 0.5 * h * k2, x0 + 0.5 * h)
            k4 = rhs(B + h * k3, x0 + h)
            B = B + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            d = np.linalg.det(B)
            if d <= 0:
                raise DetDrift(f"frame determinant became {d:.3e}")
            corr = abs(np.sqrt(d) - 1.0)
            worst = max(worst, corr)
            if corr > DET_DRIFT_TOL:
                raise DetDrift(f"determinant correction {corr:.3e} exceeds {DET_DRIFT_TOL:.0e}")
            B = B / np.sqrt(d)
        out[i] = B
    return out, worst


def integrate_frame(
    theta: ConformalOneForm,
    omega: ConformalOneForm,
    B0: Mat2A | None = None,
    spec: GridSpec | None = None,
    *,
    substeps: int = 4,
) -> Mat2AField:
    """Solve ``B^{-1} dB = [[0, theta], [omega, 0]]`` with ``B = B0`` at the base corner."""
    if spec is None:
        raise ValueError("a GridSpec is required")
    B0 = Mat2A.identity() if B0 is None else B0
    d0 = B0.det()
    if abs(float(d0.u) - 1.0) > 1e-10 or abs(float(d0.v)) > 1e-10:
        raise ValueError(f"initial frame must have unit determinant, got {d0!r}")
    P0, M0 = B0.split()
    s, t = spec.s, spec.t
    B1, w1 = _rk4_frame(P0, theta.profile("+", s), omega.profile("+", s), s, substeps)
    B2, w2 = _rk4_frame(M0, theta.profile("-", t), omega.profile("-", t), t, substeps)
    shape = spec.shape + (2, 2)
    plus = np.broadcast_to(B1[:, None], shape)
    minus = np.broadcast_to(B2[None, :], shape)
    return Mat2AField.from_split(
        spec, plus, minus, theta=theta, omega=omega, diagnostics={"det_correction": max(w1, w2)}
    )


def _forms_or_fail(B: Mat2AField):
    if B.theta is None or B.omega is None:
        raise ValueError("frame field carries no (theta, omega); pass check=False to skip the test")
    return B.theta.sample(B.spec).values, B.omega.sample(B.spec).values


def _hermitian_product(B: Mat2AField, middle: np.ndarray) -> np.ndarray:
    """``B diag(middle) B*`` as R^{2,2} coordinates, via the real split parts.

    ``(B M B*)+ = B+ M (B-)^t`` and the ``-`` part is its transpose.
    """
    plus, minus = B.split()
    Cp = plus @ np.diag(middle) @ np.swapaxes(minus, -1, -2)
    M = Mat2A.from_split(Cp, np.swapaxes(Cp, -1, -2))
    return herm_to_vec(M)


def _immersion(B: Mat2AField, middle, target: float, gap, check: bool, label: str) -> Immersion22:
    diag = {}
    if gap is not None:
        mn = float(np.min(np.abs(gap)))
        diag["min_abs_gap"] = mn
        if check and mn <= DEGENERACY_TOL:
            raise DegenerateImmersion(f"{label}: degeneracy gap reaches {mn:.3e}")
    pts = _hermitian_product(B, middle)
    diag["membership_defect"] = float(np.max(np.abs(scalar22(pts, pts) - target)))
    return Immersion22(B.spec, pts, pts[0, 0].copy(), diag)


def ads_immersion(B: Mat2AField, *, check: bool = True) -> Immersion22:
    """``F = B B*`` in H^{2,1}; requires ``|theta|^2 != |omega|^2`` everywhere."""
    gap = None
    if check:
        f, k = _forms_or_fail(B)
        gap = f.sqnorm() - k.sqnorm()
    return _immersion(B, [1.0, 1.0], -1.0, gap, check, "|theta|^2 = |omega|^2")


def s12_immersion(B: Mat2AField, *, check: bool = True) -> Immersion22:
    """``F = B diag(-1, 1) B*`` in S^{1,2}.

    Rejects frames where ``|theta|^2 = -|omega|^2`` and also where
    ``|theta|^2 = |omega|^2``: the induced metric here is
    ``(theta - hat omega)(hat theta - omega)``, whose determinant vanishes
    exactly on the second set.
    """
    gap = None
    if check:
        f, k = _forms_or_fail(B)
        a = np.abs(f.sqnorm() + k.sqnorm())
        b = np.abs(f.sqnorm() - k.sqnorm())
        gap = np.minimum(a, b)
    return _immersion(B, [-1.0, 1.0], 1.0, gap, check, "|theta|^2 = -|omega|^2 or |theta|^2 = |omega|^2")


# -- metric and shape operator ------------------------------------------------

def _st_parts(A: LorentzNum, Bc: LorentzNum):
    """``A da + Bc d(hat a) = P ds + Q dt``."""
    return LorentzNum.from_split(A.plus, Bc.minus), LorentzNum.from_split(Bc.plus, A.minus)


@dataclass(frozen=True)
class FlatMetricShape:
    """Induced metric ``g_ss ds^2 + g_st ds dt + g_tt dt^2`` and the matrix 1-form ``S``.

    ``S = S_s ds + S_t dt`` with ``S_s, S_t`` Hermitian matrix fields; when a
    frame is supplied they are ``B [[0, theta - hat(omega)], [-omega + hat(theta), 0]] B*``.
    """

    g_ss: np.ndarray
    g_st: np.ndarray
    g_tt: np.ndarray
    S_s: Mat2A | None
    S_t: Mat2A | None

    def determinant(self) -> np.ndarray:
        return self.g_ss * self.g_tt - 0.25 * self.g_st**2


def flat_metric_shape(
    theta: ConformalOneForm,
    omega: ConformalOneForm,
    spec: GridSpec,
    B: Mat2AField | None = None,
    target: str = "ads",
) -> FlatMetricShape:
    """Closed-form metric (and, given the frame, the matrix 1-form ``S``).

    For ``target="ads"`` the metric is ``(theta + hat omega)(omega + hat theta)``.
    For ``target="s12"`` it is ``(theta - hat omega)(hat theta - omega)``,
    i.e. the same expression with ``omega`` replaced by ``-omega``.
    ``S`` is the differential of the S^{1,2} map and the unit normal field of
    the H^{2,1} surface.
    """
    if target not in ("ads", "s12"):
        raise ValueError(f"unknown target {target!r}")
    f = theta.sample(spec).values
    k = omega.sample(spec).values
    if target == "s12":
        P1, Q1 = _st_parts(f, -k.hat())
        P2, Q2 = _st_parts(-k, f.hat())
        return _assemble_metric_shape(P1, Q1, P2, Q2, f, k, spec, B)
    P1, Q1 = _st_parts(f, k.hat())  # theta + hat(omega)
    P2, Q2 = _st_parts(k, f.hat())  # omega + hat(theta)
    return _assemble_metric_shape(P1, Q1, P2, Q2, f, k, spec, B)


def _assemble_metric_shape(P1, Q1, P2, Q2, f, k, spec, B) -> FlatMetricShape:
    g_ss = P1 * P2
    g_st = P1 * Q2 + Q1 * P2
    g_tt = Q1 * Q2
    S_s = S_t = None
    if B is not None:
        Pa, Qa = _st_parts(f, -k.hat())  # theta - hat(omega)
        Pb, Qb = _st_parts(-k, f.hat())  # -omega + hat(theta)
        zero = LorentzNum.zeros(spec.shape)
        Bm, Bs = B.frames, B.frames.star()
        S_s = Bm @ Mat2A(zero, Pa, Pb, zero) @ Bs
        S_t = Bm @ Mat2A(zero, Qa, Qb, zero) @ Bs
    return FlatMetricShape(
        np.asarray(g_ss.u, float),
        np.asarray(g_st.u, float),
        np.asarray(g_tt.u, float),
        S_s,
        S_t,
    )


def frame_equation_residual(B: Mat2AField, interior: bool = True) -> float:
    """``max |B^{-1} dB - [[0, theta], [omega, 0]]|`` by central differences."""
    f, k = _forms_or_fail(B)
    sp = B.spec
    plus, minus = B.split()
    # B^{-1} for unit determinant: adjugate
    def inv(M):
        out = np.empty_like(M)
        out[..., 0, 0], out[..., 1, 1] = M[..., 1, 1], M[..., 0, 0]
        out[..., 0, 1], out[..., 1, 0] = -M[..., 0, 1], -M[..., 1, 0]
        return out / np.linalg.det(M)[..., None, None]

    worst = 0.0
    zeros = np.zeros(sp.shape)
    # ds-part of the plus component, dt-part of the minus component; the
    # other two parts must vanish
    expect = {
        ("+", 0): (f.plus, k.plus),
        ("+", 1): (zeros, zeros),
        ("-", 0): (zeros, zeros),
        ("-", 1): (f.minus, k.minus),
    }
    for comp, M in (("+", plus), ("-", minus)):
        Mi = inv(M)
        for axis, h in ((0, sp.hs), (1, sp.ht)):
            R = Mi @ diff(M, h, axis)
            top, bottom = expect[(comp, axis)]
            err = np.abs(R - np.stack([np.stack([zeros, top], -1), np.stack([bottom, zeros], -1)], -2))
            if interior:
                err = err[1:-1, 1:-1]
            worst = max(worst, float(np.max(err)))
    return worst


# -- product of two curves -----------------------------------------------------

@dataclass(frozen=True)
class CurvePair:
    """``B1(s)`` and ``B2(t)`` as ``(N, 2, 2)`` real arrays of unit determinant."""

    s: np.ndarray
    t: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    reconstruction_error: float = 0.0

    def frames(self, spec: GridSpec) -> Mat2AField:
        shape = spec.shape + (2, 2)
        return Mat2AField.from_split(
            spec, np.broadcast_to(self.B1[:, None], shape), np.broadcast_to(self.B2[None, :], shape)
        )

    def sl2_immersion(self) -> np.ndarray:
        """``B1(s) B2(t)^t``: the anti-de Sitter surface read in Sl_2(R)."""
        return self.B1[:, None] @ np.swapaxes(self.B2, -1, -2)[None, :]


def product_curves_decompose(B: Mat2AField, tol: float = 1e-8) -> CurvePair:
    plus, minus = B.split()
    scale = max(1.0, float(np.max(np.abs(plus))), float(np.max(np.abs(minus))))
    drift_plus = float(np.max(np.abs(plus - plus[:, :1])))
    drift_minus = float(np.max(np.abs(minus - minus[:1, :])))
    if drift_plus > tol * scale:
        raise NotSplit(f"e+ part of the frame varies along t by {drift_plus:.3e}")
    if drift_minus > tol * scale:
        raise NotSplit(f"e- part of the frame varies along s by {drift_minus:.3e}")
    B1 = np.array(plus[:, 0])
    B2 = np.array(minus[0, :])
    for name, C in (("B1", B1), ("B2", B2)):
        d = np.linalg.det(C)
        if np.max(np.abs(d - 1.0)) > tol:
            raise NotSplit(f"{name} leaves Sl_2(R): det deviates by {np.max(np.abs(d - 1.0)):.3e}")
    pair = CurvePair(B.spec.s, B.spec.t, B1, B2)
    rec = pair.frames(B.spec).split()
    err = max(float(np.max(np.abs(rec[0] - plus))), float(np.max(np.abs(rec[1] - minus))))
    return CurvePair(pair.s, pair.t, B1, B2, err)


def ads_as_sl2(F: Immersion22) -> np.ndarray:
    """Read H^{2,1} points as real 2x2 matrices ``C`` (``BB* = e+ C + e- C^t``)."""
    return herm_to_real(vec_to_herm(F.points))
