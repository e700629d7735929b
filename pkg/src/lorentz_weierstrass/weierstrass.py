"""Weierstrass-type formulas for Lorentz surfaces in R^{2,2} and R^{2,1}.

Every immersion here is a path integral of Lorentz-valued 1-forms
``A da + B d(hat a)``.  With ``da = e+ ds + e- dt`` and
``d(hat a) = e+ dt + e- ds`` such a form becomes ``P ds + Q dt`` and is
integrated with the trapezoidal rule along grid lines, first along ``s`` on
the row ``t = t0`` and then along ``t``.  Integration constants are fixed
by the basepoint at the ``(s0, t0)`` corner.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .algebra import LorentzNum
from .dirac import (
    NONDEGENERACY_TOL,
    DiracData,
    dirac_residual,
    nondegeneracy,
    residual_tolerance,
    spinor_determinant,
)
from .errors import DegenerateMetric, NullChi1, PathDependence, ResidualTooLarge
from .grid import GridField, GridSpec, d_a, d_ahat, d_u, d_v, is_conformal_samples, sup_norm

__all__ = [
    "Immersion22",
    "ConformalMap1D",
    "MetricReport",
    "KonderakResult",
    "CriterionResult",
    "one_form_to_st",
    "integrate_one_form",
    "integrate_immersion",
    "immersion_forms",
    "path_independence_check",
    "metric_formula",
    "mean_curvature_formula",
    "minimal_immersion",
    "minimal_dirac_data",
    "r21_immersion",
    "r21_dirac_data",
    "konderak_form",
    "immersion_1form_coefficients",
    "conformal_1form_criterion",
    "KONDERAK_F1_COEFF",
]

# Coefficient of chi1*chi2 in the first coordinate of the Konderak-type
# formula.  -2 is what the R^{2,1} reduction produces (chi1 = hat phi2,
# chi2 = psi2); only |coeff| = 2 gives a conformal map.
KONDERAK_F1_COEFF = -2.0


@dataclass(frozen=True)
class Immersion22:
    """A sampled map of the grid into R^{2,2}; ``points`` has shape ``(Ns, Nt, 4)``."""

    spec: GridSpec
    points: np.ndarray
    basepoint: np.ndarray
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.shape != self.spec.shape + (4,):
            raise ValueError(f"points must have shape {self.spec.shape + (4,)}, got {pts.shape}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "basepoint", np.asarray(self.basepoint, dtype=float).reshape(4))

    def coordinate(self, k: int) -> np.ndarray:
        return self.points[..., k]


def _base(basepoint) -> np.ndarray:
    if basepoint is None:
        return np.zeros(4)
    if hasattr(basepoint, "as_array"):
        return basepoint.as_array()
    return np.asarray(basepoint, dtype=float).reshape(4)


# -- conformal maps given by two functions of one variable --------------------

Profile = Union[Callable[[np.ndarray], np.ndarray], np.ndarray, float]


class ConformalMap1D:
    """The conformal map ``e+ f_plus(s) + e- f_minus(t)``.

    Each profile is a callable of one real array, a constant, or an array
    of samples on the grid axis it belongs to.
    """

    def __init__(self, plus: Profile, minus: Profile):
        self.plus = plus
        self.minus = minus

    @classmethod
    def of(cls, f: Callable[[np.ndarray], np.ndarray]) -> "ConformalMap1D":
        """Real-analytic ``f`` with real coefficients acts as ``f`` on both components."""
        return cls(f, f)

    @classmethod
    def constant(cls, c) -> "ConformalMap1D":
        c = c if isinstance(c, LorentzNum) else LorentzNum(float(c), 0.0)
        return cls(float(c.plus), float(c.minus))

    @classmethod
    def from_lorentz(cls, fn: Callable[[LorentzNum], LorentzNum]) -> "ConformalMap1D":
        """Wrap a conformal function written in Lorentz arithmetic.

        For a conformal map the ``e+`` part only sees ``a+``, so it can be
        read off at ``a = s`` (both components equal to ``s``).
        """

        def plus(x):
            return np.asarray(fn(LorentzNum.from_split(x, x)).plus, dtype=float)

        def minus(x):
            return np.asarray(fn(LorentzNum.from_split(x, x)).minus, dtype=float)

        return cls(plus, minus)

    @staticmethod
    def _eval(prof: Profile, x: np.ndarray) -> np.ndarray:
        if callable(prof):
            out = np.asarray(prof(x), dtype=float)
        else:
            out = np.asarray(prof, dtype=float)
        return np.broadcast_to(out, x.shape).copy() if out.ndim == 0 else out

    def plus_values(self, s: np.ndarray) -> np.ndarray:
        out = self._eval(self.plus, s)
        if out.shape != s.shape:
            raise ValueError(f"plus profile has {out.shape} samples, grid axis has {s.shape}")
        return out

    def minus_values(self, t: np.ndarray) -> np.ndarray:
        out = self._eval(self.minus, t)
        if out.shape != t.shape:
            raise ValueError(f"minus profile has {out.shape} samples, grid axis has {t.shape}")
        return out

    def sample(self, spec: GridSpec) -> GridField:
        fp = self.plus_values(spec.s)[:, None] * np.ones((1, spec.Nt))
        fm = np.ones((spec.Ns, 1)) * self.minus_values(spec.t)[None, :]
        return GridField(spec, LorentzNum.from_split(fp, fm))


# -- path integration ---------------------------------------------------------

def one_form_to_st(A: LorentzNum, B: LorentzNum) -> tuple[LorentzNum, LorentzNum]:
    """Rewrite ``A da + B d(hat a)`` as ``P ds + Q dt``."""
    P = LorentzNum.from_split(A.plus, B.minus)
    Q = LorentzNum.from_split(B.plus, A.minus)
    return P, Q


def _cum(arr, h, axis):
    return cumulative_trapezoid(arr, dx=h, axis=axis, initial=0.0)


def _integrate_real(P: np.ndarray, Q: np.ndarray, spec: GridSpec, path: str) -> np.ndarray:
    if path == "st":
        row = _cum(P[:, 0], spec.hs, 0)
        return row[:, None] + _cum(Q, spec.ht, 1)
    if path == "ts":
        col = _cum(Q[0, :], spec.ht, 0)
        return col[None, :] + _cum(P, spec.hs, 0)
    raise ValueError(f"unknown path {path!r}")


def integrate_one_form(P: LorentzNum, Q: LorentzNum, spec: GridSpec, path: str = "st") -> LorentzNum:
    """Primitive of ``P ds + Q dt`` vanishing at ``(s0, t0)``.

    ``path="st"`` runs along ``s`` first, ``"ts"`` along ``t`` first.
    """
    return LorentzNum(
        _integrate_real(np.asarray(P.u), np.asarray(Q.u), spec, path),
        _integrate_real(np.asarray(P.v), np.asarray(Q.v), spec, path),
    )


def immersion_forms(D: DiracData) -> list[tuple[LorentzNum, LorentzNum]]:
    """The four Lorentz-valued forms ``(A, B)`` for F0+F1, F0-F1, F2+sF3, F2-sF3."""
    p1, p2 = D.phi1.values, D.phi2.values
    s1, s2 = D.psi1.values, D.psi2.values
    return [
        (-(s1 * p1.hat()), -(s1.hat() * p1)),
        (s2 * p2.hat(), s2.hat() * p2),
        (s1 * p2.hat(), s2.hat() * p1),
        (s2 * p1.hat(), s1.hat() * p2),
    ]


def _integrate_forms(forms, spec: GridSpec, path: str) -> list[LorentzNum]:
    return [integrate_one_form(*one_form_to_st(A, B), spec, path) for A, B in forms]


def _assemble(X: LorentzNum, Y: LorentzNum, Z: LorentzNum) -> np.ndarray:
    """Coordinates from F0+F1 = X, F0-F1 = Y and F2+sigma F3 = Z."""
    F0 = 0.5 * (np.asarray(X.u) + np.asarray(Y.u))
    F1 = 0.5 * (np.asarray(X.u) - np.asarray(Y.u))
    return np.stack([F0, F1, np.asarray(Z.u), np.asarray(Z.v)], axis=-1)


def path_independence_check(D: DiracData) -> float:
    """Largest difference between the two staircase primitives of the four forms.

    Small (``O(h**2)``) exactly when the forms are closed, i.e. when the Dirac
    system holds.
    """
    forms = immersion_forms(D)
    a = _integrate_forms(forms, D.spec, "st")
    b = _integrate_forms(forms, D.spec, "ts")
    return max(sup_norm(x - y) for x, y in zip(a, b))


def integrate_immersion(
    D: DiracData,
    basepoint=None,
    *,
    tol: float | None = None,
    check: bool = True,
) -> Immersion22:
    """Integrate the spinor data into an immersion ``F = (F0, F1, F2, F3)``.

    With ``check=True`` the Dirac residual, nondegeneracy and path
    independence are verified first (tolerance default ``10 h**2``).
    """
    spec = D.spec
    tol = residual_tolerance(spec) if tol is None else tol
    diag: dict = {}
    if check:
        res = dirac_residual(D)
        diag["dirac_residual"] = res.max_norm
        if not res.passes(tol):
            raise ResidualTooLarge(f"Dirac residual {res.max_norm:.3e} exceeds {tol:.3e}")
        mn, ok = nondegeneracy(D)
        diag["min_abs_lambda_sq"] = mn
        if not ok:
            raise DegenerateMetric(f"|psi2 phi1 - psi1 phi2|^2 reaches {mn:.3e}")
        defect = path_independence_check(D)
        diag["path_defect"] = defect
        if defect > tol:
            raise PathDependence(f"two-path defect {defect:.3e} exceeds {tol:.3e}")
    X, Y, Z, W = _integrate_forms(immersion_forms(D), spec, "st")
    diag["imag_F0_plus_F1"] = sup_norm(LorentzNum(X.v, 0.0 * X.v))
    diag["imag_F0_minus_F1"] = sup_norm(LorentzNum(Y.v, 0.0 * Y.v))
    diag["conjugate_mismatch"] = sup_norm(W - Z.hat())
    base = _base(basepoint)
    return Immersion22(spec, _assemble(X, Y, Z) + base, base, diag)


# -- closed formulas ---------------------------------------------------------

@dataclass(frozen=True)
class MetricReport:
    """Conformal factor of ``g = -lambda_sq da d(hat a) = lambda_sq (-du^2 + dv^2)``."""

    lambda_sq: np.ndarray
    H_sqnorm_formula: np.ndarray
    signature_ok: bool


def metric_formula(D: DiracData) -> MetricReport:
    lam = np.asarray(spinor_determinant(D).sqnorm(), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        H2 = np.where(lam != 0, D.p * D.q / np.where(lam != 0, lam, 1.0), np.nan)
    return MetricReport(lam, H2, bool(np.all(lam > 0)))


def mean_curvature_formula(D: DiracData, tol: float = NONDEGENERACY_TOL) -> np.ndarray:
    """``|H|^2 = p q / |psi2 phi1 - psi1 phi2|^2`` pointwise."""
    mn, ok = nondegeneracy(D, tol)
    if not ok:
        raise DegenerateMetric(f"conformal factor reaches {mn:.3e}")
    lam = np.asarray(spinor_determinant(D).sqnorm(), dtype=float)
    return D.p * D.q / lam


def minimal_dirac_data(psi1, psi2, phihat1, phihat2, spec: GridSpec) -> DiracData:
    """Dirac data with ``p = q = 0`` induced by four conformal maps."""
    s1, s2 = psi1.sample(spec), psi2.sample(spec)
    ph1, ph2 = phihat1.sample(spec).hat(), phihat2.sample(spec).hat()
    return DiracData(ph1, ph2, s1, s2, p=0.0, q=0.0)


def _integrate_conformal(f: LorentzNum, spec: GridSpec) -> LorentzNum:
    """Primitive of ``f da``."""
    zero = 0.0 * f.u
    return integrate_one_form(*one_form_to_st(f, LorentzNum(zero, zero)), spec)


def minimal_immersion(
    psi1: ConformalMap1D,
    psi2: ConformalMap1D,
    phihat1: ConformalMap1D,
    phihat2: ConformalMap1D,
    basepoint=None,
    spec: GridSpec | None = None,
    *,
    tol: float = NONDEGENERACY_TOL,
) -> Immersion22:
    """Minimal immersion from four conformal maps via the real-part formulas."""
    if spec is None:
        raise ValueError("a GridSpec is required")
    s1, s2 = psi1.sample(spec).values, psi2.sample(spec).values
    h1, h2 = phihat1.sample(spec).values, phihat2.sample(spec).values
    det = s2 * h1.hat() - s1 * h2.hat()
    mn = float(np.min(np.abs(det.sqnorm())))
    if mn <= tol:
        raise DegenerateMetric(f"|psi2 phi1 - psi1 phi2|^2 reaches {mn:.3e}")
    I0 = _integrate_conformal(-(s1 * h1) + s2 * h2, spec)
    I1 = _integrate_conformal(-(s1 * h1) - s2 * h2, spec)
    I2 = _integrate_conformal(s2 * h1 + s1 * h2, spec)
    I3 = _integrate_conformal(-(s2 * h1) + s1 * h2, spec)
    pts = np.stack([I0.u, I1.u, I2.u, I3.v], axis=-1)
    base = _base(basepoint)
    return Immersion22(spec, pts + base, base, {"min_abs_lambda_sq": mn})


# -- surfaces in R^{2,1} -------------------------------------------------------

def r21_dirac_data(phi2: GridField, psi2: GridField, p, sign: int = 1) -> DiracData:
    """Full Dirac data under ``psi2 = sign * hat(phi1)``, ``phi2 = sign * hat(psi1)``, ``q = p``."""
    phi1 = psi2.hat() * float(sign)
    psi1 = phi2.hat() * float(sign)
    return DiracData(phi1, phi2, psi1, psi2, p=p, q=p)


def r21_immersion(
    phi2: GridField,
    psi2: GridField,
    p,
    sign: int = 1,
    basepoint=None,
    spec: GridSpec | None = None,
    *,
    tol: float | None = None,
    check: bool = True,
) -> Immersion22:
    """Immersion into ``R^{2,1} = {x0 = const}`` from a reduced Dirac pair."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    spec = phi2.spec if spec is None else spec
    if phi2.spec != spec or psi2.spec != spec:
        raise ValueError("fields do not live on the given grid")
    pr = np.broadcast_to(np.asarray(p.values.u if isinstance(p, GridField) else p, float), spec.shape)
    f, g = phi2.values, psi2.values
    gap = np.asarray(f.sqnorm() - g.sqnorm(), dtype=float)
    diag: dict = {}
    if check:
        tol = residual_tolerance(spec) if tol is None else tol
        r1 = d_a(phi2) + psi2 * pr
        r2 = d_ahat(psi2) + phi2 * pr
        res = max(sup_norm(r1.values), sup_norm(r2.values))
        diag["dirac_residual"] = res
        if res > tol:
            raise ResidualTooLarge(f"reduced Dirac residual {res:.3e} exceeds {tol:.3e}")
    mn = float(np.min(np.abs(gap)))
    diag["min_abs_gap"] = mn
    if mn <= NONDEGENERACY_TOL:
        raise DegenerateMetric(f"|phi2|^2 - |psi2|^2 reaches {mn:.3e}")
    F1 = integrate_one_form(*one_form_to_st(-(g * f.hat()), -(g.hat() * f)), spec)
    Z = integrate_one_form(*one_form_to_st(f.hat() * f.hat(), g.hat() * g.hat()), spec) * float(sign)
    lam = gap**2
    diag["lambda_sq"] = lam
    diag["H_sq"] = pr**2 / lam
    base = _base(basepoint)
    zeros = np.zeros(spec.shape)
    pts = np.stack([zeros, np.asarray(F1.u), np.asarray(Z.u), np.asarray(Z.v)], axis=-1)
    return Immersion22(spec, pts + base, base, diag)


@dataclass(frozen=True)
class KonderakResult:
    Phi: GridField  # coefficient of da in the conformal 1-form chi1^2 da
    g_map: GridField
    F_eq12: Immersion22
    F_eq13: Immersion22


def konderak_form(
    chi1: ConformalMap1D,
    chi2: ConformalMap1D,
    spec: GridSpec,
    basepoint=None,
    *,
    tol: float = NONDEGENERACY_TOL,
) -> KonderakResult:
    """Minimal surface in R^{2,1} in the chi-form and in the (g, Phi) form."""
    c1 = chi1.sample(spec).values
    c2 = chi2.sample(spec).values
    n = np.asarray(c1.sqnorm(), dtype=float)
    if np.min(np.abs(n)) <= tol:
        raise NullChi1("chi1 * hat(chi1) vanishes on the grid")
    base = _base(basepoint)
    k = KONDERAK_F1_COEFF

    a = _integrate_conformal(c1 * c2 * k, spec)
    b = _integrate_conformal(c1 * c1 + c2 * c2, spec)
    c = _integrate_conformal(c1 * c1 - c2 * c2, spec)
    F12 = np.stack([np.zeros(spec.shape), a.u, b.u, c.v], axis=-1)

    Phi = c1 * c1
    g = c2 * c1.inverse()
    a13 = _integrate_conformal(g * Phi * k, spec)
    b13 = _integrate_conformal((1.0 + g * g) * Phi, spec)
    c13 = _integrate_conformal(LorentzNum(0.0, 1.0) * ((1.0 - g * g) * Phi), spec)
    F13 = np.stack([np.zeros(spec.shape), a13.u, b13.u, c13.u], axis=-1)

    return KonderakResult(
        GridField(spec, Phi),
        GridField(spec, g),
        Immersion22(spec, F12 + base, base),
        Immersion22(spec, F13 + base, base),
    )


# -- minimality through conformal 1-forms -------------------------------------

def immersion_1form_coefficients(F: Immersion22) -> list[GridField]:
    """``alpha_k = psi_k da`` with ``psi_k = d_u F_k + sigma d_v F_k``."""
    sp = F.spec
    Fu = d_u(F.points, sp)
    Fv = d_v(F.points, sp)
    return [GridField(sp, LorentzNum(Fu[..., k], Fv[..., k])) for k in range(4)]


@dataclass(frozen=True)
class CriterionResult:
    minimal: bool
    residuals: tuple[float, ...]
    degenerate: bool

    def __bool__(self):
        return self.minimal


def conformal_1form_criterion(coeffs: list[GridField], tol: float | None = None) -> CriterionResult:
    """All four coefficient maps conformal <=> the surface is minimal.

    A map whose differential vanishes passes vacuously and is flagged
    ``degenerate``.
    """
    sp = coeffs[0].spec
    tol = residual_tolerance(sp) if tol is None else tol
    reps = [is_conformal_samples(c, tol) for c in coeffs]
    degenerate = all(sup_norm(c.values) <= 1e-14 for c in coeffs)
    return CriterionResult(all(r.conformal for r in reps), tuple(r.residual for r in reps), degenerate)
