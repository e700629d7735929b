"""Finite-difference differential geometry of sampled surfaces in R^{2,2}.

Nothing in here knows about spinors or Weierstrass data: it only sees the
sampled points, which is what makes it usable as an independent check of
the closed formulas elsewhere in the package.

Derivatives are taken on the native ``(s, t)`` grid with second-order
central stencils and converted with ``d_u = d_s + d_t``,
``d_v = d_s - d_t``.  Boundary rows and columns use one-sided stencils and
are excluded from every summary statistic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetric, DegenerateTangent, GridTooSmall, NullNormalDirection
from .grid import GridSpec, diff, diff2
from .weierstrass import Immersion22

__all__ = [
    "ETA",
    "scalar",
    "Derivatives",
    "derivatives",
    "FundamentalForms",
    "CurvatureReport",
    "first_form",
    "first_form_st",
    "normal_frame",
    "fundamental_forms",
    "mean_curvature_vector",
    "gauss_curvature",
    "conformality_defect",
    "null_form_defect",
    "curvature_report",
    "interior",
    "CURVATURE_RING",
]

ETA = np.array([-1.0, 1.0, -1.0, 1.0])
DEGENERACY_TOL = 1e-10


def scalar(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """The signature (2,2) product over the last axis."""
    return np.sum(ETA * x * y, axis=-1)


# Brioschi differentiates E, F, G, which already carry the one-sided
# boundary error, so its second ring is polluted too.
CURVATURE_RING = 2


def interior(a: np.ndarray, ring: int = 1) -> np.ndarray:
    return a[ring:-ring, ring:-ring]


def _imax(a: np.ndarray, ring: int = 1) -> float:
    a = interior(np.asarray(a), ring)
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass(frozen=True)
class Derivatives:
    Fu: np.ndarray
    Fv: np.ndarray
    Fuu: np.ndarray
    Fuv: np.ndarray
    Fvv: np.ndarray


def _st_derivatives(X: np.ndarray, spec: GridSpec):
    Xs = diff(X, spec.hs, 0)
    Xt = diff(X, spec.ht, 1)
    Xss = diff2(X, spec.hs, 0)
    Xtt = diff2(X, spec.ht, 1)
    Xst = diff(Xs, spec.ht, 1)
    return Xs, Xt, Xss, Xst, Xtt


def _require(F: Immersion22):
    if F.spec.Ns < 4 or F.spec.Nt < 4:
        raise GridTooSmall("the oracle needs at least 4 samples per axis")


def derivatives(F: Immersion22) -> Derivatives:
    """Tangent vectors and second derivatives in conformal-type ``(u, v)`` coordinates."""
    _require(F)
    Fs, Ft, Fss, Fst, Ftt = _st_derivatives(F.points, F.spec)
    return Derivatives(
        Fu=Fs + Ft,
        Fv=Fs - Ft,
        Fuu=Fss + 2.0 * Fst + Ftt,
        Fuv=Fss - Ftt,
        Fvv=Fss - 2.0 * Fst + Ftt,
    )


def first_form(F: Immersion22):
    """``(E, F, G)`` with ``E = <F_u, F_u>``, ``F = <F_u, F_v>``, ``G = <F_v, F_v>``."""
    d = derivatives(F)
    return scalar(d.Fu, d.Fu), scalar(d.Fu, d.Fv), scalar(d.Fv, d.Fv)


def first_form_st(F: Immersion22):
    """The first fundamental form in the null coordinates ``(s, t)``."""
    _require(F)
    Fs = diff(F.points, F.spec.hs, 0)
    Ft = diff(F.points, F.spec.ht, 1)
    return scalar(Fs, Fs), scalar(Fs, Ft), scalar(Ft, Ft)


def _tangent_projector_residual(X, Fu, Fv, ginv):
    """``X`` minus its tangential part (``X`` broadcast against the grid)."""
    a = scalar(X, Fu)
    b = scalar(X, Fv)
    cu = ginv[0][0] * a + ginv[0][1] * b
    cv = ginv[1][0] * a + ginv[1][1] * b
    return X - cu[..., None] * Fu - cv[..., None] * Fv


def _inverse_metric(E, Fm, G, tol=DEGENERACY_TOL):
    det = E * G - Fm * Fm
    scale = np.maximum(np.abs(E) + np.abs(G) + np.abs(Fm), 1e-300) ** 2
    if np.any(np.abs(det) <= tol * scale):
        raise DegenerateTangent("tangent plane is degenerate somewhere on the grid")
    return det, ((G / det, -Fm / det), (-Fm / det, E / det))


def _pick(cands, norms, tol: float):
    """Most spacelike candidate; one index for the whole grid when possible."""
    worst = norms.reshape(norms.shape[0], -1).min(axis=1)
    k = int(np.argmax(worst))
    if worst[k] > tol:
        return cands[k], norms[k]
    idx = np.argmax(norms, axis=0)
    best = np.take_along_axis(norms, idx[None], 0)[0]
    if np.any(best <= tol):
        raise NullNormalDirection("normal plane has no usable spacelike direction")
    vec = np.take_along_axis(cands, idx[None, ..., None], 0)[0]
    return vec, best


def _span_frame(W, tol: float):
    """Orthonormal ``(n0, n1)`` of the plane spanned by the projected candidates.

    The pair of candidates with the best-conditioned Gram matrix is used (one
    pair for the whole grid when it works everywhere) and that 2x2 Gram
    matrix is diagonalised.
    """
    pairs = [(j, k) for j in range(len(W)) for k in range(j + 1, len(W))]
    dets = []
    for j, k in pairs:
        a, b, c = scalar(W[j], W[j]), scalar(W[j], W[k]), scalar(W[k], W[k])
        dets.append(np.abs(a * c - b * b))
    dets = np.stack(dets)
    worst = dets.reshape(len(pairs), -1).min(axis=1)
    best = int(np.argmax(worst))
    if worst[best] > tol:
        choice = np.full(W.shape[1:-1], best)
    else:
        choice = np.argmax(dets, axis=0)
        if np.any(np.take_along_axis(dets, choice[None], 0)[0] <= tol):
            raise NullNormalDirection("normal plane is degenerate somewhere on the grid")
    J = np.array([p[0] for p in pairs])[choice]
    K = np.array([p[1] for p in pairs])[choice]
    X = np.take_along_axis(W, J[None, ..., None], 0)[0]
    Y = np.take_along_axis(W, K[None, ..., None], 0)[0]
    gram = np.stack(
        [np.stack([scalar(X, X), scalar(X, Y)], -1), np.stack([scalar(Y, X), scalar(Y, Y)], -1)], -2
    )
    lam, vec = np.linalg.eigh(gram)
    if np.any(lam[..., 0] >= -tol) or np.any(lam[..., 1] <= tol):
        raise NullNormalDirection("normal plane does not have signature (1,1)")
    n0 = vec[..., 0, 0, None] * X + vec[..., 1, 0, None] * Y
    n1 = vec[..., 0, 1, None] * X + vec[..., 1, 1, None] * Y
    return n0 / np.sqrt(-lam[..., 0])[..., None], n1 / np.sqrt(lam[..., 1])[..., None]


def _orient(n: np.ndarray, eps: float) -> np.ndarray:
    """Flip signs so neighbouring normals agree, sweeping from the (0, 0) corner."""
    rel_col = np.sign(eps * scalar(n[1:, 0], n[:-1, 0]))
    rel_col[rel_col == 0] = 1.0
    col = np.concatenate([[1.0], np.cumprod(rel_col)])
    rel_row = np.sign(eps * scalar(n[:, 1:], n[:, :-1]))
    rel_row[rel_row == 0] = 1.0
    rows = np.concatenate([np.ones((n.shape[0], 1)), np.cumprod(rel_row, axis=1)], axis=1)
    return n * (col[:, None] * rows)[..., None]


def normal_frame(F: Immersion22, hint: np.ndarray | None = None, tol: float = 1e-8):
    """Orthonormal normal fields ``(n0, n1)`` with ``<n0,n0> = -1``, ``<n1,n1> = 1``.

    The coordinate axes are projected off the tangent plane and two of them
    span the normal plane.  A timelike ``hint`` field (for instance the
    position vector of a surface in the anti-de Sitter space) is used as
    ``n0`` directly when it is normal-timelike everywhere.
    """
    d = derivatives(F)
    E, Fm, G = scalar(d.Fu, d.Fu), scalar(d.Fu, d.Fv), scalar(d.Fv, d.Fv)
    _, ginv = _inverse_metric(E, Fm, G)
    shape = F.spec.shape
    cands = [np.broadcast_to(np.eye(4)[k], shape + (4,)) for k in range(4)]
    if hint is not None:
        cands.insert(0, np.broadcast_to(np.asarray(hint, float), shape + (4,)))
    W = np.stack([_tangent_projector_residual(c, d.Fu, d.Fv, ginv) for c in cands])
    norms = scalar(W, W)
    if hint is not None and np.all(norms[0] < -tol):
        n0 = W[0] / np.sqrt(-norms[0])[..., None]
        W1 = W[1:] + scalar(W[1:], n0)[..., None] * n0
        w1, nn1 = _pick(W1, scalar(W1, W1), tol)
        n1 = w1 / np.sqrt(nn1)[..., None]
    else:
        n0, n1 = _span_frame(W if hint is None else W[1:], tol)
    return _orient(n0, -1.0), _orient(n1, 1.0)


@dataclass(frozen=True)
class FundamentalForms:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    e: np.ndarray  # (2, Ns, Nt): II(d_u, d_u) along n0, n1
    f: np.ndarray
    g: np.ndarray
    n0: np.ndarray
    n1: np.ndarray


def fundamental_forms(F: Immersion22, hint: np.ndarray | None = None) -> FundamentalForms:
    d = derivatives(F)
    n0, n1 = normal_frame(F, hint)
    ns = (n0, n1)
    return FundamentalForms(
        E=scalar(d.Fu, d.Fu),
        F=scalar(d.Fu, d.Fv),
        G=scalar(d.Fv, d.Fv),
        e=np.stack([scalar(d.Fuu, n) for n in ns]),
        f=np.stack([scalar(d.Fuv, n) for n in ns]),
        g=np.stack([scalar(d.Fvv, n) for n in ns]),
        n0=n0,
        n1=n1,
    )


def mean_curvature_vector(F: Immersion22, forms: FundamentalForms | None = None):
    """``H = 1/2 tr_g II`` and its Lorentzian square ``<H, H>``."""
    ff = fundamental_forms(F) if forms is None else forms
    _, ginv = _inverse_metric(ff.E, ff.F, ff.G)
    eps = (-1.0, 1.0)
    H = np.zeros(F.points.shape)
    for a, n in enumerate((ff.n0, ff.n1)):
        tr = ginv[0][0] * ff.e[a] + 2.0 * ginv[0][1] * ff.f[a] + ginv[1][1] * ff.g[a]
        H += 0.5 * eps[a] * tr[..., None] * n
    return H, scalar(H, H)


def gauss_curvature(F: Immersion22) -> np.ndarray:
    """Intrinsic curvature from the first form alone (Brioschi formula in ``(s, t)``).

    Sign convention: ``K = R(X,Y,Y,X) / (<X,X><Y,Y> - <X,Y>^2)``, so the
    totally geodesic AdS_2 slice of the anti-de Sitter space has ``K = -1``.
    Values within ``CURVATURE_RING`` nodes of the boundary are only first
    order accurate.
    """
    sp = F.spec
    E, Fm, G = first_form_st(F)
    det = E * G - Fm * Fm
    scale = np.maximum(np.abs(E) + np.abs(G) + np.abs(Fm), 1e-300) ** 2
    if np.any(np.abs(interior(det)) <= DEGENERACY_TOL * interior(scale)):
        raise DegenerateMetric("first fundamental form is degenerate")
    Es, Et = diff(E, sp.hs, 0), diff(E, sp.ht, 1)
    Gs, Gt = diff(G, sp.hs, 0), diff(G, sp.ht, 1)
    Fs, Ft = diff(Fm, sp.hs, 0), diff(Fm, sp.ht, 1)
    Ett = diff2(E, sp.ht, 1)
    Gss = diff2(G, sp.hs, 0)
    Fst = diff(Fs, sp.ht, 1)
    a11 = -0.5 * Ett + Fst - 0.5 * Gss
    det1 = (
        a11 * (E * G - Fm * Fm)
        - 0.5 * Es * ((Ft - 0.5 * Gs) * G - Fm * 0.5 * Gt)
        + (Fs - 0.5 * Et) * ((Ft - 0.5 * Gs) * Fm - E * 0.5 * Gt)
    )
    det2 = -0.5 * Et * (0.5 * Et * G - Fm * 0.5 * Gs) + 0.5 * Gs * (0.5 * Et * Fm - E * 0.5 * Gs)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (det1 - det2) / det**2


def conformality_defect(F: Immersion22) -> float:
    """``max(|E + G|, |F|)`` over interior nodes; zero for conformal ``(u, v)``."""
    E, Fm, G = first_form(F)
    return max(_imax(E + G), _imax(Fm))


def null_form_defect(F: Immersion22) -> float:
    """``max(|<F_s,F_s>|, |<F_t,F_t>|)``: zero when ``s, t`` are null coordinates."""
    E, _, G = first_form_st(F)
    return max(_imax(E), _imax(G))


@dataclass(frozen=True)
class CurvatureReport:
    mean_vector: np.ndarray
    H_sqnorm: np.ndarray
    gauss_K: np.ndarray
    conformal_defect: float
    null_defect: float

    def summary(self) -> dict:
        def stats(a, ring=1):
            a = interior(np.asarray(a), ring)
            return {
                "min": float(np.min(a)),
                "max": float(np.max(a)),
                "max_abs": float(np.max(np.abs(a))),
            }

        return {
            "H_sqnorm": stats(self.H_sqnorm),
            "H_vector_max_component": _imax(self.mean_vector),
            "gauss_K": stats(self.gauss_K, CURVATURE_RING),
            "conformal_defect": self.conformal_defect,
            "null_defect": self.null_defect,
        }


def curvature_report(F: Immersion22) -> CurvatureReport:
    H, H2 = mean_curvature_vector(F)
    return CurvatureReport(
        mean_vector=H,
        H_sqnorm=H2,
        gauss_K=gauss_curvature(F),
        conformal_defect=conformality_defect(F),
        null_defect=null_form_defect(F),
    )
