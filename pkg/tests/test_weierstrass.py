import numpy as np
import pytest

from lorentz_weierstrass import (
    CharacteristicData,
    ConformalMap1D,
    DiracData,
    GridField,
    GridSpec,
    LorentzNum,
    conformal_1form_criterion,
    integrate_immersion,
    konderak_form,
    mean_curvature_formula,
    metric_formula,
    minimal_immersion,
    oracle,
    path_independence_check,
    r21_immersion,
    solve_goursat,
)
from lorentz_weierstrass.errors import DegenerateMetric, NullChi1, ResidualTooLarge
from lorentz_weierstrass.weierstrass import (
    KONDERAK_F1_COEFF,
    Immersion22,
    immersion_1form_coefficients,
    integrate_one_form,
    minimal_dirac_data,
    one_form_to_st,
    r21_dirac_data,
)

from conftest import goursat_case, order, worked_exact, worked_maps


def worked_data(spec):
    return minimal_dirac_data(*worked_maps(), spec=spec)


def test_one_form_conversion():
    A, B = LorentzNum(1.0, 2.0), LorentzNum(-1.0, 0.5)
    P, Q = one_form_to_st(A, B)
    # A da + B dahat with da = e+ ds + e- dt, dahat = e+ dt + e- ds
    assert (P.plus, P.minus) == (A.plus, B.minus)
    assert (Q.plus, Q.minus) == (B.plus, A.minus)


def test_integrating_da_gives_a():
    spec = GridSpec.square(-1, 1, 9)
    one = LorentzNum(np.ones(spec.shape), np.zeros(spec.shape))
    zero = LorentzNum(np.zeros(spec.shape), np.zeros(spec.shape))
    a = spec.a()
    I = integrate_one_form(*one_form_to_st(one, zero), spec)
    assert np.allclose(I.u, a.u - a.u[0, 0]) and np.allclose(I.v, a.v - a.v[0, 0])
    J = integrate_one_form(*one_form_to_st(zero, one), spec)
    assert np.allclose(J.v, -(a.v - a.v[0, 0]))


def test_worked_example_through_the_dirac_pipeline():
    spec = GridSpec.square(-1, 1, 33)
    base = np.array([1.0, 2.0, 3.0, 4.0])
    F = integrate_immersion(worked_data(spec), base)
    ex = worked_exact(spec)
    np.testing.assert_allclose(F.points, ex - ex[0, 0] + base, atol=1e-12)
    np.testing.assert_array_equal(F.points[0, 0], base)
    for k in ("imag_F0_plus_F1", "imag_F0_minus_F1", "conjugate_mismatch"):
        assert F.diagnostics[k] < 1e-12


def test_real_part_formula_matches_the_pipeline():
    spec = GridSpec.square(-0.7, 0.4, 21)
    maps = (
        ConformalMap1D.of(lambda x: 1 + 0.2 * x),
        ConformalMap1D.of(lambda x: 0.3 * x * x),
        ConformalMap1D.of(np.sin),
        ConformalMap1D.constant(1.0),
    )
    F7 = minimal_immersion(*maps, spec=spec)
    F3 = integrate_immersion(minimal_dirac_data(*maps, spec=spec), check=False)
    np.testing.assert_allclose(F7.points, F3.points, atol=1e-12)


def test_worked_example_metric_formula():
    spec = GridSpec.square(-1, 1, 9)
    mr = metric_formula(worked_data(spec))
    np.testing.assert_array_equal(mr.lambda_sq, 1.0)
    assert mr.signature_ok
    np.testing.assert_array_equal(mr.H_sqnorm_formula, 0.0)


def test_mean_curvature_formula_values():
    D, _ = goursat_case(17, 0.3)
    lam = metric_formula(D).lambda_sq
    np.testing.assert_allclose(mean_curvature_formula(D), 0.09 / lam)


def test_oracle_mean_curvature_is_four_times_the_formula():
    # documents the factor between the pointwise formula and the
    # 1/2 tr_g II normalisation used by the oracle
    errs = []
    for n in (33, 65):
        D, F = goursat_case(n, 0.3)
        _, H2 = oracle.mean_curvature_vector(F)
        errs.append(oracle._imax(H2 - 4.0 * mean_curvature_formula(D)))
    assert errs[1] < 1e-4
    assert order(*errs) == pytest.approx(2.0, abs=0.3)


def test_degenerate_and_invalid_data_are_rejected():
    spec = GridSpec.square(-1, 1, 17)
    D = worked_data(spec)
    flat = DiracData(D.phi1, D.phi1, D.psi1, D.psi1, p=0.0, q=0.0)
    with pytest.raises(DegenerateMetric):
        integrate_immersion(flat)
    bad = DiracData(D.phi1, D.phi2, D.psi1, D.psi2, p=1.0, q=1.0)
    with pytest.raises(ResidualTooLarge):
        integrate_immersion(bad)
    with pytest.raises(DegenerateMetric):
        minimal_immersion(*worked_maps()[:2], *worked_maps()[:2], spec=spec)


def test_path_independence_both_ways():
    D, _ = goursat_case(33, 0.3)
    assert path_independence_check(D) < 10 * D.spec.h**2
    S, T = D.spec.mesh()
    bad = DiracData(D.phi1, D.phi2, D.psi1 + GridField.real(D.spec, 0.5 * S * T), D.psi2, p=D.p, q=D.q)
    assert path_independence_check(bad) > 1e-2


def reduced_pair(n, p=0.2):
    spec = GridSpec.square(-0.5, 0.5, n)
    f = lambda a: LorentzNum(1.0, 0.0)  # noqa: E731
    g = lambda a: a * 0.3  # noqa: E731
    D = solve_goursat(p, p, CharacteristicData.from_functions(spec, f, f, g, g))
    return spec, D.phi2, D.psi2


def test_r21_immersion_lies_in_a_hyperplane_and_matches_the_full_formula():
    spec, phi2, psi2 = reduced_pair(33)
    base = np.array([2.0, 0.0, 1.0, -1.0])
    F = r21_immersion(phi2, psi2, 0.2, basepoint=base)
    assert np.ptp(F.points[..., 0]) == 0.0
    full = integrate_immersion(r21_dirac_data(phi2, psi2, 0.2), base, check=False)
    np.testing.assert_allclose(full.points, F.points, atol=1e-12)
    lam = F.diagnostics["lambda_sq"]
    np.testing.assert_allclose(F.diagnostics["H_sq"], 0.04 / lam)


def test_r21_metric_agrees_with_the_oracle():
    errs = []
    for n in (33, 65):
        spec, phi2, psi2 = reduced_pair(n)
        F = r21_immersion(phi2, psi2, 0.2)
        lam = F.diagnostics["lambda_sq"]
        E, Fm, G = oracle.first_form(F)
        errs.append(max(oracle._imax(E + lam), oracle._imax(G - lam), oracle._imax(Fm)))
    assert order(*errs) == pytest.approx(2.0, abs=0.3)


def test_r21_sign_flips_the_last_coordinates():
    spec, phi2, psi2 = reduced_pair(17)
    a = r21_immersion(phi2, psi2, 0.2, sign=1)
    b = r21_immersion(phi2, psi2, 0.2, sign=-1)
    np.testing.assert_allclose(a.points[..., 1], b.points[..., 1])
    np.testing.assert_allclose(a.points[..., 2:], -b.points[..., 2:])
    with pytest.raises(ValueError):
        r21_immersion(phi2, psi2, 0.2, sign=2)


def test_r21_degenerate_pair():
    spec = GridSpec.square(-0.5, 0.5, 17)
    one = GridField.constant(spec, LorentzNum(1.0, 0.0))
    with pytest.raises(DegenerateMetric):
        r21_immersion(one, one, 0.0)


def test_konderak_plane():
    spec = GridSpec.square(-1, 1, 17)
    K = konderak_form(ConformalMap1D.constant(1.0), ConformalMap1D.constant(0.0), spec)
    u, v = spec.uv()
    np.testing.assert_allclose(K.F_eq12.points[..., 1], 0.0, atol=1e-14)
    np.testing.assert_allclose(K.F_eq12.points[..., 2], u - u[0, 0], atol=1e-14)
    np.testing.assert_allclose(K.F_eq12.points[..., 3], v - v[0, 0], atol=1e-14)


def test_konderak_cubic_example_closed_form():
    spec = GridSpec.square(-0.5, 0.5, 33)
    K = konderak_form(ConformalMap1D.constant(1.0), ConformalMap1D.of(lambda x: x), spec)
    u, v = spec.uv()
    ex = np.stack([0 * u, -(u**2 + v**2), u + (u**3 + 3 * u * v**2) / 3, v - (3 * u**2 * v + v**3) / 3], -1)
    # trapezoid rule on the cubic integrand: O(h^2)
    assert np.max(np.abs(K.F_eq12.points - (ex - ex[0, 0]))) < spec.h**2
    np.testing.assert_allclose(K.F_eq12.points, K.F_eq13.points, atol=1e-12)


def test_konderak_coefficient_is_the_conformal_one():
    assert KONDERAK_F1_COEFF == -2.0
    spec = GridSpec.square(-0.5, 0.5, 65)
    K = konderak_form(ConformalMap1D.constant(1.0), ConformalMap1D.of(lambda x: x), spec)
    assert oracle.conformality_defect(K.F_eq12) < 10 * spec.h**2
    H, _ = oracle.mean_curvature_vector(K.F_eq12)
    assert oracle._imax(H) < 10 * spec.h**2
    # with 1/2 in place of -2 the first coordinate no longer fits
    pts = K.F_eq12.points.copy()
    pts[..., 1] *= 0.5 / KONDERAK_F1_COEFF
    assert oracle.conformality_defect(Immersion22(spec, pts, pts[0, 0])) > 0.1


def test_konderak_null_chi1():
    spec = GridSpec.square(-0.5, 0.5, 9)
    with pytest.raises(NullChi1):
        konderak_form(ConformalMap1D(2.0, 0.0), ConformalMap1D.of(lambda x: x), spec)


def test_conformal_1form_criterion():
    spec = GridSpec.square(-1, 1, 33)
    F = integrate_immersion(worked_data(spec))
    res = conformal_1form_criterion(immersion_1form_coefficients(F))
    assert res.minimal and not res.degenerate
    assert max(res.residuals) < 1e-12
    _, G = goursat_case(33, 0.3)
    res = conformal_1form_criterion(immersion_1form_coefficients(G))
    assert not res.minimal
    const = Immersion22(spec, np.ones(spec.shape + (4,)), np.ones(4))
    res = conformal_1form_criterion(immersion_1form_coefficients(const))
    assert res.minimal and res.degenerate


def test_sheared_plane_is_not_conformal():
    spec = GridSpec.square(-1, 1, 9)
    u, v = spec.uv()
    F = Immersion22(spec, np.stack([0 * u, 0 * u, u, u + v], -1), np.zeros(4))
    assert oracle.conformality_defect(F) > 0.5


def test_conformal_map_helpers():
    spec = GridSpec.square(-1, 1, 9)
    f = ConformalMap1D.from_lorentz(lambda a: a * a)
    np.testing.assert_allclose(f.sample(spec).values.u, (spec.a() * spec.a()).u)
    g = ConformalMap1D(np.linspace(0, 1, 9), np.linspace(1, 2, 9))
    vals = g.sample(spec).values
    np.testing.assert_allclose(vals.plus[:, 0], np.linspace(0, 1, 9))
    np.testing.assert_allclose(vals.minus[0, :], np.linspace(1, 2, 9))
