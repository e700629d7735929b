"""Weierstrass-type constructions of Lorentzian surfaces in R^{2,2}.

Lorentz numbers, the Clifford algebra Cl(2,2) and its spin group, a Goursat
solver for the Dirac system that carries the spinor data of a surface, the
integral formulas producing the immersion, flat surfaces in the anti-de
Sitter space and in S^{1,2}, and a finite-difference geometry oracle that
checks all of it.
"""
from .algebra import E_MINUS, E_PLUS, ONE, SIGMA, ZERO, LorentzNum, SplitRep, hyperbolic
from .clifford import (
    A0,
    A1,
    H0Elem,
    H1Elem,
    Mat2A,
    Vec22,
    bilinear_H,
    gamma,
    gamma_square,
    herm_to_vec,
    random_unit_spinor,
    spin_to_so,
    vec_to_herm,
)
from .dirac import CharacteristicData, DiracData, dirac_residual, nondegeneracy, solve_goursat
from .errors import *  # noqa: F401,F403
from .flat import (
    ConformalOneForm,
    CurvePair,
    Mat2AField,
    ads_immersion,
    flat_metric_shape,
    frame_equation_residual,
    integrate_frame,
    product_curves_decompose,
    s12_immersion,
)
from .grid import GridField, GridSpec, is_conformal_samples
from .weierstrass import (
    ConformalMap1D,
    Immersion22,
    conformal_1form_criterion,
    integrate_immersion,
    konderak_form,
    mean_curvature_formula,
    metric_formula,
    minimal_immersion,
    path_independence_check,
    r21_immersion,
)

__version__ = "0.1.0"
