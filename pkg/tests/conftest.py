import math

import numpy as np
import pytest

from lorentz_weierstrass import (
    CharacteristicData,
    ConformalMap1D,
    GridSpec,
    LorentzNum,
    integrate_immersion,
    solve_goursat,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def order(e_coarse: float, e_fine: float) -> float:
    """Observed order from two errors on grids with ratio 2."""
    return math.log2(e_coarse / e_fine)


def goursat_case(n: int, p: float = 0.3, lo: float = -0.5, hi: float = 0.5):
    """Dirac data with constant ``p = q`` grown from the worked minimal datum."""
    spec = GridSpec.square(lo, hi, n)
    init = CharacteristicData.from_functions(
        spec,
        lambda a: a.hat(),
        lambda a: LorentzNum(1.0, 0.0),
        lambda a: LorentzNum(1.0, 0.0),
        lambda a: LorentzNum(0.0, 0.0),
    )
    D = solve_goursat(p, p, init)
    return D, integrate_immersion(D)


def worked_maps():
    """psi1 = 1, psi2 = 0, hat phi1 = a, hat phi2 = 1."""
    return (
        ConformalMap1D.constant(1.0),
        ConformalMap1D.constant(0.0),
        ConformalMap1D.of(lambda x: x),
        ConformalMap1D.constant(1.0),
    )


def worked_exact(spec: GridSpec) -> np.ndarray:
    u, v = spec.uv()
    r = -(u**2 + v**2) / 2
    return np.stack([r, r, u, v], axis=-1)
