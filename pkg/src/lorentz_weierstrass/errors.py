"""Exception types shared across the package."""


class LorentzGeometryError(Exception):
    """Base class for all domain errors raised by this package."""


class NullDivisor(LorentzGeometryError, ArithmeticError):
    """Division by a Lorentz number on the null cone (|u| == |v|)."""


class GridTooSmall(LorentzGeometryError, ValueError):
    pass


class NotUnitSpinor(LorentzGeometryError, ValueError):
    pass


class NotHermitian(LorentzGeometryError, ValueError):
    pass


class InconsistentInitialData(LorentzGeometryError, ValueError):
    pass


class ResidualTooLarge(LorentzGeometryError):
    pass


class PathDependence(LorentzGeometryError):
    pass


class DegenerateMetric(LorentzGeometryError):
    pass


class NullChi1(LorentzGeometryError):
    pass


class DetDrift(LorentzGeometryError):
    pass


class DegenerateImmersion(LorentzGeometryError):
    pass


class NotSplit(LorentzGeometryError):
    pass


class DegenerateTangent(LorentzGeometryError):
    pass


class NullNormalDirection(LorentzGeometryError):
    pass
