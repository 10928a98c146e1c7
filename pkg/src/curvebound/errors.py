"""Shared exception types."""


class GeometryError(ValueError):
    """Invalid geometric input: wrong model, bad arity, degenerate data."""


class ModelMismatchError(GeometryError):
    """Point supplied in a model or space it does not belong to."""


class NonUniqueGeodesicError(GeometryError):
    """Geodesic interpolation requested between (near-)antipodal points."""


class NumericalError(GeometryError):
    """Value left its admissible domain by more than the tolerance."""


class OnCurveError(GeometryError):
    """Cone apex lies on the curve; use the on-curve bound instead."""


class ConstructionError(GeometryError):
    """A randomized construction failed within its retry budget."""
