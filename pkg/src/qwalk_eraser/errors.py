"""Exception types raised by the walk, erasure and POVM routines."""


class QWalkError(Exception):
    """Base class for all package errors."""


class CapacityError(QWalkError, ValueError):
    """Requested size exceeds an allocated grid or a brute-force cap."""


class DimensionError(QWalkError, ValueError):
    """Two objects refer to walks of different length."""


class ImpossibleOutcomeError(QWalkError, ValueError):
    """Conditioning on a measurement outcome that has zero probability."""
