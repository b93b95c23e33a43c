"""Exception hierarchy shared by every deforma module."""


class DeformaError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(DeformaError):
    """A file does not conform to its on-disk format."""


class ValidationError(DeformaError):
    """Decoded data violates a container invariant (e.g. NaN payload)."""


class IoError(DeformaError):
    """An underlying filesystem operation failed."""


class DomainError(DeformaError):
    """A numeric argument is outside its allowed domain."""


class ShapeError(DeformaError):
    """Tensor operands do not share the required shape."""


class DegenerateError(DeformaError):
    """Point correspondences are too degenerate to fit a transform."""


class SingularError(DeformaError):
    """An affine transform is not invertible."""


class WeightError(DeformaError):
    """Per-location merge weights do not sum to one within tolerance."""
