"""Exception hierarchy shared across the package."""


class ShallowArtError(Exception):
    """Base class for all errors raised by this package."""


class SpecError(ShallowArtError):
    """An image spec is invalid (non-positive or odd dimensions where halving is required)."""


class SpecMismatchError(ShallowArtError):
    """An image or dataset does not match the expected spec."""


class ConfigError(ShallowArtError):
    """A generator or learner configuration is invalid."""


class ShapeError(ShallowArtError):
    """An array has the wrong shape or length."""


class RangeError(ShallowArtError):
    """A value lies outside its permitted range."""


class DecodeError(ShallowArtError):
    """A byte stream could not be decoded as an image."""


class EncodingError(ShallowArtError):
    """An operation received an image with the wrong pixel encoding."""


class InsufficientDataError(ShallowArtError):
    """Training or evaluation was attempted with no usable data."""


class TargetDomainError(ShallowArtError):
    """Training targets lie outside the domain required by the task."""


class NotFittedError(ShallowArtError):
    """Predict was called before fit."""


class ModelFormatError(ShallowArtError):
    """Base class for model container parsing failures."""


class BadMagicError(ModelFormatError):
    """The container does not start with the expected magic bytes."""


class UnsupportedVersionError(ModelFormatError):
    """The container declares a format version newer than this reader."""


class TruncatedModelError(ModelFormatError):
    """The container ended before the declared payloads were complete."""
