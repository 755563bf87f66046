"""Exceptions raised by embedlift.

All errors derive from `EmbedliftError`, itself a `ValueError`, so callers that
only expect `ValueError` keep working.
"""


class EmbedliftError(ValueError):
    pass


class ExpressionSyntaxError(EmbedliftError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExpressionSyntaxError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier '{name}'", offset)
        self.name = name


class SingularPointError(EmbedliftError):
    def __init__(self, message: str, z: complex | None = None):
        super().__init__(message if z is None else f"{message} at z={z}")
        self.z = z


class BranchCutError(SingularPointError):
    pass


class IntegrationError(EmbedliftError):
    pass


class SingularityOnPathError(IntegrationError):
    def __init__(self, message: str, z: complex | None = None):
        super().__init__(message)
        self.z = z


class GeodesicError(EmbedliftError):
    def __init__(self, message: str, s: float | None = None):
        super().__init__(message if s is None else f"{message} (s={s:.6g})")
        self.s = s


class ShootingError(GeodesicError):
    pass


class ZeroTangentError(EmbedliftError):
    pass


class NormalizationError(EmbedliftError):
    pass


class ExtremalPhiError(EmbedliftError):
    pass


class UCPError(EmbedliftError):
    pass


class BaseLookupError(EmbedliftError):
    pass


class ConfigError(EmbedliftError):
    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
