"""Exception hierarchy.

Every error raised deliberately by the package derives from
:class:`KreinWeylError`, which itself derives from :class:`ValueError`
so callers that only catch ``ValueError`` keep working.
"""


class KreinWeylError(ValueError):
    """Base class for all package errors."""


class DimensionError(KreinWeylError):
    """Operands have incompatible sizes."""


class DimensionMismatchError(DimensionError):
    """Boundary spaces of two pairs do not match."""


class ZeroVectorError(KreinWeylError):
    """A nonzero vector was required."""


class NotUnitaryError(KreinWeylError):
    """A relation expected to be unitary is not."""


class InvalidColligationError(KreinWeylError):
    """The connecting block matrix fails the colligation identities."""


class ExcludedPointError(KreinWeylError):
    """The point lies outside the admissible evaluation set."""


class UnimodularPointError(ExcludedPointError):
    """The point lies on the unit circle."""


class UnimodularProductError(KreinWeylError):
    """A kernel was evaluated where ``λ·conj(ω) = 1``."""


class UnimodularAlphaError(KreinWeylError):
    """Möbius parameter on the unit circle."""


class SingularResolventError(ExcludedPointError):
    """``I - λT`` is not (numerically) invertible."""


class MultivaluedWeylError(KreinWeylError):
    """The Weyl family is not the graph of an operator at this point."""


class EigenvalueCollisionError(KreinWeylError):
    """``1/α`` is an eigenvalue of the underlying isometry."""


class MixedRegionError(ExcludedPointError):
    """Points from the disk and its exterior were mixed."""


class InsufficientSamplesError(KreinWeylError):
    """A sample-based span did not stabilise."""


class DegenerateParameterError(KreinWeylError):
    """``ker(Φ₁*Φ₁ + Φ₂*Φ₂) ≠ 0``."""


class SingularPencilError(KreinWeylError):
    """The boundary pencil is not boundedly invertible."""


class NotOrdinaryError(KreinWeylError):
    """An ordinary boundary triple was required."""


class RegularityError(KreinWeylError):
    """The coupling pencil ``I - Θ(z̄)*ε(z)`` is singular."""


class RankNotStabilizedError(KreinWeylError):
    """The Hankel rank did not stabilise on the supplied coefficients."""


class SteinSingularError(KreinWeylError):
    """The Stein equation is not uniquely solvable."""


class NotSchurClassError(KreinWeylError):
    """The data do not come from a unitary colligation."""


class SchemaError(KreinWeylError):
    """A JSON document does not match the expected schema."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
