"""
Error hierarchy for the sieve toolkit
"""


class SieveError(Exception):
    """
    Base class for every error raised by the toolkit
    """


class GroupValidationError(SieveError):
    """
    A multiplication table failed validation.

    Args:
        message: Human readable description
        indices: The element indices witnessing the violation
    """

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(int(i) for i in indices)


class NotClosedError(GroupValidationError):
    """Table entries out of range, or a row/column is not a permutation."""


class NotAssociativeError(GroupValidationError):
    """Some triple (a, b, c) has (ab)c != a(bc)."""


class NoIdentityError(GroupValidationError):
    """No two-sided identity element exists."""


class NoInverseError(GroupValidationError):
    """Some element has no two-sided inverse."""


class CrossGroupError(SieveError):
    """Elements of two different groups were combined."""


class NotNormalError(SieveError):
    """A quotient was requested by a subgroup that is not normal."""


class ActionError(SieveError):
    """A semidirect product action is not a homomorphism into Aut(N)."""


class TwistValidationError(SieveError):
    """A twist automorphism does not map the relator to a conjugate of itself."""


class ModulusMismatchError(SieveError):
    """Two homology classes with different modulus or genus were paired."""


class DegenerateFamilyError(SieveError):
    """The G_k family was requested for a genus where it degenerates."""


class IndivisibleModulusError(DegenerateFamilyError):
    """psi onto G(k, g) satisfies the surface relator only when k divides g."""


class BudgetExceededError(SieveError):
    """
    A configured budget would be exceeded. Work is refused, never truncated silently.

    Args:
        message: Human readable description
        requested: Size of the work that was asked for
        budget: The configured ceiling
    """

    def __init__(self, message, requested=None, budget=None):
        super().__init__(message)
        self.requested = requested
        self.budget = budget


class CatalogConsistencyError(SieveError):
    """The catalog generator produced something inconsistent. This is a bug."""


class GroupSpecError(SieveError):
    """A group specification given on the command line could not be parsed."""


class RelatorError(SieveError):
    """A tuple of images does not satisfy the surface relator."""


class CertificateReplayError(SieveError):
    """A geometric certificate failed to replay on its homomorphism. This is a bug."""
