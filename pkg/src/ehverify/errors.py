"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` that the CLI copies
into reports (``"inadmissible-C"``, ``"no-root"``, ...).
"""

from __future__ import annotations


class VerificationError(ValueError):
    code = "error"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class DomainError(VerificationError):
    code = "outside-domain"


class NoRootError(VerificationError):
    code = "no-root"


class InadmissibleError(VerificationError):
    code = "inadmissible"


class NotConvergedError(VerificationError):
    code = "not-converged"


class InsufficientSamplesError(VerificationError):
    code = "insufficient-samples"


class ConstructionError(VerificationError):
    """A constructed spec failed one of its own post-checks."""

    code = "construction-check-failed"
