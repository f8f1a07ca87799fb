"""Exception types shared across the engine."""


class EpsmultError(Exception):
    """Base class for all engine errors."""

    code = "error"

    def record(self) -> dict:
        """Machine-readable error record for reports and the service."""
        return {"code": self.code, "message": str(self)}


class RingMismatch(EpsmultError):
    """Operands belong to different rings."""

    code = "ring-mismatch"


class StabilityFailure(EpsmultError):
    """A windowed computation changed when the window was doubled."""

    code = "stability-failure"

    def __init__(self, operation: str, bound_used: int, verified_at: int):
        self.operation = operation
        self.bound_used = bound_used
        self.verified_at = verified_at
        super().__init__(
            f"{operation}: truncated result changed between window bounds "
            f"{bound_used} and {verified_at}"
        )

    def record(self) -> dict:
        rec = super().record()
        rec.update(
            operation=self.operation,
            bound_used=self.bound_used,
            verified_at=self.verified_at,
        )
        return rec


class IterationCapExceeded(EpsmultError):
    """A colon-iteration fixpoint was not reached within the cap."""

    code = "iteration-cap-exceeded"


class KNotPrimary(EpsmultError):
    """The multiplier ideal K is not primary for the maximal ideal."""

    code = "k-not-primary"


class PairNotCofinal(EpsmultError):
    """A pair sequence was requested for ideals with infinite quotient length."""

    code = "pair-not-cofinal"


class SessionError(EpsmultError):
    """Base for session-text errors; carries source position."""

    code = "session-error"

    def __init__(self, message: str, line: int, column: int, token: str = ""):
        self.line = line
        self.column = column
        self.token = token
        super().__init__(f"line {line}, column {column}: {message}")

    def record(self) -> dict:
        rec = super().record()
        rec.update(line=self.line, column=self.column, token=self.token)
        return rec


class SessionSyntaxError(SessionError):
    code = "syntax-error"


class UnknownName(SessionError):
    code = "unknown-name"


class ArityError(SessionError):
    code = "arity-error"


class DimensionMismatch(SessionError):
    code = "dimension-mismatch"
