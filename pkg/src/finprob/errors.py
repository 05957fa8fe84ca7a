"""Exception hierarchy shared by every finprob module."""

from __future__ import annotations


class ProbError(Exception):
    """Base class for all finprob errors.

    ``pos`` is an optional ``(line, column)`` pair, filled in when the error
    is raised while evaluating source text.
    """

    def __init__(self, message: str, pos: tuple[int, int] | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.pos = pos

    def __str__(self) -> str:
        if self.pos is None:
            return self.message
        return f"{self.pos[0]}:{self.pos[1]}: {self.message}"


class SpaceMismatch(ProbError):
    pass


class EmptyFamily(ProbError):
    pass


class SizeLimit(ProbError):
    pass


class NotDisjoint(ProbError):
    def __init__(self, message: str, pair: tuple[int, int], pos=None) -> None:
        super().__init__(message, pos)
        self.pair = pair


class NotMeasurable(ProbError):
    pass


class NotAPartition(ProbError):
    pass


class ConditionOnNull(ProbError):
    pass


class PrefixNull(ProbError):
    def __init__(self, message: str, prefix_length: int, pos=None) -> None:
        super().__init__(message, pos)
        self.prefix_length = prefix_length


class EvidenceNull(ProbError):
    pass


class IndexOutOfRange(ProbError):
    pass


class LengthMismatch(ProbError):
    pass


class InvalidPrior(ProbError):
    pass


class InvalidLikelihood(ProbError):
    pass


class InvalidRational(ProbError, ValueError):
    pass


class InvalidWeight(ProbError):
    """Raised when declared weights do not form a probability measure."""

    def __init__(self, message: str, report=None, pos=None) -> None:
        super().__init__(message, pos)
        self.report = report


class DuplicateName(ProbError):
    pass


class UnknownName(ProbError):
    pass


class ArityError(ProbError):
    pass


class ProbSyntaxError(ProbError):
    """Parse failure with a 1-based position and the set of tokens expected there."""

    def __init__(
        self,
        message: str,
        pos: tuple[int, int],
        expected: tuple[str, ...] = (),
    ) -> None:
        super().__init__(message, pos)
        self.expected = expected

    @property
    def line(self) -> int:
        return self.pos[0]

    @property
    def column(self) -> int:
        return self.pos[1]
