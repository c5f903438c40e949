"""Exception hierarchy shared by all scenq modules.

Every error carries a stable machine-readable name (the class name) that the
CLI prints on stderr and the HTTP service returns in structured bodies.
"""


class ScenqError(Exception):
    """Base class for all scenq errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class InputError(ScenqError):
    """Anything wrong with user-supplied data; maps to exit code 2 / HTTP 4xx."""


class MalformedDocument(InputError):
    """The payload is not syntactically valid for its format."""


class SchemaViolation(InputError):
    """Syntactically valid payload with missing/ill-typed/inconsistent fields."""


class ValidationFailure(InputError):
    """A structurally parsed map violates a scenario-map invariant."""


class DuplicateId(ValidationFailure):
    pass


class DanglingConsequence(ValidationFailure):
    pass


class EmptyAlternative(ValidationFailure):
    pass


class UnreachableAlternative(ValidationFailure):
    """A designated alternative reaches no designated consequence."""


class LevelOutOfRange(InputError):
    """Requested connectivity level outside 0..P."""


class InvalidBand(InputError):
    """Line-graph dimension band is negative or inverted."""


class NoSharedFaces(ScenqError):
    """No pair of hyperedges intersects, so levels 0..P do not exist."""


class ZeroClassCount(ScenqError):
    """A class count of zero reached the complexity evaluator."""
