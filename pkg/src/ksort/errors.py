"""Exception hierarchy.  Every error raised on bad input derives from KSortError."""


class KSortError(ValueError):
    """Base class; the CLI maps these to a nonzero exit status."""

    code = "error"


class RelationError(KSortError):
    code = "relation"


class UnknownModelError(KSortError, KeyError):
    code = "unknown-model"

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return ValueError.__str__(self)


class MatchmakingError(KSortError):
    code = "matchmaking"


class VoteError(KSortError):
    code = "vote"


class StaleBattleError(KSortError):
    code = "stale-battle"


class QuadratureError(KSortError):
    code = "quadrature"


class ConfigError(KSortError):
    code = "config"


class ParseError(KSortError):
    code = "parse"

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        if line is not None:
            prefix = f"line {line}"
            if field:
                prefix += f", field {field!r}"
            message = f"{prefix}: {message}"
        super().__init__(message)
        self.line = line
        self.field = field
