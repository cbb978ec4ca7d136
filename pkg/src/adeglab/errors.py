"""Exception taxonomy shared across the package.

CLI exit-code mapping: UsageError -> 1, BudgetError (and subclasses) -> 2,
InvariantError -> 3.  Everything else is a plain bug and propagates.
"""


class AdeglabError(Exception):
    """Base class for all package-specific errors."""


class UsageError(AdeglabError):
    """Malformed input: bad expression syntax, arity mismatch, bad rational."""


class ArityError(UsageError):
    """Operand arities are inconsistent."""


class ParseError(UsageError):
    """Syntax error in a function expression; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class BudgetError(AdeglabError):
    """A configured resource cap was exceeded (table size, LP size, retries)."""


class SearchExhausted(BudgetError):
    """A randomized search ran out of its retry budget; carries statistics."""

    def __init__(self, message: str, stats: dict):
        super().__init__(f"{message}; stats={stats}")
        self.stats = stats


class InvariantError(AdeglabError):
    """An internal certificate or invariant failed re-verification.

    This is never swallowed: it means the implementation produced an answer
    it could not prove, which must surface as a hard failure.
    """


class PreconditionError(UsageError):
    """An operation was called outside its documented domain."""
