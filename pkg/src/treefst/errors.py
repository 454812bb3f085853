"""Exception types shared across the toolkit."""


class TreefstError(Exception):
    """Base class for all toolkit errors."""


class UnknownSymbolError(TreefstError):
    """A symbol or class name is not declared in the symbol table."""


class AlphabetMismatchError(TreefstError):
    """Two machines were combined but do not share a pair inventory."""


class RequiresUnweightedError(TreefstError):
    """Operation defined only for machines whose weights are all zero."""


class RequiresDeterministicError(TreefstError):
    """Operation defined only for deterministic acceptors."""


class RegexSyntaxError(TreefstError):
    """Malformed regular expression; carries the offending position."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class EmptyAtomError(TreefstError):
    """A regex atom lifted to an empty pair set; inventory/class mismatch."""


class TreeFileError(TreefstError):
    """Malformed tree file; message carries file position."""


class PartitionViolationError(TreefstError):
    """No branch of an internal node matched a context during interpretation."""


class UnreachableLeafError(TreefstError):
    """A leaf's intersected context is empty; the leaf can never fire."""


class DegenerateForestError(TreefstError):
    """The compiled forest accepts no string at all."""


class NoParseError(TreefstError):
    """Decoding chain composed to the empty machine."""


class EnumerationBudgetError(TreefstError):
    """Exhaustive enumeration would exceed the configured budget."""
