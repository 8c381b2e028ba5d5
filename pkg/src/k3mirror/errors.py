"""Exception hierarchy shared by every module."""


class K3MirrorError(Exception):
    pass


class ParameterError(K3MirrorError, ValueError):
    """Invalid constructor argument or malformed input."""


class DomainError(K3MirrorError, ValueError):
    """Input outside an operation's mathematical domain."""


class DegenerateLatticeError(DomainError):
    def __init__(self, radical_rank, message=None):
        self.radical_rank = radical_rank
        super().__init__(message or f"degenerate Gram matrix (radical rank {radical_rank})")


class CapacityError(K3MirrorError):
    """An enumeration would exceed its configured bound."""


class ConsistencyError(K3MirrorError):
    """An internal cross-check failed; indicates a bug or a bad formula."""
