"""Exception types shared across the package."""


class TopologyError(ValueError):
    """Malformed space, family tag, or catalog request."""


class SeparationError(ValueError):
    """A regular separation required by a construction does not exist."""

    def __init__(self, message, x=None, y=None):
        super().__init__(message)
        self.pair = (x, y)


class IllegalMove(RuntimeError):
    """A strategy made a move the rules forbid; ``blame`` names the player."""

    def __init__(self, message, blame, transcript=None):
        super().__init__(message)
        self.blame = blame
        self.transcript = transcript


class PreconditionError(ValueError):
    """A transformer's input does not satisfy the hypotheses it needs."""

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage
