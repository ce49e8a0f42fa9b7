"""Exception types shared across the package."""


class LambdaTreeError(Exception):
    """Base class for every error raised by this package."""


class TooFewResidues(LambdaTreeError):
    pass


class HenselFails(LambdaTreeError):
    pass


class DegenerateTriple(LambdaTreeError):
    pass


class DegeneratePair(LambdaTreeError):
    pass


class PoleInput(LambdaTreeError):
    pass


class IdentityInput(LambdaTreeError):
    pass


class NotNilpotentDistance(LambdaTreeError):
    pass


class TooFewPoints(LambdaTreeError):
    pass


class DuplicatePoint(LambdaTreeError):
    pass


class UnknownVertex(LambdaTreeError):
    pass


class NotNested(LambdaTreeError):
    pass


class EmptyWord(LambdaTreeError):
    pass


class NotStabilized(LambdaTreeError):
    def __init__(self, depth, message=None):
        self.depth = depth
        super().__init__(message or f"quotient graph not stabilized at depth {depth}")


class NoNilpotentEdgeInCycle(LambdaTreeError):
    pass


class UnsupportedExtension(LambdaTreeError):
    """Odd weights spread over several classes mod 2 would need more than one square root."""


class UnsupportedFormat(LambdaTreeError):
    pass


class NotVerified(LambdaTreeError):
    pass
