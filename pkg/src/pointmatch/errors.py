"""Exception types shared across the package."""


class PointMatchError(Exception):
    """Base class for all errors raised by this package."""


class MalformedRle(PointMatchError):
    """RLE counts are inconsistent with the stated frame dimensions."""


class DimsMismatch(PointMatchError):
    """Two mask sequences disagree in length or frame dimensions."""


class DimMismatch(PointMatchError):
    """Embedding vectors disagree in dimensionality."""


class ShapeError(PointMatchError):
    """Cost matrix has more rows than columns."""


class NonFiniteCost(PointMatchError):
    """Cost matrix contains NaN or infinite entries."""


class TooLarge(PointMatchError):
    """Instance is too big for exhaustive enumeration."""


class EmptyRegion(PointMatchError):
    """The requested sampling region contains no pixels."""


class TooManyPoints(PointMatchError):
    """More points requested than the sampling region holds."""


class RaggedFrames(PointMatchError):
    """Per-frame proposal counts differ within one video."""


class MissingConfidence(PointMatchError):
    """Confidence score requested but not available on every frame."""


class OutOfBoundsPoint(PointMatchError):
    """Annotated point lies outside the frame."""


class NotEnoughProposals(PointMatchError):
    """Fewer candidate tracks than annotated objects."""


class NoPoints(PointMatchError):
    """An annotated object carries no points on any present frame."""


class DegenerateObject(PointMatchError):
    """A configured scene object is never visible."""


class UnknownObject(PointMatchError):
    """Referenced object id does not exist in the ground truth."""


class EmptyEval(PointMatchError):
    """Evaluation requested over an empty object set."""


class SchemaError(PointMatchError):
    """A document failed validation.

    Carries the file label, the JSON path of the offending node and a
    human-readable reason.
    """

    def __init__(self, file: str, path: str, reason: str):
        self.file = file
        self.path = path
        self.reason = reason
        super().__init__(f"{file}: {path}: {reason}")


class PipelineError(PointMatchError):
    """A pipeline stage failed; message carries the stage name."""
