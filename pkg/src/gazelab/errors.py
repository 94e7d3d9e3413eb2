"""Exception hierarchy for the engine.

Every error raised by the public API derives from :class:`EngineError`, so
callers (notably the CLI) can catch one type, print the message, and exit
nonzero.  Errors raised while reading line-oriented files carry the 1-based
line number that triggered them.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, *, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(EngineError):
    """A record is malformed: missing field, wrong type, or out-of-range value."""


class OrderError(EngineError):
    """Frame indices in a stream are not strictly increasing."""


class GeometryError(EngineError):
    """A geometric value is invalid (degenerate box, non-finite coordinate...)."""


class DuplicateError(EngineError):
    """Two records claim the same key, e.g. one annotator labelling the same
    (frame, person) twice."""


class InsufficientFrames(EngineError):
    """Seat initialization could not collect enough usable frames."""


class DegenerateGeometry(EngineError):
    """Head positions admit no unambiguous clockwise ordering."""


class SubjectAbsent(EngineError):
    """A behaviour decision was requested for a person with no tracked head."""


class EmptyInput(EngineError):
    """An operation that needs at least one record received none."""


class DegenerateBlocks(EngineError):
    """A statistical test received blocks it cannot rank (fewer than two
    treatments, or no blocks at all)."""


class InsufficientData(EngineError):
    """A model-fitting routine received fewer training rows than it can use."""


class TooFewSamples(EngineError):
    """Cross-validation was asked for more folds than there are samples."""


class SpecError(EngineError):
    """A scene or noise specification is invalid or unrealizable."""


class MissingKeypoints(EngineError):
    """A feature vector was requested for a head detection without keypoints."""
