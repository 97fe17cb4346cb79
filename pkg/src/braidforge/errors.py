"""Exception hierarchy shared by all braidforge modules.

Rejection-type errors (a checked object failed verification) are kept
distinct from domain errors (the input was malformed or out of range),
since the CLI maps them to different exit codes.
"""


class BraidforgeError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BraidforgeError):
    """A parameter violates a documented precondition."""


class NotPositiveBraid(BraidforgeError):
    """An operation requiring a positive braid word met a negative letter."""


class NotAKnot(BraidforgeError):
    """The braid closure has more than one component where a knot is required."""


class InternalInvariantViolation(BraidforgeError):
    """An internal consistency check failed; indicates a defect, not bad input."""


class MoveError(BraidforgeError):
    """A braid move is not applicable at the stated position."""

    def __init__(self, reason, pos=None):
        self.pos = pos
        self.reason = reason
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"move not applicable{where}: {reason}")


class TraceError(BraidforgeError):
    """A move trace failed to replay; carries the index of the failing step."""

    def __init__(self, step, reason):
        self.step = step
        self.reason = reason
        super().__init__(f"trace rejected at step {step}: {reason}")


class UnsupportedCase(BraidforgeError):
    """Parameters match none of the supported conversion conditions."""


class WitnessError(BraidforgeError):
    """An equality witness failed to replay; carries step index and word state."""

    def __init__(self, step, reason, state=None):
        self.step = step
        self.reason = reason
        self.state = state
        super().__init__(f"witness rejected at step {step}: {reason}")


class CertError(BraidforgeError):
    """A certificate failed validation; carries the index of the bad node."""

    def __init__(self, node, reason):
        self.node = node
        self.reason = reason
        super().__init__(f"certificate rejected at node {node}: {reason}")


class CertGenError(BraidforgeError):
    """Certificate generation failed partway; carries the partial derivation."""

    def __init__(self, reason, partial=None):
        self.partial = partial
        super().__init__(reason)


class UnsupportedPresentation(BraidforgeError):
    """A presentation is outside the supported shape (deficiency, homology)."""
