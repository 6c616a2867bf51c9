"""Exception hierarchy shared by the engine, synthesis and verification layers."""


class PermlikeError(Exception):
    """Base class for all errors raised by this package."""


class PresentationError(PermlikeError):
    """A group presentation is malformed or internally inconsistent."""


class NotNormalizingError(PresentationError):
    """A generator does not normalize the cyclic group of the maximal cycle."""


class OutsideScopeError(PermlikeError):
    """The group lies outside the regime handled by the synthesis drivers
    (e.g. the maximal cycle is not self-centralized)."""


class ContradictionError(PermlikeError):
    """A branch that the structure theory rules out was reached.

    These double as deep self-tests: if one is ever raised on a group that
    passed the permutation-like gate, the implementation is wrong.
    """


class SynthesisError(PermlikeError):
    """Synthesis preconditions failed (caller bug, e.g. torsion not normalized)."""


class VerificationError(PermlikeError):
    """A certificate failed verification."""

    def __init__(self, message, word=None):
        super().__init__(message)
        self.word = word
