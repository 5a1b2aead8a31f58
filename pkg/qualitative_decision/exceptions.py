from typing import Any, Optional


class QDTError(Exception):
    """Base class for every error raised by the decision engine."""


class ConfigurationError(QDTError):
    pass


class ScaleError(QDTError):
    pass


class CapacityError(QDTError):
    """Invalid capacity table. ``witness`` is the violating subset pair, if any."""

    def __init__(self, message: str, witness: Optional[tuple] = None):
        super().__init__(message)
        self.witness = witness


class DistributionError(QDTError):
    pass


class FrameError(QDTError):
    pass


class BudgetExceeded(QDTError):
    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what}: quantifier space of size {size} exceeds budget {budget}")
        self.size = size
        self.budget = budget


class RelationError(QDTError):
    def __init__(self, message: str, verdict: Any = None):
        super().__init__(message)
        self.verdict = verdict


class PreconditionError(QDTError):
    """Synthesis refused because the relation fails one of the required axioms."""

    def __init__(self, axiom: Any, verdict: Any):
        super().__init__(f"relation does not satisfy {axiom.label}")
        self.axiom = axiom
        self.verdict = verdict


class SynthesisError(QDTError):
    """A synthesized representation failed its own verification.

    The representation theorems guarantee success on admissible input, so
    this always signals a defect in the engine.
    """


class DocumentError(QDTError):
    def __init__(self, message: str, location: Optional[str] = None):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location
