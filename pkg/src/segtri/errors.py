class ValidationError(ValueError):
    """An object violates its invariants (bad masses, weights, shapes)."""


class DecompositionError(ValueError):
    """No decomposition exists; the caller's precondition does not hold."""


class SynthesisAnomaly(RuntimeError):
    """A construction produced colliding markets where no fallback applies."""
