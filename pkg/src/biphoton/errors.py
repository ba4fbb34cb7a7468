"""Package-specific error types."""


class TruncationError(RuntimeError):
    """Low-rank factorization could not reach the requested accuracy."""


class DegenerateInterferenceError(RuntimeError):
    """The interferometer output amplitude vanished (nothing reaches the
    final beamsplitter), so a conditional coincidence rate is undefined."""
