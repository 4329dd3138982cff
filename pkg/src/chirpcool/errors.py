"""Exception types shared across the package."""


class ChirpcoolError(Exception):
    """Base class for package errors."""


class ConfigError(ChirpcoolError):
    """Invalid or incomplete run configuration (CLI exit code 2)."""


class NumericalAbortError(ChirpcoolError):
    """Integration produced an unusable state (CLI exit code 3).

    Raised when a propagated quantity goes non-finite or a structural
    invariant (commutator preservation) drifts beyond tolerance.
    """

    def __init__(self, message, t_fail=None):
        super().__init__(message)
        self.t_fail = t_fail
