"""Exception types shared across the package.

The CLI maps these onto exit codes: InputError -> 2, ResourceError -> 3.
Sound negatives (pattern not found, graph not dense, retries exhausted)
are ordinary return values or RetriesExhausted and map to exit code 1.
"""


class InputError(ValueError):
    """A caller-supplied value violates a documented precondition."""


class ResourceError(RuntimeError):
    """The request is valid but exceeds a documented size or budget gate."""


class RetriesExhausted(RuntimeError):
    """A randomized construction failed every attempt.

    Carries the best attempt's diagnostics so callers can see which
    deterministic check kept failing.
    """

    def __init__(self, message: str, best_attempt: dict | None = None):
        super().__init__(message)
        self.best_attempt = best_attempt or {}
