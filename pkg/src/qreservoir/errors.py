"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A config value failed validation. Carries the offending field name."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")


class DataError(ValueError):
    """Input data violated a contract (bad row, non-positive price, ...)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DivergenceError(RuntimeError):
    """A generated series left its stable region."""

    def __init__(self, t: int, value: float):
        self.t = t
        self.value = value
        super().__init__(f"series diverged at step {t} (|value| = {value:.3g})")
