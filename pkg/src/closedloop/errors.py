"""
Errors raised by closedloop. Each class carries the process exit code the CLI
uses when the error escapes a subcommand.
"""

EXIT_PASS = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


class ClosedLoopError(Exception):
    exit_code = EXIT_RUNTIME


class InvalidInput(ClosedLoopError):
    pass


class PartitionMismatch(ClosedLoopError):
    pass


class ShapeMismatch(ClosedLoopError):
    pass


class RankDeficient(ClosedLoopError):
    pass


class InvalidConfig(ClosedLoopError):
    exit_code = EXIT_CONFIG


class ParseError(ClosedLoopError):
    """
    Malformed dataset, matrix or sidecar file. `line` is 1-based and may be
    None when the problem is not tied to a line (eg. a missing JSON field).
    """

    exit_code = EXIT_CONFIG

    def __init__(self, path, message, line=None, field=None):
        self.path = str(path)
        self.line = line
        self.field = field
        where = self.path
        if line is not None:
            where = f"{where}:{line}"
        if field is not None:
            where = f"{where} [{field}]"
        super().__init__(f"{where}: {message}")


class ConfigError(ClosedLoopError):
    """
    Invalid experiment configuration. `key` is the dotted path of the
    offending key, eg. "train.lr_encoder".
    """

    exit_code = EXIT_CONFIG

    def __init__(self, key, message, path=None):
        self.key = key
        self.path = None if path is None else str(path)
        prefix = f"{self.path}: " if self.path else ""
        super().__init__(f"{prefix}{key}: {message}")


class ProjectionDidNotConverge(ClosedLoopError):
    def __init__(self, worst_violation, sweeps):
        self.worst_violation = worst_violation
        self.sweeps = sweeps
        super().__init__(
            "projection did not converge after {} sweeps (worst relative violation {:.3e})".format(
                sweeps, worst_violation
            )
        )


class AssumptionViolated(ClosedLoopError):
    def __init__(self, assumption, detail=""):
        self.assumption = assumption
        message = f"assumption violated: {assumption}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class Diverged(ClosedLoopError):
    """
    Non-finite utility during training. Carries the last iterate whose
    utilities were finite.
    """

    def __init__(self, encoder, decoder, step):
        self.encoder = encoder
        self.decoder = decoder
        self.step = step
        super().__init__(f"training diverged at outer step {step}")
