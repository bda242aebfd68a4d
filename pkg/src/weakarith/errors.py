"""Shared exception base so the CLI can map failures to exit codes uniformly."""


class WorkbenchError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(WorkbenchError):
    """Ill-formed textual input: formulas, structure files, proof files, pair specs."""
