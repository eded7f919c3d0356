"""
Custom exceptions for graph-limit computations.

These exceptions separate bad input from exhausted budgets and empty
ensembles so that callers (and the CLI exit codes) can react differently.
"""


class GraphLimitError(Exception):
    """Base exception for graphlim operations."""

    exit_code = 1


class ValidationError(GraphLimitError):
    """Input failed validation or violated a precondition."""

    exit_code = 2


class FileOperationError(GraphLimitError):
    """File operation failed."""

    exit_code = 2


class BudgetExceededError(GraphLimitError):
    """Exhaustive computation would exceed the allowed budget."""

    exit_code = 3

    def __init__(self, message: str, required: int | None = None, budget: int | None = None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class InfeasibleEnsembleError(GraphLimitError):
    """No configuration satisfies the class-weight constraint."""

    exit_code = 4
