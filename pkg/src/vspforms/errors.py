"""Exception hierarchy.

``ContractError`` marks a violated precondition (bad input). The CLI maps it
to exit code 2. ``UnsupportedFieldError`` and ``SearchLimitError`` mean the
library declines to answer rather than guess; the CLI maps them to exit 3.
"""


class ContractError(ValueError):
    """Input violates the documented precondition of an operation."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(message)
        self.pointer = pointer


class UnsupportedFieldError(ContractError):
    """A decision was requested over a field where none is implemented."""


class SearchLimitError(RuntimeError):
    """A bounded search ran out of budget before finding a witness."""


class FactorizationLimitError(RuntimeError):
    """Trial division could not certify a squarefree decomposition."""
