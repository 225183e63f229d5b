"""Error taxonomy shared across the package.

ContractError: a caller violated a documented precondition.
ValidationError: malformed user input (context files, element syntax, CLI args).
ResourceError: a computation exceeded its step budget.
"""


class DyerLashofError(Exception):
    pass


class ContractError(DyerLashofError):
    pass


class ValidationError(DyerLashofError):
    pass


class ResourceError(DyerLashofError):
    pass
