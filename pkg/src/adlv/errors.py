"""Exception hierarchy shared by all modules.

Each class carries a short ``code`` used by the CLI diagnostics.
"""


class ADLVError(Exception):
    code = "error"


class InvalidInput(ADLVError, ValueError):
    code = "invalid-input"


class InvalidBlock(InvalidInput):
    code = "invalid-block"


class InvalidLevi(InvalidInput):
    code = "invalid-levi"


class InvalidParameter(InvalidInput):
    code = "invalid-parameter"


class InconsistentClass(ADLVError):
    code = "inconsistent-class"


class InconsistentInput(ADLVError):
    code = "inconsistent-input"


class UnsupportedDatum(ADLVError):
    code = "unsupported-datum"


class PrecisionInsufficient(ADLVError):
    code = "precision-insufficient"


class BudgetExceeded(ADLVError):
    code = "budget-exceeded"
