"""Exception hierarchy shared by all modules."""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(ToolkitError):
    pass


class MixedFields(ToolkitError):
    pass


class UnsupportedField(ToolkitError):
    pass


class CycleDetected(ToolkitError):
    pass


class InhomogeneousSum(ToolkitError):
    def __init__(self, gate, degrees):
        self.gate = gate
        self.degrees = degrees
        super().__init__(f"sum gate {gate} mixes child degrees {degrees}")


class DanglingOutput(ToolkitError):
    pass


class FieldMismatch(ToolkitError):
    pass


class LengthMismatch(ToolkitError):
    pass


class ShapeMismatch(ToolkitError):
    pass


class SlpSyntaxError(ToolkitError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class UnknownGateRef(ToolkitError):
    pass


class DuplicateId(ToolkitError):
    pass


class NotHomogeneous(ToolkitError):
    pass


class DegreeZeroOutput(ToolkitError):
    pass


class ConstantOutput(ToolkitError):
    pass


class BadParameters(ToolkitError):
    pass


class NotNormalForm(ToolkitError):
    pass


class CapacityExceeded(ToolkitError):
    pass


class DegreeNotRepresentable(ToolkitError):
    pass


class NotTGuarded(ToolkitError):
    pass


class BudgetExceeded(ToolkitError):
    pass


class ResourceLimit(ToolkitError):
    pass


class FieldTooSmall(ToolkitError):
    pass
