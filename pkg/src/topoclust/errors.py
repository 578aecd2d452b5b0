"""Exception hierarchy shared by all topoclust modules."""


class TopoClustError(Exception):
    pass


class MissingPath(TopoClustError, FileNotFoundError):
    pass


class ParseError(TopoClustError, ValueError):
    def __init__(self, file, line, message="malformed input"):
        self.file = str(file)
        self.line = line
        super().__init__(f"{self.file}:{line}: {message}")


class DimensionMismatch(TopoClustError, ValueError):
    def __init__(self, file, message="grid does not match the ensemble"):
        self.file = str(file)
        super().__init__(f"{self.file}: {message}")


class NonFiniteValue(TopoClustError, ValueError):
    def __init__(self, file, index):
        self.file = str(file)
        self.index = index
        super().__init__(f"{self.file}: non-finite value at index {index}")


class InvalidParameter(TopoClustError, ValueError):
    pass


class FamilyMismatch(TopoClustError, ValueError):
    pass


class EmptyInput(TopoClustError, ValueError):
    pass


class InvalidK(TopoClustError, ValueError):
    pass


class DegenerateVariance(TopoClustError, ArithmeticError):
    pass


class KEqualsN(TopoClustError, ValueError):
    pass


class InconsistentInputs(TopoClustError, ValueError):
    pass
