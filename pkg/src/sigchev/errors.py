"""Exception hierarchy shared by every module of the package."""


class SigchevError(Exception):
    """Base class for all errors raised by sigchev."""


class NonPrimeCharacteristic(SigchevError):
    pass


class ReduciblePolynomial(SigchevError):
    pass


class UnsupportedFactorization(SigchevError):
    """Raised when a factorization request falls outside the declared scope."""


class DuplicateGenerator(SigchevError):
    pass


class NotWellDefined(SigchevError):
    def __init__(self, generator, detail=""):
        self.generator = generator
        super().__init__(f"generator {generator!r} does not satisfy its minimal polynomial{detail}")


class NotFinite(SigchevError):
    pass


class CyclicStructureBroken(SigchevError):
    pass


class ConstantPolynomial(SigchevError):
    pass


class NotStabilized(SigchevError):
    def __init__(self, sequence):
        self.sequence = list(sequence)
        super().__init__(f"degree sequence did not stabilize: {self.sequence}")


class CoefficientNotField(SigchevError):
    pass


class AmbientNotClosed(SigchevError):
    pass


class PreimageNotComputable(SigchevError):
    pass


class FiberNotFinite(SigchevError):
    pass


class ConditionOneFails(SigchevError):
    def __init__(self, component, detail=""):
        self.component = component
        super().__init__(f"kernel condition (i) fails in component {component}: {detail}")


class NotPrimeInScope(SigchevError):
    def __init__(self, component, detail=""):
        self.component = component
        super().__init__(f"component {component} is not certified prime: {detail}")


class BoundExceeded(SigchevError):
    pass


class CommutationFails(SigchevError):
    def __init__(self, generator):
        self.generator = generator
        super().__init__(f"delta and sigma do not commute on {generator!r}")


class NoSigmaStructure(SigchevError):
    pass


class OutOfScope(SigchevError):
    pass


class BaseMismatch(SigchevError):
    pass


class SampleDependent(SigchevError):
    pass


class ScenarioSyntaxError(SigchevError):
    def __init__(self, line, column, expected):
        self.line, self.column, self.expected = line, column, expected
        super().__init__(f"line {line}, column {column}: expected {expected}")


class UnknownName(SigchevError):
    pass


class TypeMismatch(SigchevError):
    pass
