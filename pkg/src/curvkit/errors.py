"""Exception hierarchy. Everything a user can trigger derives from CurvkitError."""


class CurvkitError(Exception):
    pass


class ParseError(CurvkitError, ValueError):
    pass


class ValidationError(CurvkitError, ValueError):
    pass


class MissingFile(CurvkitError, FileNotFoundError):
    pass


class InconsistentIndicator(CurvkitError, ValueError):
    pass


class DisconnectedGraph(CurvkitError, ValueError):
    def __init__(self, msg="graph is disconnected"):
        super().__init__(msg)


class FactorizationError(CurvkitError, ArithmeticError):
    pass


class ConvergenceFailure(CurvkitError, ArithmeticError):
    pass


class MultipleZeroEigenvalues(CurvkitError, ValueError):
    pass


class IsolatedNode(CurvkitError, ValueError):
    pass


class InfeasibleTransport(CurvkitError, ValueError):
    pass


class InvalidSpec(CurvkitError, ValueError):
    pass


class GenerationFailure(CurvkitError, RuntimeError):
    pass


class TooFewSamples(CurvkitError, ValueError):
    pass


class NoUniqueHub(CurvkitError, ValueError):
    pass


class MisalignedCurvature(CurvkitError, ValueError):
    pass


class ShapeMismatch(CurvkitError, ValueError):
    pass
