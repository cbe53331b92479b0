"""Error types. Every error carries a stable upper-case ``code`` that the
command line reports verbatim."""


class WdistError(Exception):
    code = "WDIST_ERROR"

    def __init__(self, message: str = "", **info):
        super().__init__(message or self.code)
        self.info = info


class DegreeTooLow(WdistError):
    code = "DEGREE_TOO_LOW"


class IdenticallyZero(WdistError):
    code = "IDENTICALLY_ZERO"


class InputDefective(WdistError):
    code = "INPUT_DEFECTIVE"


class NotASquare(WdistError):
    code = "NOT_A_SQUARE"


class JacobiHypothesisViolated(WdistError):
    code = "JACOBI_HYPOTHESIS_VIOLATED"


class MultipleZeroZ(WdistError):
    code = "MULTIPLE_ZERO_Z"


class ComplexLambda(WdistError):
    code = "COMPLEX_LAMBDA"


class SingularValueMismatch(WdistError):
    code = "SINGULAR_VALUE_MISMATCH"


class ClusteredSingularValues(WdistError):
    code = "CLUSTERED_SINGULAR_VALUES"


class EliminationDegenerate(WdistError):
    code = "ELIMINATION_DEGENERATE"


class CofactorSingular(WdistError):
    code = "COFACTOR_SINGULAR"


class NegativeB(WdistError):
    code = "NEGATIVE_B"


class InvalidParams(WdistError):
    code = "INVALID_PARAMS"


class NotPublished(WdistError):
    code = "NOT_PUBLISHED"


class MalformedInput(WdistError):
    code = "MALFORMED_INPUT"
