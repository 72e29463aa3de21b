"""Exception types shared across the package.

Parse and validation problems derive from :class:`ValueError`; numerical
failures derive from :class:`ArithmeticError`.  The CLI maps the former to
exit code 2 and the latter to exit code 3.
"""


class ParseError(ValueError):
    """Malformed expression text.  ``offset`` is the byte offset of the problem."""

    def __init__(self, message, index, text=""):
        self.offset = len(text[:index].encode("utf-8")) if text else index
        self.text = text
        offset = self.offset
        super().__init__(f"{message} at offset {offset}")


class EvaluationError(ArithmeticError):
    pass


class PoleError(EvaluationError):
    pass


class BranchPointError(EvaluationError):
    pass


class ExpansionError(ArithmeticError):
    pass


class SeriesError(ArithmeticError):
    pass


class CriticalPointError(SeriesError):
    """The derivative of a map vanishes at the base point."""


class ZeroHopfError(SeriesError):
    """Hopf differential vanishes identically (flat immersion)."""


class UmbilicError(SeriesError):
    """The Hopf differential vanishes at the base point, so no adapted chart exists there."""


class NoRelationFound(ArithmeticError):
    pass


class IllConditionedError(ArithmeticError):
    def __init__(self, message, condition):
        self.condition = condition
        super().__init__(f"{message} (condition number {condition:.3e})")


class QuadratureError(ArithmeticError):
    pass


class TrustRadiusError(ArithmeticError):
    pass
