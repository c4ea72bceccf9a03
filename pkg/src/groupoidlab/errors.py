"""Exception and warning types raised across groupoidlab."""

from __future__ import annotations


class GroupoidLabError(Exception):
    """Base class for every error raised by the library.

    Parsers set ``source`` and ``line`` on validation errors so messages carry file context.
    """

    source: str | None = None
    line: int | None = None

    def __str__(self):
        text = super().__str__()
        if isinstance(self, ParseError) or (self.source is None and self.line is None):
            return text
        where = f"{self.source or '<input>'}:{self.line}:" if self.line else f"{self.source}:"
        return f"{where} {text}"


class AxiomViolation(GroupoidLabError):
    def __init__(self, axiom, witness, message: str = ""):
        self.axiom = axiom
        self.witness = tuple(witness)
        text = f"axiom {axiom} violated at {self.witness}"
        super().__init__(f"{text}: {message}" if message else text)


class MissingComposition(GroupoidLabError):
    def __init__(self, a, b):
        self.witness = (a, b)
        super().__init__(f"composable pair ({a}, {b}) has no comp entry")


class ParseError(GroupoidLabError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class ParentMismatch(GroupoidLabError):
    pass


class NotANormalizer(GroupoidLabError):
    pass


class NotABisection(GroupoidLabError):
    pass


class NotASubalgebra(GroupoidLabError):
    pass


class NotNormalizerSpanned(GroupoidLabError):
    def __init__(self, witness, message: str = "subspace is not spanned by normalizers"):
        self.witness = witness
        super().__init__(f"{message}: {witness}")


class NotASubgroupoid(GroupoidLabError):
    pass


class NotAHomomorphism(GroupoidLabError):
    def __init__(self, s, t, point):
        self.witness = (s, t, point)
        super().__init__(f"alpha_{s}{t} != alpha_{s} o alpha_{t} at point {point}")


class CoverageFailure(GroupoidLabError):
    def __init__(self, point):
        self.witness = point
        super().__init__(f"point {point} lies in no idempotent domain")


class NotACocycle(GroupoidLabError):
    def __init__(self, witness, message: str = "homomorphism law fails"):
        self.witness = tuple(witness)
        super().__init__(f"{message} at {self.witness}")


class NotAPartition(GroupoidLabError):
    def __init__(self, arrow, fibers):
        self.witness = (arrow, tuple(fibers))
        super().__init__(f"arrow {arrow} lies in {len(fibers)} fibers {tuple(fibers)}")


class GradingNotCocyclic(GroupoidLabError):
    pass


class BudgetExceeded(GroupoidLabError):
    pass


class CounterexampleFound(GroupoidLabError):
    def __init__(self, witness, message: str = "counterexample found"):
        self.witness = witness
        super().__init__(f"{message}: {witness}")


class HypothesisWarning(UserWarning):
    """A theorem hypothesis (surjectivity, minimality) does not hold."""


class EffectivenessWarning(UserWarning):
    """A check that presumes an effective groupoid ran on a non-effective one."""
