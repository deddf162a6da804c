"""Exception hierarchy shared across the package."""


class FmgamesError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(FmgamesError):
    """A text file (.arena/.skel/.nfa/.pref/.strat) could not be parsed."""


class BlockingStateError(FmgamesError):
    def __init__(self, state):
        super().__init__(f"state {state!r} has no outgoing edge")
        self.state = state


class DanglingEdgeError(FmgamesError):
    """An edge references an unknown state or color."""


class NotAChoiceStateError(FmgamesError):
    """Edge splitting requires a state with at least two outgoing edges."""


class BadPartitionError(FmgamesError):
    """Edge partition at a state must be a non-empty proper subset."""


class AlphabetMismatchError(FmgamesError):
    """Two objects declare incompatible color alphabets."""


class UnknownColorError(FmgamesError):
    """A color id or name falls outside the declared alphabet."""


class NotQualitativeError(FmgamesError):
    """Operation needs a win/lose relation, got a quantitative one."""


class NotOnePlayerError(FmgamesError):
    """Supremum search needs an arena controlled by a single player."""


class EmptyLanguageError(FmgamesError):
    """Gadget construction needs automata with non-empty languages."""


class CertificateMismatchError(FmgamesError):
    """Equilibria can only be mixed when certified from the same states."""


class BudgetExceededError(FmgamesError):
    """An enumeration outgrew its configured budget."""


class SearchExhaustedError(FmgamesError):
    """A bounded search ended without the required witness."""


class CoverViolationError(FmgamesError):
    """A synthesis precondition (prefix-/cyclic-cover) does not hold."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
