"""Exception hierarchy shared across the package."""


class MengerError(Exception):
    """Base class for all errors raised by this package."""


class CapacityError(MengerError):
    """A configured size cap (table entries, closure tables, partitions, subsets) was exceeded."""


class MissingEntryError(MengerError):
    """Operation table lacks an entry; carries the first absent argument tuple."""

    def __init__(self, entry):
        super().__init__(f"missing entry for {entry}")
        self.entry = entry


class DuplicateEntryError(MengerError):
    """Operation table defines some argument tuple twice."""

    def __init__(self, entry):
        super().__init__(f"duplicate entry for {entry}")
        self.entry = entry


class UnknownElementError(MengerError):
    """A name or index does not denote an element of the carrier."""


class NotSuperassociativeError(MengerError):
    """Operation table violates superassociativity; carries the first counterexample.

    counterexample = (f, gs, hs, lhs, rhs) in lexicographic scan order.
    """

    def __init__(self, counterexample):
        f, gs, hs, lhs, rhs = counterexample
        super().__init__(
            f"superassociativity fails at f={f} g={gs} h={hs}: lhs={lhs} rhs={rhs}"
        )
        self.counterexample = counterexample


class TermSyntaxError(MengerError):
    """Text does not parse as a term."""


class ArityError(TermSyntaxError):
    """A bracket node has the wrong number of arguments."""


class MultipleVariablesError(TermSyntaxError):
    """More than one occurrence of the variable."""


class NoVariableError(TermSyntaxError):
    """The variable does not occur."""
