"""Exception hierarchy. Every error raised by the library derives from
:class:`MarkovError`, which is itself a ``ValueError``."""


class MarkovError(ValueError):
    pass


class InvalidMatrix(MarkovError):
    pass


class EigenFailure(MarkovError):
    pass


class ExpOverflow(MarkovError):
    pass


class NotConvergent(MarkovError):
    pass


class InvalidPermutation(MarkovError):
    pass


class NotStochastic(MarkovError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotEqualInput(MarkovError):
    pass


class DimMismatch(MarkovError):
    pass


class NoEqualInputRoot(MarkovError):
    pass


class NotComparableLevels(MarkovError):
    pass


class NotLevel(MarkovError):
    pass


class NotMonotone(MarkovError):
    pass


class WrongDimension(MarkovError):
    pass


class NotCyclic(MarkovError):
    pass


class ComplexSpectrum(MarkovError):
    pass


class IllConditioned(MarkovError):
    pass


class DuplicateNode(MarkovError):
    pass


class InvalidFamily(MarkovError):
    pass
