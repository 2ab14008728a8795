"""Exception hierarchy.  Every error raised on purpose derives from
:class:`LatticeError`; ``witness`` carries the offending data when there is
any."""


class LatticeError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EmptyLattice(LatticeError):
    pass


class NotAPoset(LatticeError):
    pass


class NotALattice(LatticeError):
    pass


class ForeignElement(LatticeError):
    pass


class ParameterOutOfRange(LatticeError):
    pass


class TooLarge(LatticeError):
    pass


class ShapeMismatch(LatticeError):
    pass


class KernelNonEmpty(LatticeError):
    pass


class KindViolation(LatticeError):
    pass


class ActionInvalid(LatticeError):
    pass


class NotContinuous(LatticeError):
    pass


class NoComparablePair(LatticeError):
    pass


# input-side errors (text formats, CLI)


class ParseError(LatticeError):
    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class UnresolvedReference(LatticeError):
    pass


class DuplicateName(LatticeError):
    pass


class UnknownVerb(LatticeError):
    pass
