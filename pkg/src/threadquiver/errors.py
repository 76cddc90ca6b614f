"""Exception hierarchy shared by all modules."""


class ThreadQuiverError(Exception):
    """Base class for all library errors."""


# -- linear orders ---------------------------------------------------------

class OrderError(ThreadQuiverError):
    pass


class IllTypedAddress(OrderError):
    """Address does not fit the shape of the order expression."""


class SymbolicOrderOpaque(OrderError):
    """Operation would need concrete elements of a labeled (opaque) order."""


# -- quivers ---------------------------------------------------------------

class QuiverError(ThreadQuiverError):
    pass


class QuiverSyntaxError(QuiverError):
    def __init__(self, line, column, expected):
        self.line = line
        self.column = column
        self.expected = expected
        super().__init__(f"line {line}, column {column}: expected {expected}")


class UnknownVertex(QuiverError):
    pass


class DuplicateId(QuiverError):
    pass


class CyclicQuiver(QuiverError):
    pass


class UnknownThread(QuiverError):
    pass


class NotAZigZagTail(QuiverError):
    pass


# -- derived engine --------------------------------------------------------

class EngineError(ThreadQuiverError):
    pass


class QuiverMismatch(EngineError):
    pass


class NegativeExt(EngineError):
    """hom - euler came out negative; signals a convention bug."""


class NotIndecomposable(EngineError):
    pass


# -- windows and metric ----------------------------------------------------

class NotInWindow(ThreadQuiverError):
    pass


# -- sections --------------------------------------------------------------

class SectionError(ThreadQuiverError):
    pass


class SectionInvalid(SectionError):
    pass


class NonDirectingCenter(SectionError):
    pass


class NotUniqueOnOrbit(SectionError):
    pass


class WindowTooSmall(SectionError):
    pass


class InconclusiveAtWindow(SectionError):
    pass


class NotPicked(SectionError):
    pass


class InconclusiveDistance(SectionError):
    pass


class NoAnchorInWindow(SectionError):
    pass


class AnchorNotUnique(SectionError):
    """A ray reported two anchors; invariant violation, model bug."""
