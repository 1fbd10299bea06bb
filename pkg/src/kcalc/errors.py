"""Exception types shared across modules."""


class KCalcError(Exception):
    pass


class StructuralError(KCalcError):
    """Malformed input: shapes, maps that do not respect relations, cycles."""


class VirtualCharacterError(KCalcError):
    """An operation defined only on honest representations got a virtual one."""


class PreconditionError(KCalcError):
    """A hypothesis of the underlying statement is not met."""


class IncompleteError(KCalcError):
    """A bounded search or window did not certify its own answer."""

    def __init__(self, message, *payload):
        super().__init__(message)
        self.payload = payload


class WindowTooSmallError(KCalcError):
    pass


class OutOfScopeError(KCalcError):
    pass


class DataError(KCalcError):
    """Input data is inconsistent (bad tables, failed identities)."""
