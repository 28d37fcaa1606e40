"""Exception hierarchy shared by all modules."""


class GatewayLogicError(Exception):
    """Base class for every error raised by this package."""

    code = "Error"


class UnknownVertex(GatewayLogicError, LookupError):
    code = "UnknownVertex"


class UnknownEdge(GatewayLogicError, LookupError):
    code = "UnknownEdge"


class UnknownProposition(GatewayLogicError, LookupError):
    code = "UnknownProposition"


class DisconnectedGraph(GatewayLogicError, ValueError):
    code = "DisconnectedGraph"


class IsBridge(GatewayLogicError, ValueError):
    code = "IsBridge"


class InvalidGraph(GatewayLogicError, ValueError):
    code = "InvalidGraph"


class InvalidSignature(GatewayLogicError, ValueError):
    code = "InvalidSignature"


class FormulaSyntaxError(GatewayLogicError, ValueError):
    """Raised by the formula parser; ``pos`` is the 0-based character offset."""

    code = "SyntaxError"

    def __init__(self, message, text="", pos=0):
        super().__init__(f"{message} at position {pos}")
        self.text = text
        self.pos = pos


class TooManyAtoms(GatewayLogicError, ValueError):
    code = "TooManyAtoms"


class InvalidProtocol(GatewayLogicError, ValueError):
    code = "InvalidProtocol"


class DomainViolation(GatewayLogicError, ValueError):
    code = "DomainViolation"


class StateSpaceTooLarge(GatewayLogicError, ValueError):
    code = "StateSpaceTooLarge"


class NoRunFound(GatewayLogicError, RuntimeError):
    code = "NoRunFound"


class NotARun(GatewayLogicError, ValueError):
    code = "NotARun"


class MalformedInstance(GatewayLogicError, ValueError):
    code = "MalformedInstance"


class TopologyMismatch(GatewayLogicError, ValueError):
    code = "TopologyMismatch"


class InvalidProfile(GatewayLogicError, ValueError):
    code = "InvalidProfile"


class InvalidInput(GatewayLogicError, ValueError):
    code = "InvalidInput"


class NoGammaPath(GatewayLogicError, LookupError):
    code = "NoGammaPath"


class InconsistentProfile(GatewayLogicError, ValueError):
    code = "InconsistentProfile"


class CaseViolation(GatewayLogicError, ValueError):
    code = "CaseViolation"


class NonPositiveScale(GatewayLogicError, ValueError):
    code = "NonPositiveScale"


class FormatError(GatewayLogicError, ValueError):
    """A malformed input document; carries the file path and, when known, a position."""

    code = "FormatError"

    def __init__(self, message, path=None, line=None, column=None):
        where = path or "<input>"
        if line is not None:
            where += f":{line}:{column or 0}"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line
        self.column = column
