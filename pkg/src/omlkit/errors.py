"""Exception hierarchy shared by every omlkit module."""


class OMLError(Exception):
    """Base class for all omlkit errors."""


class ElementError(OMLError, IndexError):
    """An element or node id is out of range."""


class StructuralError(OMLError):
    """The input is not the structure it claims to be (not a lattice, not orthomodular, ...)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(OMLError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceError(OMLError):
    """A configured search or enumeration budget was exhausted."""


class ReconstructionError(OMLError):
    """A reconstruction stage could not complete.

    ``stage`` names the failing stage and ``witness`` carries the poset nodes
    or class elements that triggered the failure.
    """

    def __init__(self, stage, message, witness=None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.reason = message
        self.witness = witness


class NotBSAPosetError(ReconstructionError):
    def __init__(self, message, witness=None):
        super().__init__("grade", f"not a BSA poset: {message}", witness)
