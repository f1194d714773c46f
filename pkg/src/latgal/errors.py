"""Exception hierarchy.

Every domain failure derives from :class:`LatticeError` and may carry a
``witness`` (the offending elements, pair, or tuple) so callers and the CLI
can report *why* something failed, not just that it did.
"""


class LatticeError(Exception):
    """Base class for all domain errors raised by latgal."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

    def to_dict(self):
        out = {"error": type(self).__name__, "message": str(self)}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


# lattice construction
class CycleError(LatticeError):
    pass


class NotALattice(LatticeError):
    pass


class NoBounds(LatticeError):
    pass


class SizeLimit(LatticeError):
    pass


# closure / interior systems
class NotClosed(LatticeError):
    pass


class MissingBound(LatticeError):
    pass


class NotClosureOperator(LatticeError):
    pass


class NotIso(LatticeError):
    pass


# maps and Galois connections
class NotSupPreserving(LatticeError):
    pass


class NotInfPreserving(LatticeError):
    pass


class DomainMismatch(LatticeError):
    pass


# aggregation
class BoundaryViolation(LatticeError):
    pass


class HostMismatch(LatticeError):
    pass


class ArityMismatch(LatticeError):
    pass


# decompositions
class NotSublattice(LatticeError):
    pass


class NotDistributive(LatticeError):
    pass


class NotSubdirect(LatticeError):
    pass


# formal concept analysis
class ParseError(LatticeError):
    pass


class MissingCell(ParseError):
    pass


class UnmappedToken(LatticeError):
    pass


class NotComplete(LatticeError):
    pass


class NotBinary(LatticeError):
    pass
