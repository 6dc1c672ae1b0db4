"""Exception hierarchy shared across the package."""


class SplitbinError(Exception):
    """Base class for all errors raised by splitbin."""


class StructuralError(SplitbinError):
    """Malformed input object (unknown item id, wrong bin count, ...).

    Distinct from mere infeasibility: a structurally broken packing is
    not scored at all.
    """


class FormatError(SplitbinError):
    """Unparseable instance/packing file or size string."""


class InfeasibleInstanceError(SplitbinError):
    """The instance admits no feasible packing (n > k*m)."""


class DegenerateInstanceError(SplitbinError):
    """Total size is zero; the guess interval collapses."""


class ResourceCapError(SplitbinError):
    """A configured enumeration/search cap was exceeded.

    Never silently converted into an infeasibility claim.
    """


class PreconditionError(SplitbinError):
    """A documented operation precondition does not hold for the input."""


class InternalError(SplitbinError):
    """A postcondition that should hold by construction failed.

    Indicates a bug in the solver, not in the caller's input.
    """
