"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class FieldMismatch(EngineError):
    """Operands live over different prime fields."""


class ShapeMismatch(EngineError):
    """Matrix shapes are incompatible for the requested operation."""


class GroupMismatch(EngineError):
    """Operands belong to different groups or ambient permutation worlds."""


class InvalidGroup(EngineError):
    """A permutation group input is malformed or exceeds the order cap."""


class InvalidRepresentation(EngineError):
    """Generator matrices do not extend to a group homomorphism."""


class InvalidCharacter(EngineError):
    """Scalar generator values do not extend to a 1-dimensional character."""


class NotPSubgroup(EngineError):
    """A subgroup argument is not a p-subgroup for the working prime."""


class NotNormal(EngineError):
    """A quotient construction was asked for a non-normal subgroup."""


class NotOneDimensional(EngineError):
    """character1d was called on a module of dimension != 1."""


class NotAbsolutelyPDivisible(EngineError):
    """The relative-projectivity context requires V = 0 or absolutely p-divisible V."""


class Indeterminate(EngineError):
    """A sampling-bounded search neither found a witness nor exhausted the space."""


class CapExceeded(EngineError):
    """A size cap (group order, End-ring unknowns, search space) was exceeded."""


class DecompositionError(EngineError):
    """Internal certificate failure while splitting a module or complex."""


class NotPPermutation(EngineError):
    """A module (or every term of a complex) was required to have trivial source."""


class NoTrivialSummand(EngineError):
    """The stripped endomorphism complex carries no trivial summand in degree zero."""


class NotIndecomposable(EngineError):
    """An operation defined on indecomposable inputs received a decomposable one."""


class VertexNotSylow(EngineError):
    """The correspondent extraction needs a complex whose vertex is the Sylow class."""


class UnknownExample(EngineError):
    """named_example was asked for a name outside the catalog."""
