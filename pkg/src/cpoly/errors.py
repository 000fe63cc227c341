"""Exception hierarchy.

Two families matter to callers: ``InputError`` (bad files, bad parameters,
malformed combinatorics; CLI exit code 2) and ``NumericalError`` (a
computation left its certified regime; CLI exit code 3).
"""


class CpolyError(Exception):
    pass


class InputError(CpolyError, ValueError):
    pass


class NumericalError(CpolyError, ArithmeticError):
    pass


# lorentz / moebius / disks

class NotSpacelike(NumericalError):
    pass


class DegenerateSpan(NumericalError):
    pass


class DegenerateBasis(NumericalError):
    pass


class GramMismatch(NumericalError):
    pass


class NotRestricted(NumericalError):
    pass


class NormalNotSpacelike(NumericalError):
    pass


class OffsetOutOfRange(InputError):
    pass


class PolarDegenerate(InputError):
    pass


class PencilHasNoRealPoint(NumericalError):
    pass


class NonPositiveTime(NumericalError):
    pass


class PencilOrthodiskDegenerate(NumericalError):
    pass


class NotDisjoint(NumericalError):
    pass


# combinatorics

class TriangulationError(InputError):
    pass


class TooFewVertices(TriangulationError):
    pass


class EulerViolation(TriangulationError):
    pass


class NonManifoldEdge(TriangulationError):
    pass


class InconsistentOrientation(TriangulationError):
    pass


class NotThreeConnected(TriangulationError):
    pass


# polyhedron predicates and links

class SignAmbiguous(NumericalError):
    pass


class NestedPair(NumericalError):
    pass


class NotHyperbolicAtVertex(NumericalError):
    pass


class AmbiguousClassification(NumericalError):
    pass


class ImproperVertex(NumericalError):
    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


class NotRealizable(NumericalError):
    pass


class NotStrictlyConvex(NumericalError):
    def __init__(self, message, rank=None, expected=None):
        super().__init__(message)
        self.rank = rank
        self.expected = expected


# continuation and congruence

class NotUnitaryEdge(InputError):
    pass


class RankDeficient(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class LeftCertifiedRegion(NumericalError):
    pass


class StepUnderflow(NumericalError):
    pass


class NotLocallyCongruent(CpolyError):
    """Measures differ, so no Möbius map can exist (a property verdict, not a failure)."""


class FaceDegenerate(NumericalError):
    pass


class DivergentTransformSequence(NumericalError):
    pass


# file io / generators

class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


class NormalizationError(InputError):
    pass


class ParamOutOfRange(InputError):
    pass


class GenerationFailed(NumericalError):
    pass
