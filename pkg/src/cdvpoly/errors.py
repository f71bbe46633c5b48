"""Exception hierarchy.

Every error raised by the toolkit derives from :class:`CdvError` so the CLI can
map it to exit code 1 without catching unrelated bugs.
"""


class CdvError(Exception):
    """Base class for input and validation failures."""


# polytope construction
class Unbounded(CdvError):
    pass


class Empty(CdvError):
    pass


class RedundantFacet(CdvError):
    def __init__(self, index, msg=None):
        self.index = index
        super().__init__(msg or f"facet {index} has dimension below d-1")


class DuplicateNormal(CdvError):
    def __init__(self, i, j):
        self.pair = (i, j)
        super().__init__(f"normals {i} and {j} are positive multiples of each other")


class DegenerateFace(CdvError):
    pass


class NotAdjacent(CdvError):
    def __init__(self, i, j):
        self.pair = (i, j)
        super().__init__(f"facets {i} and {j} do not share a codimension-2 face")


class OriginNotInterior(CdvError):
    pass


class BadParams(CdvError):
    pass


# derivatives
class InconsistentDiagonal(CdvError):
    pass


class StepTooLarge(CdvError):
    pass


# spectral checks
class NoConvergence(CdvError):
    pass


class SizeMismatch(CdvError):
    pass


class CorankMismatch(CdvError):
    def __init__(self, corank, d):
        self.corank, self.d = corank, d
        super().__init__(f"corank {corank} differs from dimension {d}")


# 3D Lovasz construction
class NotDimension3(CdvError):
    pass


class NonParallelResidual(CdvError):
    pass


class DegenerateTetrahedron(CdvError):
    pass


# mixed volumes
class RefinementViolated(CdvError):
    pass


class IllConditionedFit(CdvError):
    pass


# reconstruction
class CorankNot3(CdvError):
    def __init__(self, corank):
        self.corank = corank
        super().__init__(f"matrix has corank {corank}, expected 3")


class ClosingDefect(CdvError):
    def __init__(self, index, defect):
        self.index, self.defect = index, defect
        super().__init__(f"facet polygon {index} does not close (defect {defect:.3e})")


class InconsistentCycle(CdvError):
    pass


class UnsupportedDimension(CdvError):
    pass
