"""
Numberwall exceptions

Provides a hierarchy of exceptions for the different ways arithmetic,
sequence construction, wall generation and verification can be misused,
enabling precise error handling in client code. Failed identities in the
verification suite are reported, not raised.
"""


class NumberWallError(Exception):
    """Base exception for numberwall operations"""

    pass


class FieldError(NumberWallError):
    """Invalid prime or mixed moduli"""

    pass


class ZeroInversionError(FieldError):
    """Attempted to invert zero in F_p"""

    pass


class SequenceError(NumberWallError):
    """Invalid sequence construction or access"""

    pass


class NotProlongableError(SequenceError):
    """Morphism seed does not start its own image"""

    pass


class MorphismError(NumberWallError):
    """Invalid two-dimensional morphism or expansion"""

    pass


class WallError(NumberWallError):
    """Invalid wall argument"""

    pass


class EngineConsistencyError(WallError):
    """The Frame Constraints engine produced a contradictory cell"""

    def __init__(self, message: str, m: int, n: int):
        super().__init__(f"{message} at cell [{m},{n}]")
        self.m = m
        self.n = n


class WindowShapeError(WallError):
    """A zero region with fully known margin is not a square"""

    pass


class RegionError(WallError):
    """Requested region lies outside the wall"""

    pass


class WallFormatError(WallError):
    """Wall dump or profile text could not be parsed"""

    pass


class FractalError(NumberWallError):
    """Invalid box-counting input"""

    pass


class SuiteError(NumberWallError):
    """Unknown check, filter or malformed suite"""

    pass
