"""Exception types shared across the package.

Everything derives from :class:`GcvssError`, itself a ``ValueError``, so callers
that only care about "bad input" can catch one thing.
"""

from __future__ import annotations


class GcvssError(ValueError):
    pass


# graph codec
class VertexOutOfRange(GcvssError):
    pass


class SelfLoop(GcvssError):
    pass


class DuplicateEdge(GcvssError):
    pass


class NonTriangularLength(GcvssError):
    pass


class PaddingMismatch(GcvssError):
    pass


class LengthMismatch(GcvssError):
    pass


class NonBinaryStructureDigit(GcvssError):
    pass


class ColorOutOfRange(GcvssError):
    pass


# solvers and oracles
class GraphTooLarge(GcvssError):
    pass


class TooLargeForOracle(GcvssError):
    pass


# check digits
class ExtensionPatternMismatch(GcvssError):
    pass


class Malformed(GcvssError):
    """Unparseable or internally inconsistent wire data.

    ``line`` is 1-based when known; ``field`` names the offending key.
    """

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field


class PayloadTooShort(GcvssError):
    pass


class SamplingExhausted(GcvssError):
    pass


# secret sharing
class ModulusMismatch(GcvssError):
    pass


class ExcludedSecret(GcvssError):
    pass


class ShapeMismatch(GcvssError):
    pass


class DealerExhausted(GcvssError):
    def __init__(self, attempts: int):
        super().__init__(f"no share assignment passed every VSoS after {attempts} attempts")
        self.attempts = attempts


class InvalidSecret(GcvssError):
    pass


class InvalidRecovery(GcvssError):
    pass
