"""Exception hierarchy shared by all etfkit modules."""


class EtfError(ValueError):
    """Base class for every domain error raised by etfkit."""


class NonFinite(EtfError):
    pass


class NotSquare(EtfError):
    pass


class NotHermitian(EtfError):
    pass


class IndexOutOfRange(EtfError):
    pass


class DuplicateIndex(EtfError):
    pass


class NonzeroDiagonal(EtfError):
    def __init__(self, i: int, value: complex):
        super().__init__(f"diagonal entry ({i},{i}) is {value!r}, expected 0")
        self.i = i


class NonUnimodular(EtfError):
    def __init__(self, i: int, j: int, value: complex):
        super().__init__(f"entry ({i},{j}) has modulus {abs(value)!r}, expected 1")
        self.i = i
        self.j = j


class NotReal(EtfError):
    pass


class BadK(EtfError):
    pass


class BadPrime(EtfError):
    pass


class NotThreeModFour(EtfError):
    pass


class UnknownFixture(EtfError):
    pass


class TooLarge(EtfError):
    pass


class NonIntegralK(EtfError):
    pass


class NotProjection(EtfError):
    pass


class RankMismatch(EtfError):
    pass


class NotParseval(EtfError):
    pass


class NotEtf(EtfError):
    pass


class NotUnimodular(EtfError):
    pass


class TooManySubsets(EtfError):
    pass


class BadConfig(EtfError):
    pass


class MixedSizes(EtfError):
    pass


class ConvergenceError(EtfError):
    pass


class MatrixFormatError(EtfError):
    """Malformed matrix file (bad JSON shape, wrong types, missing keys)."""
